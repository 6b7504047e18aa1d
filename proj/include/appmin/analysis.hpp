#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "appmin/core.hpp"
#include "appmin/quadrature.hpp"
#include "appmin/types.hpp"

namespace appmin::analysis {

// ---------------------------------------------------------------------------
// Closed-form Gaussian integrals
//
// For phi(x) = exp[-alpha (beta/2 |x-u|^2 + gamma/2 |x-v|^2)] with
// alpha (beta + gamma) > 0:
//   i1 = int phi dx
//      = exp(-alpha beta gamma |u-v|^2 / (2 (beta+gamma)))
//        * (2 pi / (alpha (beta+gamma)))^{d/2}
//   i2 = int |x-u|^2 phi dx
//      = i1 * (d / (alpha (beta+gamma)) + gamma^2 |u-v|^2 / (beta+gamma)^2)
// ---------------------------------------------------------------------------

struct GaussianIntegralParams {
    double alpha = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    Point u;
    Point v;

    int dim() const { return static_cast<int>(u.size()); }
    void validate() const;
};

double gaussian_integral_i1(const GaussianIntegralParams& params);
double gaussian_integral_i2(const GaussianIntegralParams& params);

/// The integrand phi(x) itself, for quadrature cross-checks.
double gaussian_integrand(const GaussianIntegralParams& params, const Point& x);

// ---------------------------------------------------------------------------
// Proximal points and their asymptotic representation
// ---------------------------------------------------------------------------

/// Grid argmin of f(x) + lambda/2 |x - p|^2 on the grid p + step * Z^d
/// truncated to the box of half-width grid_radius. Ties resolve to the
/// lexicographically smallest grid point. Only d <= 2.
Point proximal_point_bruteforce(const ObjectiveSpec& objective, const Point& p, double lambda,
                                double grid_radius, double grid_step);

struct QuadratureConfig {
    // Integration window is [p - radius, p + radius], then narrowed to the
    // region where the log-weight is within `log_cutoff` of its maximum.
    double radius = 8.0;
    double log_cutoff = 60.0;
    int scan_level = 16;
    quadrature::SimpsonOptions simpson{};
};

/// int x exp(-alpha (f + lambda/2 (x-p)^2)) / int exp(-alpha (f + lambda/2 (x-p)^2))
/// for a one-dimensional objective.
double asymptotic_ratio_estimate(const ObjectiveSpec& objective, double p, double lambda,
                                 double alpha, const QuadratureConfig& quad = {});

struct AlphaSweep {
    std::vector<double> alphas;
    std::vector<double> gaps;  // |ratio(alpha) - reference|
    // Smallest tested alpha whose gap is within tolerance.
    std::optional<double> alpha_within_tol;
};

/// Evaluates the asymptotic ratio on alpha = 1, 2, 4, ..., alpha_max and
/// compares with `reference` (typically the brute-force proximal point).
AlphaSweep alpha_doubling_search(const ObjectiveSpec& objective, double p, double lambda,
                                 double reference, double tol = 1e-3, double alpha_max = 4096.0,
                                 const QuadratureConfig& quad = {});

// ---------------------------------------------------------------------------
// Parameter conditions
// ---------------------------------------------------------------------------

/// 10 lambda^2 L^{d/2} / l^{d/2+2} * exp(lambda^2 M / (2 l)); the contraction
/// theory needs this below rho.
double rho_lambda(double l, double L, double lambda, double M, int d);

/// Per-iteration sample size sufficient for the one-step contraction with
/// Chebyshev constant C:
///   C^2 (L+lambda)^d / (2^{d/2} lambda^{d/2} L^{d/2}) exp(lambda M / 2)
///   * max{1, 2 l^2 / (5 lambda^2)}
double n_lower_bound(double l, double L, double lambda, double M, int d, double C_prob);

struct MkBounds {
    double lower;
    double upper;
};

/// Envelope for m_k (the RMS of f - f* under the iteration-k sampling law)
/// when |x_k - x*|^2 <= rho^k M:
///   lower = rho^k l sqrt(3d) / (2 lambda)
///   upper = rho^k L d sqrt(3 + 6 M lambda + M^2 lambda^2) / (2 lambda)
MkBounds mk_bounds(double l, double L, double lambda, double M, int d, double rho, int k);

/// sqrt(mean (f(theta) - f*)^2) over n draws theta ~ N(x_k, sigma2 I).
double mk_monte_carlo(const ObjectiveSpec& objective, const Point& x_k, double f_star,
                      double sigma2, int n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// One-dimensional iteration diagnostics
// ---------------------------------------------------------------------------

/// U_k = int |x - x*| w(x) dx / int w(x) dx with
/// w(x) = exp(-rho^{-k} (f(x) + lambda/2 (x - x_k)^2)).
double uk_diagnostic(const ObjectiveSpec& objective, double x_k, double x_star, double lambda,
                     double rho, int k, const QuadratureConfig& quad = {});

/// Exact (infinite-sample) next iterate e_{k+1}: the asymptotic ratio at
/// alpha = rho^{-k} anchored at x_k.
double exact_next_iterate(const ObjectiveSpec& objective, double x_k, double lambda, double rho,
                          int k, const QuadratureConfig& quad = {});

/// V[psi_k] / E[psi_k]^2 for psi_k = exp(-rho^{-k} f(theta)),
/// theta ~ N(x_k, rho^k / lambda). The sample size needed for the ratio
/// estimate with Chebyshev constant C is 4 C^2 times this value.
double psi_relative_variance(const ObjectiveSpec& objective, double x_k, double lambda, double rho,
                             int k, const QuadratureConfig& quad = {});

// ---------------------------------------------------------------------------
// Convergence envelope bookkeeping (reporting only; never used by the solver)
// ---------------------------------------------------------------------------

struct ConvergenceEnvelope {
    double M = 1.0;
    double rho_lambda = 0.0;
    double C_prob = 1.0;
    double gamma_env = 2.0;
    int s = 1;

    bool valid_for(double rho) const { return rho_lambda < rho; }
};

/// Number of trace rows whose squared error exceeds rho^k M.
std::size_t count_envelope_violations(const RunTrace& trace, double rho, double M);

}  // namespace appmin::analysis
