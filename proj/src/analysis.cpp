#include "appmin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "appmin/rng.hpp"

namespace appmin::analysis {

void GaussianIntegralParams::validate() const
{
    if (u.size() != v.size() || u.size() == 0)
        throw Error("u and v must have the same positive dimension");
    if (!(alpha * (beta + gamma) > 0.0))
        throw Error("divergent integral");
}

double gaussian_integral_i1(const GaussianIntegralParams& params)
{
    params.validate();
    const double s = params.beta + params.gamma;
    const double dist2 = (params.u - params.v).squaredNorm();
    const double d = params.dim();
    return std::exp(-params.alpha * params.beta * params.gamma * dist2 / (2.0 * s))
           * std::pow(2.0 * std::numbers::pi / (params.alpha * s), d / 2.0);
}

double gaussian_integral_i2(const GaussianIntegralParams& params)
{
    const double i1 = gaussian_integral_i1(params);
    const double s = params.beta + params.gamma;
    const double dist2 = (params.u - params.v).squaredNorm();
    const double d = params.dim();
    return i1 * (d / (params.alpha * s) + params.gamma * params.gamma * dist2 / (s * s));
}

double gaussian_integrand(const GaussianIntegralParams& params, const Point& x)
{
    return std::exp(-params.alpha * (0.5 * params.beta * (x - params.u).squaredNorm()
                                     + 0.5 * params.gamma * (x - params.v).squaredNorm()));
}

Point proximal_point_bruteforce(const ObjectiveSpec& objective, const Point& p, double lambda,
                                double grid_radius, double grid_step)
{
    const int d = static_cast<int>(p.size());
    if (d > 2 || objective.dim > 2)
        throw Error("oracle limited to desk-scale dimensions");
    if (d != objective.dim)
        throw Error("anchor dimension does not match objective");
    if (!(grid_step > 0.0) || !(grid_radius >= 0.0))
        throw Error("grid step must be positive and radius non-negative");

    const long half = static_cast<long>(std::floor(grid_radius / grid_step + 1e-9));
    Point x(d);
    Point best = p;
    double best_value = std::numeric_limits<double>::infinity();

    auto visit = [&] {
        const double value = objective(x) + 0.5 * lambda * (x - p).squaredNorm();
        if (value < best_value) {
            best_value = value;
            best = x;
        }
    };

    if (d == 1) {
        for (long i = -half; i <= half; ++i) {
            x[0] = p[0] + grid_step * static_cast<double>(i);
            visit();
        }
    }
    else {
        for (long i = -half; i <= half; ++i) {
            x[0] = p[0] + grid_step * static_cast<double>(i);
            for (long j = -half; j <= half; ++j) {
                x[1] = p[1] + grid_step * static_cast<double>(j);
                visit();
            }
        }
    }
    return best;
}

namespace {

void require_1d(const ObjectiveSpec& objective)
{
    if (objective.dim != 1)
        throw Error("quadrature diagnostics are one-dimensional");
}

struct Window {
    double lo;
    double hi;
};

// Narrows [center - radius, center + radius] to the support where the
// log-weight is within log_cutoff of its maximum on a uniform scan.
Window effective_window(double center, const std::function<double(double)>& log_weight,
                        const QuadratureConfig& quad)
{
    const double lo = center - quad.radius;
    const double hi = center + quad.radius;
    const std::size_t intervals = std::size_t{1} << quad.scan_level;
    const double h = (hi - lo) / static_cast<double>(intervals);

    std::vector<double> g(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        g[i] = log_weight(lo + h * static_cast<double>(i));
    const double g_max = *std::max_element(g.begin(), g.end());
    if (!std::isfinite(g_max))
        throw Error("vanishing mass; raise quad resolution");

    std::size_t first = 0;
    while (g[first] < g_max - quad.log_cutoff)
        ++first;
    std::size_t last = intervals;
    while (g[last] < g_max - quad.log_cutoff)
        --last;
    first = first > 0 ? first - 1 : 0;
    last = std::min(intervals, last + 1);
    return {lo + h * static_cast<double>(first), lo + h * static_cast<double>(last)};
}

double ratio_on_window(double center, const std::function<double(double)>& log_weight,
                       const std::function<double(double)>& numerator,
                       const QuadratureConfig& quad)
{
    const Window w = effective_window(center, log_weight, quad);
    return quadrature::exp_weighted_ratio(w.lo, w.hi, log_weight, numerator, quad.simpson).value;
}

}  // namespace

double asymptotic_ratio_estimate(const ObjectiveSpec& objective, double p, double lambda,
                                 double alpha, const QuadratureConfig& quad)
{
    require_1d(objective);
    if (!(alpha > 0.0))
        throw Error("alpha must be positive");
    Point x(1);
    auto log_weight = [&](double t) {
        x[0] = t;
        return -alpha * (objective(x) + 0.5 * lambda * (t - p) * (t - p));
    };
    return ratio_on_window(p, log_weight, [](double t) { return t; }, quad);
}

AlphaSweep alpha_doubling_search(const ObjectiveSpec& objective, double p, double lambda,
                                 double reference, double tol, double alpha_max,
                                 const QuadratureConfig& quad)
{
    AlphaSweep sweep;
    for (double alpha = 1.0; alpha <= alpha_max; alpha *= 2.0) {
        const double gap = std::abs(asymptotic_ratio_estimate(objective, p, lambda, alpha, quad) - reference);
        sweep.alphas.push_back(alpha);
        sweep.gaps.push_back(gap);
        if (!sweep.alpha_within_tol && gap <= tol)
            sweep.alpha_within_tol = alpha;
    }
    return sweep;
}

double rho_lambda(double l, double L, double lambda, double M, int d)
{
    const double half_d = 0.5 * d;
    return 10.0 * lambda * lambda * std::pow(L, half_d) / std::pow(l, half_d + 2.0)
           * std::exp(lambda * lambda * M / (2.0 * l));
}

double n_lower_bound(double l, double L, double lambda, double M, int d, double C_prob)
{
    const double half_d = 0.5 * d;
    return C_prob * C_prob * std::pow(L + lambda, d)
           / (std::pow(2.0, half_d) * std::pow(lambda, half_d) * std::pow(L, half_d))
           * std::exp(lambda * M / 2.0) * std::max(1.0, 2.0 * l * l / (5.0 * lambda * lambda));
}

MkBounds mk_bounds(double l, double L, double lambda, double M, int d, double rho, int k)
{
    const double scale = std::pow(rho, k) / (2.0 * lambda);
    const double lower = scale * l * std::sqrt(3.0 * d);
    const double upper = scale * L * d * std::sqrt(3.0 + 6.0 * M * lambda + M * M * lambda * lambda);
    return {lower, upper};
}

double mk_monte_carlo(const ObjectiveSpec& objective, const Point& x_k, double f_star,
                      double sigma2, int n, std::uint64_t seed)
{
    if (n < 1)
        throw Error("mk_monte_carlo needs n >= 1");
    Rng rng(mix_seed(seed, stream_tag::monte_carlo));
    std::normal_distribution<double> normal;
    const double sigma = std::sqrt(sigma2);
    Point theta(x_k.size());
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < x_k.size(); ++j)
            theta[j] = x_k[j] + sigma * normal(rng);
        const double y = objective(theta) - f_star;
        sum_sq += y * y;
    }
    return std::sqrt(sum_sq / n);
}

double uk_diagnostic(const ObjectiveSpec& objective, double x_k, double x_star, double lambda,
                     double rho, int k, const QuadratureConfig& quad)
{
    require_1d(objective);
    const double alpha = std::pow(rho, -k);
    Point x(1);
    auto log_weight = [&](double t) {
        x[0] = t;
        return -alpha * (objective(x) + 0.5 * lambda * (t - x_k) * (t - x_k));
    };
    return ratio_on_window(x_k, log_weight, [x_star](double t) { return std::abs(t - x_star); }, quad);
}

double exact_next_iterate(const ObjectiveSpec& objective, double x_k, double lambda, double rho,
                          int k, const QuadratureConfig& quad)
{
    return asymptotic_ratio_estimate(objective, x_k, lambda, std::pow(rho, -k), quad);
}

double psi_relative_variance(const ObjectiveSpec& objective, double x_k, double lambda, double rho,
                             int k, const QuadratureConfig& quad)
{
    require_1d(objective);
    const double alpha = std::pow(rho, -k);
    const double precision = alpha * lambda;  // 1 / sigma^2
    Point x(1);
    // Logs of psi and psi^2 times the unnormalised sampling density.
    auto log_psi_density = [&](double t) {
        x[0] = t;
        return -alpha * objective(x) - 0.5 * precision * (t - x_k) * (t - x_k);
    };
    auto log_psi2_density = [&](double t) {
        x[0] = t;
        return -2.0 * alpha * objective(x) - 0.5 * precision * (t - x_k) * (t - x_k);
    };
    const Window w1 = effective_window(x_k, log_psi_density, quad);
    const Window w2 = effective_window(x_k, log_psi2_density, quad);
    const int level = quad.simpson.max_level - 4;
    const double log_norm = 0.5 * std::log(precision / (2.0 * std::numbers::pi));
    const double log_e1 = log_norm + quadrature::log_integral_exp(w1.lo, w1.hi, log_psi_density, level);
    const double log_e2 = log_norm + quadrature::log_integral_exp(w2.lo, w2.hi, log_psi2_density, level);
    return std::expm1(log_e2 - 2.0 * log_e1);
}

std::size_t count_envelope_violations(const RunTrace& trace, double rho, double M)
{
    std::size_t violations = 0;
    for (const IterateRecord& rec : trace.records) {
        if (rec.err_sq && *rec.err_sq > std::pow(rho, rec.k) * M)
            ++violations;
    }
    return violations;
}

}  // namespace appmin::analysis
