#include "appmin/validate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "appmin/analysis.hpp"
#include "appmin/numeric_text.hpp"
#include "appmin/objectives.hpp"
#include "appmin/quadrature.hpp"
#include "appmin/rng.hpp"

namespace appmin::validation {

bool Report::all_passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

template <typename Body>
CheckResult guarded(const std::string& name, double tolerance, Body body)
{
    CheckResult result;
    result.name = name;
    result.tolerance = tolerance;
    try {
        body(result);
    }
    catch (const std::exception& e) {
        result.passed = false;
        result.detail = std::string("exception: ") + e.what();
    }
    return result;
}

double relative_error(double value, double reference)
{
    return std::abs(value - reference) / std::abs(reference);
}

}  // namespace

CheckResult check_gaussian_integrals(const Options& options)
{
    constexpr double tol = 1e-8;
    return guarded("gaussian_integrals", tol, [&](CheckResult& r) {
        Rng rng(mix_seed(options.seed, 101));
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uniform_real_distribution<double> coef(-1.0, 3.0);
        std::uniform_real_distribution<double> scale(0.3, 3.0);
        int cases = 0;
        for (int d = 1; d <= 3; ++d) {
            for (int rep = 0; rep < 20; ++rep) {
                analysis::GaussianIntegralParams p;
                p.alpha = scale(rng);
                do {
                    p.beta = coef(rng);
                    p.gamma = coef(rng);
                } while (p.beta + p.gamma < 0.3);
                if (rng() & 1) {
                    p.alpha = -p.alpha;
                    p.beta = -p.beta;
                    p.gamma = -p.gamma;
                }
                p.u = Point(d);
                p.v = Point(d);
                for (int j = 0; j < d; ++j) {
                    p.u[j] = unit(rng);
                    p.v[j] = unit(rng);
                }

                double i1 = analysis::gaussian_integral_i1(p);
                double i2 = analysis::gaussian_integral_i2(p);
                const double s = p.beta + p.gamma;
                if (options.inject_integral_sign_fault) {
                    const double flip =
                        std::exp(p.alpha * p.beta * p.gamma * (p.u - p.v).squaredNorm() / s);
                    i1 *= flip;
                    i2 *= flip;
                }

                // The integrand is a Gaussian with precision alpha (beta + gamma)
                // centred at (beta u + gamma v) / (beta + gamma).
                const Point centre = (p.beta * p.u + p.gamma * p.v) / s;
                const double half = 9.0 / std::sqrt(p.alpha * s);
                const Point lo = centre.array() - half;
                const Point hi = centre.array() + half;
                const double q1 = quadrature::integrate_box(
                    [&](const Point& x) { return analysis::gaussian_integrand(p, x); }, lo, hi);
                const double q2 = quadrature::integrate_box(
                    [&](const Point& x) {
                        return (x - p.u).squaredNorm() * analysis::gaussian_integrand(p, x);
                    },
                    lo, hi);
                r.max_error = std::max({r.max_error, relative_error(i1, q1), relative_error(i2, q2)});
                ++cases;
            }
        }
        r.passed = r.max_error <= tol;
        r.detail = std::to_string(cases) + " parameter sets, d in {1,2,3}, i1 and i2 vs cubature";
    });
}

CheckResult check_asymptotic_ratio(const Options&)
{
    constexpr double tol = 1e-3;
    return guarded("asymptotic_ratio", tol, [&](CheckResult& r) {
        struct Case {
            const char* objective;
            double p;
            double lambda;
        };
        const Case cases[] = {
            {"fig1_left", 0.3, 1.0},  {"fig1_left", 0.7, 0.5},   {"fig1_left", -0.45, 2.0},
            {"fig1_right", 0.3, 0.5}, {"fig1_right", 0.55, 1.5}, {"fig1_right", -0.7, 1.5},
        };
        for (const Case& c : cases) {
            const ObjectiveSpec f = objectives::make_objective(c.objective, 1);
            const Point anchor = Point::Constant(1, c.p);
            const double reference =
                analysis::proximal_point_bruteforce(f, anchor, c.lambda, 2.0, 1e-5)[0];
            const analysis::AlphaSweep sweep =
                analysis::alpha_doubling_search(f, c.p, c.lambda, reference, tol, 4096.0);
            r.max_error = std::max(r.max_error, sweep.gaps.back());
        }
        r.passed = r.max_error <= tol;
        r.detail = "fig1_left and fig1_right, 3 (p, lambda) pairs each, gap at alpha = 4096";
    });
}

CheckResult check_mk_envelope(const Options& options)
{
    return guarded("mk_envelope", 0.0, [&](CheckResult& r) {
        const ObjectiveSpec sphere = objectives::make_objective("sphere", 2);
        const double l = 2.0, L = 2.0, lambda = 1.0, rho = 0.9, M = 1.0;
        int inside = 0, total = 0;
        for (int k = 0; k <= 3; ++k) {
            const analysis::MkBounds b = analysis::mk_bounds(l, L, lambda, M, 2, rho, k);
            for (std::uint64_t s = 0; s < 10; ++s) {
                const std::uint64_t seed = options.seed + 1000 * k + s;
                const Point x_k = random_sphere_point(2, std::sqrt(std::pow(rho, k) * M), seed);
                const double m = analysis::mk_monte_carlo(sphere, x_k, 0.0,
                                                          std::pow(rho, k) / lambda, 100000, seed);
                // Distance outside the envelope, relative to the envelope scale.
                const double outside = std::max({0.0, b.lower - m, m - b.upper}) / b.upper;
                r.max_error = std::max(r.max_error, outside);
                inside += outside == 0.0;
                ++total;
            }
        }
        r.passed = inside == total;
        r.detail = std::to_string(inside) + "/" + std::to_string(total)
                   + " Monte Carlo m_k inside the bounds (sphere, d=2, k=0..3)";
    });
}

CheckResult check_rho_lambda(const Options&)
{
    return guarded("rho_lambda_monotone", 0.0, [&](CheckResult& r) {
        int violations = 0;
        for (int d : {1, 2, 5}) {
            for (double l : {0.5, 1.0, 2.0}) {
                const double L = 2.0 * l;
                double prev = analysis::rho_lambda(l, L, 0.01, 1.0, d);
                for (double lambda = 0.02; lambda <= 2.0; lambda += 0.01) {
                    const double cur = analysis::rho_lambda(l, L, lambda, 1.0, d);
                    if (!(cur > prev)) {
                        ++violations;
                        r.max_error = std::max(r.max_error, prev - cur);
                    }
                    prev = cur;
                }
                prev = analysis::rho_lambda(l, L, 0.5, 0.0, d);
                for (double M = 0.1; M <= 10.0; M += 0.1) {
                    const double cur = analysis::rho_lambda(l, L, 0.5, M, d);
                    if (!(cur > prev)) {
                        ++violations;
                        r.max_error = std::max(r.max_error, prev - cur);
                    }
                    prev = cur;
                }
            }
        }
        r.passed = violations == 0;
        r.detail = std::to_string(violations) + " monotonicity violations over lambda and M grids";
    });
}

Report validate(const Options& options)
{
    Report report;
    report.checks.push_back(check_gaussian_integrals(options));
    report.checks.push_back(check_asymptotic_ratio(options));
    report.checks.push_back(check_mk_envelope(options));
    report.checks.push_back(check_rho_lambda(options));
    return report;
}

void print_report(const Report& report, std::ostream& out)
{
    for (const CheckResult& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << "  max_error=" << format_double(c.max_error)
            << "  tol=" << format_double(c.tolerance) << "  " << c.detail << '\n';
    }
    out << (report.all_passed() ? "all checks passed" : "some checks failed") << '\n';
}

}  // namespace appmin::validation
