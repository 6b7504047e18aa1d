#include "appmin/objectives.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <sstream>

#include "appmin/rng.hpp"

namespace appmin::objectives {

namespace {

constexpr double kFivePi = 5.0 * std::numbers::pi;

void require_dim(const Point& x, int dim, const char* name)
{
    if (x.size() != dim) {
        std::ostringstream msg;
        msg << name << ": expected dimension " << dim << ", got " << x.size();
        throw Error(msg.str());
    }
}

}  // namespace

double revised_rastrigin(const Point& x)
{
    const double d = static_cast<double>(x.size());
    double cos_sum = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        cos_sum += std::cos(kFivePi * x[i]);
    const double interior = x.squaredNorm() - 0.5 * cos_sum + 0.5 * d + 0.1;
    assert(interior > 0.0);
    return std::log(interior) - std::log(0.1);
}

double fig1_left(double x)
{
    return x * x + x * x * std::cos(kFivePi * x) / 2.0;
}

double fig1_right(double x)
{
    return x * x - std::cos(kFivePi * x) / 2.0 + 0.5;
}

double sphere(const Point& x)
{
    return x.squaredNorm();
}

std::vector<std::string> objective_names()
{
    return {"revised_rastrigin", "fig1_left", "fig1_right", "sphere"};
}

ObjectiveSpec make_objective(const std::string& name, int dim)
{
    if (dim < 1)
        throw Error("objective dimension must be positive");

    ObjectiveSpec spec;
    spec.name = name;
    spec.dim = dim;
    spec.known_minimizer = Point::Zero(dim);
    spec.known_minimum = 0.0;

    if (name == "revised_rastrigin") {
        spec.eval = [dim](const Point& x) {
            require_dim(x, dim, "revised_rastrigin");
            return revised_rastrigin(x);
        };
    }
    else if (name == "sphere") {
        spec.eval = [dim](const Point& x) {
            require_dim(x, dim, "sphere");
            return sphere(x);
        };
        spec.growth = GrowthConstants{2.0, 2.0};
    }
    else if (name == "fig1_left" || name == "fig1_right") {
        if (dim != 1)
            throw Error(name + " is one-dimensional");
        const bool left = name == "fig1_left";
        spec.eval = [left](const Point& x) {
            require_dim(x, 1, left ? "fig1_left" : "fig1_right");
            return left ? fig1_left(x[0]) : fig1_right(x[0]);
        };
        spec.growth = left ? GrowthConstants{1.0, 3.0} : GrowthConstants{2.0, 130.0};
    }
    else {
        throw Error("unknown objective '" + name + "'");
    }
    return spec;
}

BoundCheckReport check_assumption_bounds(const ObjectiveSpec& objective, double l, double L,
                                         double region_radius, std::size_t n_samples,
                                         std::uint64_t seed)
{
    if (!objective.known_minimizer || !objective.known_minimum)
        throw Error("bound check needs a known minimizer and minimum");
    if (!(l > 0.0 && l <= L))
        throw Error("bound check needs 0 < l <= L");
    if (!(region_radius > 0.0))
        throw Error("bound check needs a positive region radius");

    const Point& center = *objective.known_minimizer;
    const double f_star = *objective.known_minimum;
    const int d = objective.dim;

    BoundCheckReport report;
    std::ostringstream region;
    region << "ball of radius " << region_radius << " around x* in R^" << d;
    report.region = region.str();

    Rng rng(mix_seed(seed, stream_tag::bound_check));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;

    Point x(d);
    for (std::size_t s = 0; s < n_samples; ++s) {
        Point dir(d);
        for (int i = 0; i < d; ++i)
            dir[i] = normal(rng);
        const double norm = dir.norm();
        if (norm == 0.0)
            continue;
        const double r = region_radius * std::pow(uniform(rng), 1.0 / d);
        x = center + (r / norm) * dir;

        const double dist2 = (x - center).squaredNorm();
        const double fx = objective(x);
        const double lower = f_star + 0.5 * l * dist2;
        const double upper = f_star + 0.5 * L * dist2;
        // Rounding slack; exact-equality objectives (sphere with l = L = 2)
        // must not register as violations.
        const double slack = 1e-12 * (1.0 + std::abs(fx));
        ++report.tested_points;
        if (fx < lower - slack) {
            ++report.violations_lower;
            report.worst_lower_margin = std::max(report.worst_lower_margin, lower - fx);
        }
        if (fx > upper + slack) {
            ++report.violations_upper;
            report.worst_upper_margin = std::max(report.worst_upper_margin, fx - upper);
        }
    }
    return report;
}

}  // namespace appmin::objectives
