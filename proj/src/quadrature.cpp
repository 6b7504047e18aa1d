#include "appmin/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace appmin::quadrature {

namespace {

struct ShiftedSums {
    double numerator = 0.0;
    double denominator = 0.0;
};

ShiftedSums simpson_level(double lo, double hi, const std::function<double(double)>& log_weight,
                          const std::function<double(double)>* numerator, int level)
{
    const std::size_t intervals = std::size_t{1} << level;
    const double h = (hi - lo) / static_cast<double>(intervals);
    std::vector<double> g(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i)
        g[i] = log_weight(lo + h * static_cast<double>(i));
    const double g_max = *std::max_element(g.begin(), g.end());
    if (!std::isfinite(g_max))
        throw Error("vanishing mass; raise quad resolution");

    ShiftedSums sums;
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double coeff = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double w = coeff * std::exp(g[i] - g_max);
        sums.denominator += w;
        if (numerator)
            sums.numerator += w * (*numerator)(lo + h * static_cast<double>(i));
    }
    sums.denominator *= h / 3.0;
    sums.numerator *= h / 3.0;
    return sums;
}

}  // namespace

RatioResult exp_weighted_ratio(double lo, double hi, const std::function<double(double)>& log_weight,
                               const std::function<double(double)>& numerator,
                               const SimpsonOptions& options)
{
    if (!(hi > lo))
        throw Error("quadrature interval is empty");
    double previous = std::numeric_limits<double>::quiet_NaN();
    RatioResult result;
    for (int level = std::max(2, options.min_level - 1); level <= options.max_level; ++level) {
        const ShiftedSums sums = simpson_level(lo, hi, log_weight, &numerator, level);
        if (!(sums.denominator > std::numeric_limits<double>::min()) || !std::isfinite(sums.denominator))
            throw Error("vanishing mass; raise quad resolution");
        const double value = sums.numerator / sums.denominator;
        if (level >= options.min_level) {
            result.value = value;
            result.level = level;
            result.last_change = std::abs(value - previous);
            if (result.last_change < options.tol)
                return result;
        }
        previous = value;
    }
    throw Error("quadrature did not reach tolerance; raise max_level");
}

double log_integral_exp(double lo, double hi, const std::function<double(double)>& log_weight,
                        int level)
{
    const std::size_t intervals = std::size_t{1} << level;
    const double h = (hi - lo) / static_cast<double>(intervals);
    double g_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= intervals; ++i)
        g_max = std::max(g_max, log_weight(lo + h * static_cast<double>(i)));
    if (!std::isfinite(g_max))
        throw Error("vanishing mass; raise quad resolution");
    const ShiftedSums sums = simpson_level(lo, hi, log_weight, nullptr, level);
    return g_max + std::log(sums.denominator);
}

namespace {

double integrate_axis(const std::function<double(const Point&)>& f, const Point& lo,
                      const Point& hi, Point& x, Eigen::Index axis, double tol)
{
    using boost::math::quadrature::gauss_kronrod;
    auto slice = [&](double t) {
        x[axis] = t;
        if (axis + 1 == x.size())
            return f(x);
        return integrate_axis(f, lo, hi, x, axis + 1, tol);
    };
    return gauss_kronrod<double, 61>::integrate(slice, lo[axis], hi[axis], 12, tol);
}

}  // namespace

double integrate_box(const std::function<double(const Point&)>& f, const Point& lo,
                     const Point& hi, double tol)
{
    if (lo.size() != hi.size() || lo.size() == 0)
        throw Error("integrate_box: bounds must have equal positive dimension");
    Point x = lo;
    return integrate_axis(f, lo, hi, x, 0, tol);
}

}  // namespace appmin::quadrature
