#pragma once

#include <functional>
#include <vector>

#include "appmin/types.hpp"

namespace appmin::quadrature {

struct SimpsonOptions {
    int min_level = 8;    // 2^level subintervals at the first comparison
    int max_level = 22;
    double tol = 1e-10;   // stop when successive refinements differ by less
};

struct RatioResult {
    double value = 0.0;
    int level = 0;        // refinement level that met the tolerance
    double last_change = 0.0;
};

/// Ratio  int num(x) exp(g(x)) dx / int exp(g(x)) dx  over [lo, hi] by
/// composite Simpson. Each level subtracts max g over its nodes before
/// exponentiating and the grid is doubled until the ratio changes by less
/// than tol (absolute). Throws when the denominator mass vanishes or the
/// refinement budget is exhausted.
RatioResult exp_weighted_ratio(double lo, double hi, const std::function<double(double)>& log_weight,
                               const std::function<double(double)>& numerator,
                               const SimpsonOptions& options = {});

/// Log of  int exp(g(x)) dx  over [lo, hi] on a fixed composite Simpson
/// grid with 2^level subintervals.
double log_integral_exp(double lo, double hi, const std::function<double(double)>& log_weight,
                        int level);

/// Nested adaptive Gauss-Kronrod (61-point) integral of f over the box
/// [lo, hi] in R^d; each axis is integrated to relative tolerance tol.
double integrate_box(const std::function<double(const Point&)>& f, const Point& lo,
                     const Point& hi, double tol = 1e-12);

}  // namespace appmin::quadrature
