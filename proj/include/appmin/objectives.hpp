#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "appmin/types.hpp"

namespace appmin::objectives {

// log(|x|^2 - 1/2 sum cos(5 pi x_i) + d/2 + 1/10) - log(1/10)
// Unique global minimizer at the origin, 5^d local minima inside [-1,1]^d.
double revised_rastrigin(const Point& x);

// x^2 + x^2 cos(5 pi x) / 2, enclosed by x^2/2 and 3x^2/2.
double fig1_left(double x);

// x^2 - cos(5 pi x) / 2 + 1/2, enclosed by x^2 and 65x^2.
double fig1_right(double x);

double sphere(const Point& x);

// Resolves "revised_rastrigin", "fig1_left", "fig1_right" or "sphere".
// fig1_* are one-dimensional; asking for another dim is an error.
ObjectiveSpec make_objective(const std::string& name, int dim);

std::vector<std::string> objective_names();

struct BoundCheckReport {
    std::size_t tested_points = 0;
    std::size_t violations_lower = 0;
    std::size_t violations_upper = 0;
    // Largest amount by which f fell below (resp. rose above) the envelope;
    // zero when there is no violation.
    double worst_lower_margin = 0.0;
    double worst_upper_margin = 0.0;
    std::string region;
};

// Samples n_samples points uniformly in the ball of radius region_radius
// around the known minimizer and counts violations of either quadratic
// envelope inequality with constants (l, L).
BoundCheckReport check_assumption_bounds(const ObjectiveSpec& objective, double l, double L,
                                         double region_radius, std::size_t n_samples,
                                         std::uint64_t seed);

}  // namespace appmin::objectives
