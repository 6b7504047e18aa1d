#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace appmin {

using Point = Eigen::VectorXd;

// Columns are sample points; a d x n matrix holds n points in R^d.
using PointMatrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadratic growth constants (l, L) around the global minimizer:
//   f* + l/2 |x - x*|^2 <= f(x) <= f* + L/2 |x - x*|^2
struct GrowthConstants {
    double lower;
    double upper;
};

struct ObjectiveSpec {
    std::string name;
    int dim = 0;
    std::function<double(const Point&)> eval;
    std::optional<Point> known_minimizer;
    std::optional<double> known_minimum;
    std::optional<GrowthConstants> growth;

    double operator()(const Point& x) const { return eval(x); }
};

}  // namespace appmin
