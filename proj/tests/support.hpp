#pragma once

#include <cmath>
#include <functional>
#include <initializer_list>
#include <string>

#include "appmin/core.hpp"
#include "appmin/types.hpp"

namespace testing {

inline appmin::ObjectiveSpec custom(std::string name, int dim,
                                    std::function<double(const appmin::Point&)> f)
{
    appmin::ObjectiveSpec spec;
    spec.name = std::move(name);
    spec.dim = dim;
    spec.eval = std::move(f);
    return spec;
}

inline appmin::Point pt(std::initializer_list<double> values)
{
    appmin::Point p(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values)
        p[i++] = v;
    return p;
}

// 1 x n matrix of scalar sample points.
inline appmin::PointMatrix row(std::initializer_list<double> values)
{
    appmin::PointMatrix m(1, static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values)
        m(0, i++) = v;
    return m;
}

inline bool close_rel(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace testing
