#include "appmin/core.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "appmin/numeric_text.hpp"
#include "appmin/rng.hpp"

namespace appmin {

Variant parse_variant(const std::string& name)
{
    if (name == "original")
        return Variant::original;
    if (name == "original_naive")
        return Variant::original_naive;
    if (name == "stable")
        return Variant::stable;
    throw Error("unknown APP variant '" + name + "'");
}

std::string to_string(Variant v)
{
    switch (v) {
    case Variant::original: return "original";
    case Variant::original_naive: return "original_naive";
    case Variant::stable: return "stable";
    }
    return "?";
}

void AppParams::validate() const
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error("lambda must be positive");
    if (!(rho > 0.0 && rho < 1.0))
        throw Error("rho must lie in (0, 1)");
    if (n < 1)
        throw Error("n must be at least 1");
    if (max_iters < 0)
        throw Error("max_iters must be non-negative");
}

std::optional<double> RunTrace::final_err_sq() const
{
    if (records.empty())
        return std::nullopt;
    return records.back().err_sq;
}

DegenerateWeightsError::DegenerateWeightsError(int k)
    : Error("degenerate weights (underflow) at k=" + std::to_string(k)), k_(k)
{
}

namespace {

void check_batch(const PointMatrix& points, std::span<const double> exponents)
{
    if (points.cols() == 0 || exponents.empty())
        throw Error("empty batch");
    if (static_cast<std::size_t>(points.cols()) != exponents.size())
        throw Error("batch and exponent counts differ");
    for (double g : exponents) {
        if (!std::isfinite(g))
            throw Error("non-finite weight exponent");
    }
}

// Summation order: exponent descending, then coordinates lexicographically.
// Makes the floating-point result independent of the input order.
std::vector<std::size_t> canonical_order(const PointMatrix& points, std::span<const double> g)
{
    std::vector<std::size_t> order(g.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (g[a] != g[b])
            return g[a] > g[b];
        const auto ca = points.col(static_cast<Eigen::Index>(a));
        const auto cb = points.col(static_cast<Eigen::Index>(b));
        return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
    });
    return order;
}

Point ratio(const PointMatrix& points, std::span<const double> g, double shift)
{
    Point acc = Point::Zero(points.rows());
    double total = 0.0;
    for (std::size_t i : canonical_order(points, g)) {
        const double w = std::exp(g[i] - shift);
        acc += w * points.col(static_cast<Eigen::Index>(i));
        total += w;
    }
    if (total == 0.0)
        return Point();
    Point x = acc / total;
    // Convex combination; clamp away last-bit excursions outside the hull.
    for (Eigen::Index j = 0; j < x.size(); ++j)
        x[j] = std::clamp(x[j], points.row(j).minCoeff(), points.row(j).maxCoeff());
    return x;
}

}  // namespace

Point weighted_mean(const PointMatrix& points, std::span<const double> exponents)
{
    check_batch(points, exponents);
    const double g_max = *std::max_element(exponents.begin(), exponents.end());
    return ratio(points, exponents, g_max);
}

Point weighted_mean_naive(const PointMatrix& points, std::span<const double> exponents, int k)
{
    check_batch(points, exponents);
    Point x = ratio(points, exponents, 0.0);
    if (x.size() == 0)
        throw DegenerateWeightsError(k);
    if (!x.allFinite())
        throw Error("non-finite weighted mean at k=" + std::to_string(k));
    return x;
}

std::vector<double> evaluate_batch(const ObjectiveSpec& objective, const PointMatrix& points)
{
    std::vector<double> values(static_cast<std::size_t>(points.cols()));
    Point theta(points.rows());
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
        theta = points.col(i);
        values[static_cast<std::size_t>(i)] = objective(theta);
    }
    return values;
}

double sampling_variance(const AppParams& params, int k)
{
    return std::pow(params.rho, k) / params.lambda;
}

namespace {

void update_best(IterateState& next, const PointMatrix& points, const std::vector<double>& f)
{
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < next.f_best) {
            next.f_best = f[i];
            next.x_best = points.col(static_cast<Eigen::Index>(i));
        }
    }
}

void advance(IterateState& next, const AppParams& params, std::size_t evaluated)
{
    next.k += 1;
    next.sigma2 = sampling_variance(params, next.k);
    next.eval_count += evaluated;
}

}  // namespace

IterateState app_step_original(const IterateState& state, const ObjectiveSpec& objective,
                               const AppParams& params, const sampling::SampleBatch& batch,
                               StepInfo* info)
{
    if (state.k < 1)
        throw Error("iteration index must start at 1");
    const std::vector<double> f = evaluate_batch(objective, batch.points);

    // rho^{-k} computed directly; beyond ~k=6700 for rho=0.9 it overflows,
    // which the finite-exponent check turns into an error.
    const double scale = std::pow(params.rho, -state.k);
    std::vector<double> g(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        g[i] = -scale * f[i];

    IterateState next = state;
    if (params.variant == Variant::original_naive)
        next.x = weighted_mean_naive(batch.points, g, state.k);
    else
        next.x = weighted_mean(batch.points, g);

    update_best(next, batch.points, f);
    advance(next, params, f.size());
    if (info)
        info->m_hat.reset();
    return next;
}

IterateState app_step_stable(const IterateState& state, const ObjectiveSpec& objective,
                             const AppParams& params, const sampling::SampleBatch& batch,
                             StepInfo* info)
{
    if (state.k < 1)
        throw Error("iteration index must start at 1");
    const std::vector<double> f = evaluate_batch(objective, batch.points);

    IterateState next = state;
    update_best(next, batch.points, f);

    std::vector<double> y(f.size());
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        y[i] = f[i] - next.f_best;
        sum_sq += y[i] * y[i];
    }
    const double m_hat = std::sqrt(sum_sq / static_cast<double>(f.size()));

    if (m_hat == 0.0) {
        next.x = batch.points.rowwise().mean();
    }
    else {
        std::vector<double> g(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            g[i] = -y[i] / m_hat;
        next.x = weighted_mean(batch.points, g);
    }

    advance(next, params, f.size());
    if (info)
        info->m_hat = m_hat;
    return next;
}

Point random_sphere_point(int dim, double radius, std::uint64_t seed)
{
    Rng rng(mix_seed(seed, stream_tag::initial_point));
    std::normal_distribution<double> normal;
    Point p(dim);
    double norm = 0.0;
    while (norm == 0.0) {
        for (int i = 0; i < dim; ++i)
            p[i] = normal(rng);
        norm = p.norm();
    }
    return (radius / norm) * p;
}

AppRunner::AppRunner(const ObjectiveSpec& objective, const AppParams& params)
    : objective_(objective), params_(params), stream_(params.sampler, params.seed, objective.dim)
{
    params_.validate();
    if (!objective_.eval)
        throw Error("objective has no evaluation function");

    state_.k = 1;
    state_.x = params_.initial_point
                   ? *params_.initial_point
                   : random_sphere_point(objective_.dim, std::sqrt(double(objective_.dim)),
                                         params_.seed);
    if (state_.x.size() != objective_.dim)
        throw Error("initial point dimension does not match objective");
    state_.x_best = state_.x;
    state_.sigma2 = sampling_variance(params_, state_.k);

    trace_.solver = params_.variant == Variant::stable ? "app_stable" : "app_" + to_string(params_.variant);
    trace_.objective = objective_.name;
    trace_.dim = objective_.dim;
    trace_.seed = params_.seed;
    trace_.provenance["lambda"] = format_double(params_.lambda);
    trace_.provenance["rho"] = format_double(params_.rho);
    trace_.provenance["n"] = std::to_string(params_.n);
    trace_.provenance["max_iters"] = std::to_string(params_.max_iters);
    trace_.provenance["sampler"] = sampling::to_string(params_.sampler);
    trace_.provenance["initializer"] =
        params_.initial_point ? "explicit point"
                              : "sphere radius " + format_double(std::sqrt(double(objective_.dim)));
    trace_.records.push_back(make_record());
}

IterateRecord AppRunner::make_record() const
{
    IterateRecord rec;
    rec.k = state_.k;
    rec.eval_count = state_.eval_count;
    if (objective_.known_minimizer)
        rec.err_sq = (state_.x - *objective_.known_minimizer).squaredNorm();
    rec.f_best = state_.f_best;
    rec.sigma2 = state_.sigma2;
    rec.x = state_.x;
    return rec;
}

bool AppRunner::step()
{
    if (failed())
        return false;
    const auto start = std::chrono::steady_clock::now();
    try {
        const sampling::SampleBatch batch =
            sampling::gaussian_batch(stream_, state_.x, state_.sigma2, params_.n);
        StepInfo info;
        IterateState next = params_.variant == Variant::stable
                                ? app_step_stable(state_, objective_, params_, batch, &info)
                                : app_step_original(state_, objective_, params_, batch, &info);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        trace_.records.back().m_hat = info.m_hat;
        trace_.records.back().wall_ms = ms;
        state_ = std::move(next);
        trace_.records.push_back(make_record());
        return true;
    }
    catch (const Error& e) {
        trace_.failure = e.what();
        trace_.failure_k = state_.k;
        return false;
    }
}

RunTrace run(const ObjectiveSpec& objective, const AppParams& params)
{
    AppRunner runner(objective, params);
    for (int i = 0; i < params.max_iters; ++i) {
        if (!runner.step())
            break;
    }
    return runner.take_trace();
}

}  // namespace appmin
