#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "appmin/sampling.hpp"
#include "appmin/types.hpp"

namespace appmin {

enum class Variant {
    original,        // exponent -rho^{-k} f, max-shifted before exp
    original_naive,  // exponent -rho^{-k} f, exponentiated literally
    stable,          // exponent -(f - f_best) / m_hat
};

Variant parse_variant(const std::string& name);
std::string to_string(Variant v);

struct AppParams {
    double lambda = 1.0;
    double rho = 0.9;
    int n = 10;
    Variant variant = Variant::stable;
    int max_iters = 100;
    sampling::SamplerKind sampler = sampling::SamplerKind::pseudo_random;
    std::uint64_t seed = 0;
    // Starting point; when unset, a uniform point on the sphere of
    // radius sqrt(d) around the origin is drawn from the seed.
    std::optional<Point> initial_point;

    void validate() const;
};

struct IterateState {
    int k = 1;
    Point x;
    double f_best = std::numeric_limits<double>::infinity();
    Point x_best;
    double sigma2 = 0.0;
    std::uint64_t eval_count = 0;
};

/// One row per iteration index k. The row describes the state at the start
/// of iteration k (x_k, sigma2_k, f_best and eval_count so far); m_hat is
/// the normalizer computed during iteration k and stays empty until the
/// iteration has run, and always for the non-stable variants.
struct IterateRecord {
    int k = 0;
    std::uint64_t eval_count = 0;
    std::optional<double> err_sq;
    double f_best = std::numeric_limits<double>::infinity();
    std::optional<double> m_hat;
    std::optional<double> sigma2;
    double wall_ms = 0.0;
    Point x;
};

struct RunTrace {
    std::string solver;
    std::string objective;
    int dim = 0;
    std::uint64_t seed = 0;
    std::vector<IterateRecord> records;
    // Parameters and defaults behind the run, written into trace headers.
    std::map<std::string, std::string> provenance;
    // Set when the run stopped on a step error; records up to the failing
    // iteration are kept.
    std::optional<std::string> failure;
    std::optional<int> failure_k;

    std::optional<double> final_err_sq() const;
};

/// Error raised by the naive variant once every weight underflows to zero.
class DegenerateWeightsError : public Error {
public:
    explicit DegenerateWeightsError(int k);
    int k() const { return k_; }

private:
    int k_;
};

/// sum_i w_i theta_i / sum_i w_i with w_i = exp(g_i - max_j g_j).
Point weighted_mean(const PointMatrix& points, std::span<const double> exponents);

/// Same ratio with w_i = exp(g_i) taken literally. Throws
/// DegenerateWeightsError (carrying k) when the weight sum is zero.
Point weighted_mean_naive(const PointMatrix& points, std::span<const double> exponents, int k);

/// Evaluates the objective on every column of the batch, in column order.
std::vector<double> evaluate_batch(const ObjectiveSpec& objective, const PointMatrix& points);

/// Diagnostics of a single step that are not part of the iterate state.
struct StepInfo {
    std::optional<double> m_hat;
};

IterateState app_step_original(const IterateState& state, const ObjectiveSpec& objective,
                               const AppParams& params, const sampling::SampleBatch& batch,
                               StepInfo* info = nullptr);

IterateState app_step_stable(const IterateState& state, const ObjectiveSpec& objective,
                             const AppParams& params, const sampling::SampleBatch& batch,
                             StepInfo* info = nullptr);

/// Uniform point on the sphere of the given radius centred at the origin.
Point random_sphere_point(int dim, double radius, std::uint64_t seed);

/// sigma^2_k = rho^k / lambda, computed directly from k.
double sampling_variance(const AppParams& params, int k);

/// Drives one APP run iteration by iteration. Owns the sampler stream so
/// that the whole run consumes a single non-repeating sequence.
class AppRunner {
public:
    AppRunner(const ObjectiveSpec& objective, const AppParams& params);

    const IterateState& state() const { return state_; }
    const RunTrace& trace() const { return trace_; }
    bool failed() const { return trace_.failure.has_value(); }

    /// Runs iteration k = state().k. Returns false, recording the failure in
    /// the trace, when the step throws.
    bool step();

    RunTrace take_trace() { return std::move(trace_); }

private:
    IterateRecord make_record() const;

    const ObjectiveSpec& objective_;
    AppParams params_;
    sampling::SamplerStream stream_;
    IterateState state_;
    RunTrace trace_;
};

/// Runs params.max_iters iterations. Step failures end the run early and
/// are reported through RunTrace::failure.
RunTrace run(const ObjectiveSpec& objective, const AppParams& params);

}  // namespace appmin
