#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "appmin/core.hpp"
#include "appmin/rng.hpp"
#include "appmin/types.hpp"

namespace appmin::baselines {

struct DEConfig {
    int population_size = 0;  // 0 selects min(10 d, 200)
    double F = 0.5;
    double CR = 0.9;
    double lo = -1.0;
    double hi = 1.0;
    int max_generations = 100;
    std::uint64_t seed = 0;

    int resolved_population(int dim) const;
    void validate(int dim) const;
};

struct Population {
    PointMatrix members;  // d x NP
    std::vector<double> fitness;
    int generation = 0;
    std::uint64_t eval_count = 0;

    int size() const { return static_cast<int>(members.cols()); }
    int best_index() const;
};

/// Builds the DE/rand/1/bin trial for one target:
///   v = base + F (diff_a - diff_b), then binomial crossover with the target
///   taking v_j when crossover_draws[j] < CR or j == j_rand, then clipping
///   to [lo, hi].
Point make_trial(const Point& target, const Point& base, const Point& diff_a, const Point& diff_b,
                 double F, double CR, int j_rand, const std::vector<double>& crossover_draws,
                 double lo, double hi);

Population initialize_population(const ObjectiveSpec& objective, const DEConfig& config, Rng& rng);

/// One synchronous generation: all trials are built from the current
/// population, then greedy selection replaces targets by better trials.
Population de_step(const Population& pop, const ObjectiveSpec& objective, const DEConfig& config,
                   Rng& rng);

/// Full run; one record per generation starting with the initial
/// population (k = 0). sigma2 and m_hat columns stay empty. The run ends
/// early once `stop` returns true for the latest record.
RunTrace de_run(const ObjectiveSpec& objective, const DEConfig& config,
                const std::function<bool(const IterateRecord&)>& stop = {});

}  // namespace appmin::baselines
