#include "appmin/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "appmin/numeric_text.hpp"

namespace appmin::baselines {

int DEConfig::resolved_population(int dim) const
{
    return population_size > 0 ? population_size : std::min(10 * dim, 200);
}

void DEConfig::validate(int dim) const
{
    if (resolved_population(dim) < 4)
        throw Error("DE population size must be at least 4");
    if (!(CR >= 0.0 && CR <= 1.0))
        throw Error("DE crossover rate must lie in [0, 1]");
    if (!std::isfinite(F))
        throw Error("DE differential weight must be finite");
    if (!(lo < hi))
        throw Error("DE bounds must satisfy lo < hi");
    if (max_generations < 0)
        throw Error("DE max_generations must be non-negative");
}

int Population::best_index() const
{
    return static_cast<int>(std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
}

Point make_trial(const Point& target, const Point& base, const Point& diff_a, const Point& diff_b,
                 double F, double CR, int j_rand, const std::vector<double>& crossover_draws,
                 double lo, double hi)
{
    const Eigen::Index d = target.size();
    Point trial = target;
    for (Eigen::Index j = 0; j < d; ++j) {
        if (j == j_rand || crossover_draws[static_cast<std::size_t>(j)] < CR) {
            const double v = base[j] + F * (diff_a[j] - diff_b[j]);
            trial[j] = std::clamp(v, lo, hi);
        }
    }
    return trial;
}

Population initialize_population(const ObjectiveSpec& objective, const DEConfig& config, Rng& rng)
{
    config.validate(objective.dim);
    const int np = config.resolved_population(objective.dim);
    std::uniform_real_distribution<double> uniform(config.lo, config.hi);

    Population pop;
    pop.members.resize(objective.dim, np);
    pop.fitness.resize(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) {
        for (int j = 0; j < objective.dim; ++j)
            pop.members(j, i) = uniform(rng);
    }
    pop.fitness = evaluate_batch(objective, pop.members);
    pop.eval_count = static_cast<std::uint64_t>(np);
    return pop;
}

Population de_step(const Population& pop, const ObjectiveSpec& objective, const DEConfig& config,
                   Rng& rng)
{
    const int np = pop.size();
    if (np < 4)
        throw Error("DE population size must be at least 4");
    const int d = static_cast<int>(pop.members.rows());

    std::uniform_int_distribution<int> pick(0, np - 1);
    std::uniform_int_distribution<int> pick_dim(0, d - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    PointMatrix trials(d, np);
    std::vector<double> draws(static_cast<std::size_t>(d));
    for (int i = 0; i < np; ++i) {
        int r1, r2, r3;
        do { r1 = pick(rng); } while (r1 == i);
        do { r2 = pick(rng); } while (r2 == i || r2 == r1);
        do { r3 = pick(rng); } while (r3 == i || r3 == r1 || r3 == r2);
        const int j_rand = pick_dim(rng);
        for (auto& u : draws)
            u = unit(rng);
        trials.col(i) = make_trial(pop.members.col(i), pop.members.col(r1), pop.members.col(r2),
                                   pop.members.col(r3), config.F, config.CR, j_rand, draws,
                                   config.lo, config.hi);
    }

    const std::vector<double> trial_fitness = evaluate_batch(objective, trials);
    Population next = pop;
    for (int i = 0; i < np; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (trial_fitness[idx] <= pop.fitness[idx]) {
            next.members.col(i) = trials.col(i);
            next.fitness[idx] = trial_fitness[idx];
        }
    }
    next.generation = pop.generation + 1;
    next.eval_count = pop.eval_count + static_cast<std::uint64_t>(np);
    return next;
}

namespace {

IterateRecord make_record(const Population& pop, const ObjectiveSpec& objective, double wall_ms)
{
    const int best = pop.best_index();
    IterateRecord rec;
    rec.k = pop.generation;
    rec.eval_count = pop.eval_count;
    rec.f_best = pop.fitness[static_cast<std::size_t>(best)];
    rec.x = pop.members.col(best);
    if (objective.known_minimizer)
        rec.err_sq = (rec.x - *objective.known_minimizer).squaredNorm();
    rec.wall_ms = wall_ms;
    return rec;
}

}  // namespace

RunTrace de_run(const ObjectiveSpec& objective, const DEConfig& config,
                const std::function<bool(const IterateRecord&)>& stop)
{
    config.validate(objective.dim);
    Rng rng(mix_seed(config.seed, stream_tag::differential_evolution));

    RunTrace trace;
    trace.solver = "de_rand_1_bin";
    trace.objective = objective.name;
    trace.dim = objective.dim;
    trace.seed = config.seed;
    trace.provenance["population_size"] = std::to_string(config.resolved_population(objective.dim));
    trace.provenance["F"] = format_double(config.F);
    trace.provenance["CR"] = format_double(config.CR);
    trace.provenance["domain"] = "[" + format_double(config.lo) + ", " + format_double(config.hi) + "]";
    trace.provenance["max_generations"] = std::to_string(config.max_generations);

    auto start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&start] {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - start).count();
        start = now;
        return ms;
    };

    Population pop = initialize_population(objective, config, rng);
    trace.records.push_back(make_record(pop, objective, elapsed_ms()));
    for (int g = 0; g < config.max_generations; ++g) {
        if (stop && stop(trace.records.back()))
            break;
        try {
            pop = de_step(pop, objective, config, rng);
        }
        catch (const Error& e) {
            trace.failure = e.what();
            trace.failure_k = pop.generation;
            break;
        }
        trace.records.push_back(make_record(pop, objective, elapsed_ms()));
    }
    return trace;
}

}  // namespace appmin::baselines
