// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. `appmin_acceptance N` runs criterion N only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "appmin/analysis.hpp"
#include "appmin/config.hpp"
#include "appmin/core.hpp"
#include "appmin/harness.hpp"
#include "appmin/numeric_text.hpp"
#include "appmin/objectives.hpp"
#include "appmin/sampling.hpp"
#include "appmin/validate.hpp"

using namespace appmin;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome timed_check(const std::function<validation::CheckResult()>& check, double limit_s)
{
    const auto start = std::chrono::steady_clock::now();
    const validation::CheckResult r = check();
    const double t = seconds_since(start);
    return {r.passed && t < limit_s, "max_error=" + fmt(r.max_error) + " tol=" + fmt(r.tolerance)
                                         + " time=" + fmt(t) + "s (limit " + fmt(limit_s) + "s)"};
}

// Gaussian integral closed forms against nested Gauss-Kronrod cubature.
Outcome criterion1()
{
    return timed_check([] { return validation::check_gaussian_integrals(); }, 10.0);
}

// Asymptotic ratio against the grid proximal oracle at the end of the alpha sweep.
Outcome criterion2()
{
    return timed_check([] { return validation::check_asymptotic_ratio(); }, 30.0);
}

// Literal weights underflow near k = 63; the stable variant runs on.
Outcome criterion3()
{
    const auto start = std::chrono::steady_clock::now();
    const ObjectiveSpec base = objectives::make_objective("revised_rastrigin", 2);
    ObjectiveSpec shifted = base;
    shifted.name = "one_plus_revised_rastrigin";
    shifted.eval = [base](const Point& x) { return 1.0 + base(x); };

    AppParams p;
    p.lambda = 1.0 / std::sqrt(2.0);
    p.rho = 0.9;
    p.n = 20;
    p.max_iters = 200;
    p.variant = Variant::original_naive;
    const RunTrace naive = run(shifted, p);
    const bool underflow = naive.failure && naive.failure->find("degenerate weights (underflow)") != std::string::npos
                           && naive.failure_k && *naive.failure_k >= 60 && *naive.failure_k <= 66;

    p.variant = Variant::stable;
    const RunTrace stable = run(shifted, p);
    bool finite = !stable.failure && stable.records.size() == 201;
    for (const IterateRecord& r : stable.records) {
        // f_best is +inf until the first batch has been evaluated.
        finite = finite && r.x.allFinite() && std::isfinite(*r.err_sq)
                 && (r.eval_count == 0 || std::isfinite(r.f_best))
                 && (!r.m_hat || std::isfinite(*r.m_hat));
    }
    const double t = seconds_since(start);
    return {underflow && finite && t < 5.0,
            "naive failure at k=" + (naive.failure_k ? std::to_string(*naive.failure_k) : std::string("none"))
                + ", stable 200 iterations " + (finite ? "finite" : "NOT finite") + ", time=" + fmt(t) + "s"};
}

// Global linear convergence in d = 2 with (rho, n) = (0.9, 100).
Outcome criterion4()
{
    const config::ExperimentConfig cfg = config::parse_experiment(R"({
        "objective": {"name": "revised_rastrigin", "dim": 2},
        "solver": "app_stable",
        "app": {"lambda": 0.7071067811865476, "rho": 0.9, "n": 100, "sampler": "pseudo_random"},
        "seed": 0, "n_seeds": 10,
        "stop": {"max_iters": 300}})");
    const std::vector<RunTrace> traces = harness::run_seeds(cfg);
    int converged = 0, fitted = 0;
    double worst_r2 = 1.0, worst_rho = 0.0;
    for (const RunTrace& t : traces) {
        const bool ok = !t.failure && *t.final_err_sq() <= 1e-6;
        converged += ok;
        if (!ok)
            continue;
        const harness::RateFit fit = harness::fit_rate(t);
        worst_r2 = std::min(worst_r2, fit.r_squared);
        worst_rho = std::max(worst_rho, fit.rho_hat);
        fitted += fit.r_squared >= 0.9 && fit.rho_hat <= 0.9 + 0.05;
    }
    return {converged >= 8 && fitted == converged,
            std::to_string(converged) + "/10 seeds with err_sq <= 1e-6 after 300 iterations; rate fits "
                + std::to_string(fitted) + "/" + std::to_string(converged) + " ok (min r2=" + fmt(worst_r2)
                + ", max rho_hat=" + fmt(worst_rho) + ")"};
}

// d = 500 with n = 95: err_sq reduced 1e4-fold within 500 iterations.
Outcome criterion5()
{
    const auto start = std::chrono::steady_clock::now();
    const config::ExperimentConfig cfg = config::parse_experiment(R"({
        "objective": {"name": "revised_rastrigin", "dim": 500},
        "solver": "app_stable",
        "app": {"rho": 0.98, "n": 95, "sampler": "scrambled_halton"},
        "seed": 0, "n_seeds": 10,
        "stop": {"max_iters": 500}})");
    const std::vector<RunTrace> traces = harness::run_seeds(cfg);
    int reduced = 0;
    std::vector<double> factors;
    for (const RunTrace& t : traces) {
        double best = INFINITY;
        for (const IterateRecord& r : t.records)
            best = std::min(best, *r.err_sq);
        const double factor = *t.records.front().err_sq / best;
        factors.push_back(factor);
        reduced += !t.failure && factor >= 1e4;
    }
    const double t = seconds_since(start);
    return {reduced >= 7 && t < 120.0,
            std::to_string(reduced) + "/10 seeds reach a 1e4 reduction (median reduction "
                + fmt(harness::median(factors)) + "x), time=" + fmt(t) + "s"};
}

// Monte Carlo m_k inside the analytic envelope on the sphere.
Outcome criterion6()
{
    const validation::CheckResult r = validation::check_mk_envelope();
    return {r.passed, r.detail};
}

// APP beats DE at an equal budget of 2e5 evaluations in d = 50.
Outcome criterion7()
{
    const auto start = std::chrono::steady_clock::now();
    const config::CompareConfig cfg = config::parse_compare(R"({
        "objective": {"name": "revised_rastrigin", "dim": 50},
        "seed": 0, "n_seeds": 10, "budget": 200000,
        "left": {"label": "app", "solver": "app_stable",
                 "app": {"rho": 0.98, "n": 200, "sampler": "scrambled_halton"}},
        "right": {"label": "de", "solver": "de_rand_1_bin", "de": {"domain": [-1, 1]}}})");
    const std::vector<RunTrace> app = harness::run_seeds(cfg.left);
    const std::vector<RunTrace> de = harness::run_seeds(cfg.right);
    const harness::Comparison cmp = harness::compare_traces(app, de, cfg.budget, "app", "de");
    return {cmp.left_pair_wins >= 8,
            "APP lower in " + std::to_string(cmp.left_pair_wins) + "/10 seed pairs; median final err_sq app="
                + fmt(*cmp.left_final) + " de=" + fmt(*cmp.right_final) + ", verdict " + cmp.verdict
                + ", time=" + fmt(seconds_since(start)) + "s"};
}

// Core property suite.
Outcome criterion8()
{
    int failures = 0;
    std::vector<std::string> failed;
    auto expect = [&](bool ok, const char* what) {
        if (!ok) {
            ++failures;
            if (std::find(failed.begin(), failed.end(), what) == failed.end())
                failed.push_back(what);
        }
    };

    Rng rng(2024);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> shift(-1e3, 1e3);
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 1 + trial % 5, n = 1 + trial % 23;
        PointMatrix pts(d, n);
        std::vector<double> g(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j)
                pts(j, i) = normal(rng);
            g[static_cast<std::size_t>(i)] = 10.0 * normal(rng);
        }
        const Point x = weighted_mean(pts, g);

        std::vector<double> moved(g);
        const double c = shift(rng);
        for (double& v : moved)
            v += c;
        const Point xs = weighted_mean(pts, moved);
        bool shift_ok = true;
        for (int j = 0; j < d; ++j)
            shift_ok = shift_ok && std::abs(xs[j] - x[j]) <= 1e-12 * std::max(1.0, std::abs(x[j]));
        expect(shift_ok, "shift invariance");

        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        PointMatrix pp(d, n);
        std::vector<double> gp(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            pp.col(i) = pts.col(perm[static_cast<std::size_t>(i)]);
            gp[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        }
        expect(weighted_mean(pp, gp) == x, "permutation invariance");

        bool hull = true;
        for (int j = 0; j < d; ++j)
            hull = hull && x[j] >= pts.row(j).minCoeff() && x[j] <= pts.row(j).maxCoeff();
        expect(hull, "convex-hull containment");
    }

    // Variant equivalence and the sigma schedule along real runs.
    const ObjectiveSpec f = objectives::make_objective("revised_rastrigin", 4);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        AppParams p;
        p.lambda = 0.5;
        p.rho = 0.9;
        p.n = 25;
        p.seed = seed;
        p.variant = Variant::original;
        sampling::SamplerStream stream(p.sampler, seed, 4);
        IterateState s;
        s.x = random_sphere_point(4, 2.0, seed);
        s.x_best = s.x;
        s.sigma2 = sampling_variance(p, 1);
        // Up to k = 40 the literal weights stay representable in d = 4.
        for (int k = 1; k <= 40; ++k) {
            const auto batch = sampling::gaussian_batch(stream, s.x, s.sigma2, p.n);
            AppParams naive = p;
            naive.variant = Variant::original_naive;
            const IterateState a = app_step_original(s, f, p, batch);
            const IterateState b = app_step_original(s, f, naive, batch);
            expect((a.x - b.x).lpNorm<Eigen::Infinity>() <= 1e-10, "variant equivalence");
            bool hull = true;
            for (int j = 0; j < 4; ++j)
                hull = hull && a.x[j] >= batch.points.row(j).minCoeff() && a.x[j] <= batch.points.row(j).maxCoeff();
            expect(hull, "convex-hull containment");
            s = a;
        }
        p.variant = Variant::stable;
        p.max_iters = 150;
        const RunTrace t = run(f, p);
        for (const IterateRecord& r : t.records)
            expect(r.sigma2 && *r.sigma2 == std::pow(p.rho, r.k) / p.lambda, "sigma schedule");
    }

    // Halton non-repetition across a run.
    sampling::SamplerStream halton(sampling::SamplerKind::scrambled_halton, 77, 3);
    std::set<std::uint64_t> used;
    for (int k = 0; k < 200; ++k) {
        const auto batch = sampling::gaussian_batch(halton, Point::Zero(3), 1.0, 9);
        for (int i = 0; i < 9; ++i)
            expect(used.insert(batch.first_index + static_cast<std::uint64_t>(i)).second, "sampler non-repetition");
    }
    expect(*used.begin() == 1 && *used.rbegin() == 1800, "sampler non-repetition");

    std::uniform_real_distribution<double> unit(1e-12, 1.0 - 1e-12);
    for (int i = 0; i < 100000; ++i) {
        const double u = unit(rng);
        expect(std::abs(sampling::inverse_normal_cdf(u) + sampling::inverse_normal_cdf(1.0 - u)) <= 1e-9,
               "inverse-CDF symmetry");
    }

    std::string detail = "7 properties, " + std::to_string(failures) + " violations";
    for (const std::string& what : failed)
        detail += "; failed: " + what;
    return {failures == 0, detail};
}

struct Criterion {
    int id;
    const char* title;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "Gaussian integral oracle equivalence", criterion1},
    {2, "asymptotic ratio limit behaviour", criterion2},
    {3, "underflow reproduction", criterion3},
    {4, "global linear convergence, d=2", criterion4},
    {5, "high-dimension run, d=500, n=95", criterion5},
    {6, "m_k envelope", criterion6},
    {7, "DE comparison direction, d=50", criterion7},
    {8, "core property suite", criterion8},
};

}  // namespace

int main(int argc, char** argv)
{
    const int only = argc > 1 ? std::atoi(argv[1]) : 0;
    bool all_passed = true;
    for (const Criterion& c : kCriteria) {
        if (only && c.id != only)
            continue;
        Outcome o;
        try {
            o = c.run();
        }
        catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all_passed = all_passed && o.passed;
        std::printf("criterion %d %s: %s | %s\n", c.id, o.passed ? "PASS" : "FAIL", c.title, o.detail.c_str());
        std::fflush(stdout);
    }
    return all_passed ? 0 : 1;
}
