#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "appmin/config.hpp"
#include "appmin/harness.hpp"
#include "appmin/numeric_text.hpp"
#include "appmin/objectives.hpp"
#include "appmin/trace_io.hpp"
#include "appmin/validate.hpp"
#include "support.hpp"

using namespace appmin;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("appmin_test_" + name);
    fs::remove_all(dir);
    return dir;
}

RunTrace geometric(std::vector<double> errs)
{
    RunTrace t;
    for (std::size_t i = 0; i < errs.size(); ++i) {
        IterateRecord r;
        r.k = static_cast<int>(i);
        r.err_sq = errs[i];
        t.records.push_back(r);
    }
    return t;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// Drops the trailing wall_ms field of every data row.
std::string without_wall_time(const std::string& text)
{
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#' && line.rfind("k,", 0) != 0)
            line = line.substr(0, line.rfind(','));
        out += line + '\n';
    }
    return out;
}

const char* kSphereConfig = R"({
  "objective": {"name": "sphere", "dim": 2},
  "solver": "app_stable",
  "app": {"rho": 0.9, "n": 40},
  "seed": 0,
  "n_seeds": 10,
  "stop": {"max_iters": 100}
})";

}  // namespace

TEST_CASE("numeric text round trip")
{
    Rng rng(1);
    std::normal_distribution<double> normal;
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(normal(rng), static_cast<int>(rng() % 200) - 100);
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(INFINITY) == "inf");
    CHECK(parse_double("inf") == INFINITY);
    CHECK(parse_double("-inf") == -INFINITY);
    CHECK(std::isnan(parse_double(format_double(NAN))));
    CHECK_THROWS_AS(parse_double("1.5x"), Error);
    CHECK_THROWS_AS(parse_double(""), Error);
}

TEST_CASE("trace round trip")
{
    const ObjectiveSpec f = objectives::make_objective("revised_rastrigin", 3);
    AppParams p;
    p.rho = 0.9;
    p.n = 10;
    p.max_iters = 30;
    p.seed = 3;
    RunTrace t = run(f, p);
    t.failure = "synthetic failure";
    t.failure_k = 31;
    std::stringstream buf;
    trace_io::write_trace(t, buf);
    const RunTrace back = trace_io::read_trace(buf);
    CHECK(back.solver == t.solver);
    CHECK(back.objective == t.objective);
    CHECK(back.dim == t.dim);
    CHECK(back.seed == t.seed);
    CHECK(back.provenance == t.provenance);
    CHECK(back.failure == t.failure);
    CHECK(back.failure_k == t.failure_k);
    REQUIRE(back.records.size() == t.records.size());
    for (std::size_t i = 0; i < t.records.size(); ++i) {
        const IterateRecord& a = t.records[i];
        const IterateRecord& b = back.records[i];
        CHECK(a.k == b.k);
        CHECK(a.eval_count == b.eval_count);
        CHECK(a.err_sq == b.err_sq);
        CHECK(a.f_best == b.f_best);
        CHECK(a.m_hat == b.m_hat);
        CHECK(a.sigma2 == b.sigma2);
        CHECK(a.wall_ms == b.wall_ms);
    }
    // The first record has not seen any evaluation yet; the last has no m_hat.
    const std::string text = buf.str();
    CHECK(text.find(trace_io::kTraceHeader) != std::string::npos);
    CHECK(text.find("\n1,0,") != std::string::npos);
    CHECK(text.find(",inf,") != std::string::npos);
}

TEST_CASE("rate fit")
{
    harness::RateFit fit = harness::fit_rate(geometric({1, 0.5, 0.25, 0.125}), std::make_pair(0, 3));
    CHECK(fit.rho_hat == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-14));

    fit = harness::fit_rate(geometric({0.3, 0.3, 0.3, 0.3, 0.3}));
    CHECK(fit.rho_hat == 1.0);

    // Closed-form least squares on the four log values.
    const std::vector<double> e{1, 0.9, 0.81 * 1.1, 0.729 * 0.9};
    double sy = 0, sky = 0;
    for (int k = 0; k < 4; ++k) {
        sy += std::log(e[k]);
        sky += k * std::log(e[k]);
    }
    const double slope = (sky - 1.5 * sy) / 5.0;  // sum (k - 1.5)^2 = 5
    fit = harness::fit_rate(geometric(e), std::make_pair(0, 3));
    CHECK(fit.rho_hat == doctest::Approx(std::exp(slope)).epsilon(1e-14));
    CHECK(fit.rho_hat >= 0.85);
    CHECK(fit.rho_hat <= 0.95);

    // Default window skips the first 10% of rows.
    std::vector<double> long_run(50);
    for (int k = 0; k < 50; ++k)
        long_run[k] = (k < 5 ? 100.0 : 1.0) * std::pow(0.8, k);
    fit = harness::fit_rate(geometric(long_run));
    CHECK(fit.k_first == 5);
    CHECK(fit.rho_hat == doctest::Approx(0.8).epsilon(1e-12));

    // Truncation before the first exact zero.
    fit = harness::fit_rate(geometric({1, 0.1, 0.01, 0.001, 0.0, 5.0}), std::make_pair(0, 5));
    CHECK(fit.k_last == 3);
    CHECK(fit.rho_hat == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(harness::fit_rate(geometric({1, 0.1, 0.0, 1.0}), std::make_pair(0, 3)), Error);
    CHECK_THROWS_AS(harness::fit_rate(geometric({1, 0.1})), Error);

    CHECK(harness::parse_window("10:200") == std::make_pair(10, 200));
    CHECK_THROWS_AS(harness::parse_window("10-200"), Error);
    CHECK_THROWS_AS(harness::parse_window("a:3"), Error);
}

TEST_CASE("config parsing")
{
    const auto cfg = config::parse_experiment(kSphereConfig);
    CHECK(cfg.objective == "sphere");
    CHECK(cfg.app.lambda == 1.0 / std::sqrt(2.0));
    CHECK(cfg.init_radius == std::sqrt(2.0));
    CHECK(cfg.app.max_iters == 100);
    CHECK(cfg.defaults.count("lambda") == 1);
    CHECK(cfg.defaults.count("init") == 1);

    CHECK_THROWS_AS(config::parse_experiment("{"), config::ConfigError);
    CHECK_THROWS_AS(config::parse_experiment(R"({"objective": {"name": "sphere", "dim": 2},
        "solver": "app_stable", "app": {"rho": 0.9}})"), config::ConfigError);
    CHECK_THROWS_AS(config::parse_experiment(R"({"objective": {"name": "sphere", "dim": 2},
        "solver": "app_stable", "app": {"rho": 1.2, "n": 4}})"), config::ConfigError);
    CHECK_THROWS_AS(config::parse_experiment(R"({"objective": {"name": "nope", "dim": 2},
        "solver": "de_rand_1_bin"})"), config::ConfigError);
    CHECK_THROWS_AS(config::parse_experiment(R"({"objective": {"name": "sphere", "dim": 2},
        "solver": "simplex"})"), config::ConfigError);
    CHECK_THROWS_AS(config::parse_experiment(R"({"objective": {"name": "sphere", "dim": 2},
        "solver": "de_rand_1_bin", "de": {"popsize": 10}})"), config::ConfigError);

    const auto de = config::parse_experiment(R"({"objective": {"name": "sphere", "dim": 3},
        "solver": "de_rand_1_bin", "de": {"F": 0.7, "domain": [-2, 2]}, "stop": {"max_iters": 5}})");
    CHECK(de.de.F == 0.7);
    CHECK(de.de.lo == -2.0);
    CHECK(de.de.max_generations == 5);

    const auto cmp = config::parse_compare(R"({"objective": {"name": "sphere", "dim": 2},
        "budget": 1000, "left": {"solver": "app_stable", "app": {"rho": 0.9, "n": 40}},
        "right": {"solver": "de_rand_1_bin"}})");
    CHECK(cmp.left_label == "app");
    CHECK(cmp.right_label == "de");
    CHECK(cmp.left.max_iters == 25);
    CHECK(cmp.right.max_iters == 49);
}

TEST_CASE("output directory override")
{
    ::unsetenv(config::kOutputDirEnv);
    CHECK(config::resolve_output("a/b") == fs::path("a/b"));
    ::setenv(config::kOutputDirEnv, "/tmp/elsewhere", 1);
    CHECK(config::resolve_output("a/b") == fs::path("/tmp/elsewhere"));
    ::unsetenv(config::kOutputDirEnv);
}

TEST_CASE("run_experiment writes traces and summary")
{
    const fs::path dir = scratch_dir("run");
    auto cfg = config::parse_experiment(kSphereConfig);
    const auto summary = harness::run_experiment(cfg, dir);
    REQUIRE(summary.seeds.size() == 10);
    CHECK(fs::exists(dir / "summary.json"));

    // Frozen from seeded execution. The error floor is set by the sampling
    // variance rho^100 / lambda ~ 4e-5 spread over n = 40 samples.
    int good = 0;
    std::vector<double> finals;
    for (const auto& s : summary.seeds) {
        const RunTrace t = trace_io::read_trace(s.trace_file);
        REQUIRE(t.records.size() == 101);
        finals.push_back(*t.records.back().err_sq);
        good += finals.back() <= 1e-5;
        CHECK(t.provenance.count("default.lambda") == 1);
        CHECK(t.provenance.at("initializer").find("sphere radius") == 0);
    }
    CHECK(good == 10);
    CHECK(harness::median(finals) <= 2e-6);
    // Summary median recomputed from the trace files.
    REQUIRE(summary.median_final_err_sq);
    CHECK(*summary.median_final_err_sq == harness::median(finals));
    const auto doc = nlohmann::json::parse(slurp(summary.summary_file));
    CHECK(doc["median_final_err_sq"].get<double>() == harness::median(finals));
    CHECK(doc["seeds"].size() == 10);
    CHECK(summary.all_passed());

    // Rerun: byte-identical apart from wall time.
    const fs::path dir2 = scratch_dir("run2");
    const auto again = harness::run_experiment(cfg, dir2);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(without_wall_time(slurp(summary.seeds[i].trace_file))
              == without_wall_time(slurp(again.seeds[i].trace_file)));
    }

    // One seed, zero iterations.
    cfg.n_seeds = 1;
    cfg.max_iters = 0;
    const auto single = harness::run_experiment(cfg, scratch_dir("run3"));
    REQUIRE(single.seeds.size() == 1);
    CHECK(trace_io::read_trace(single.seeds[0].trace_file).records.size() == 1);
}

TEST_CASE("target stop and failure accounting")
{
    auto cfg = config::parse_experiment(R"({"objective": {"name": "sphere", "dim": 2},
        "solver": "app_stable", "app": {"rho": 0.9, "n": 40}, "n_seeds": 2,
        "stop": {"max_iters": 300, "target_err_sq": 1e-4}})");
    const auto traces = harness::run_seeds(cfg);
    for (const RunTrace& t : traces) {
        CHECK(*t.final_err_sq() <= 1e-4);
        CHECK(t.records.size() < 301);
        CHECK(*t.records[t.records.size() - 2].err_sq > 1e-4);
    }

    // Naive original on a shifted objective fails mid-run; the failure is per seed.
    auto naive = config::parse_experiment(R"({"objective": {"name": "revised_rastrigin", "dim": 2},
        "solver": "app_original_naive", "app": {"rho": 0.5, "n": 10}, "n_seeds": 2,
        "stop": {"max_iters": 400}})");
    const auto summary = harness::run_experiment(naive, scratch_dir("naive"));
    CHECK(summary.seeds.size() == 2);
    CHECK(!summary.all_passed());
    for (const auto& s : summary.seeds)
        CHECK(s.failure.has_value());

    CHECK_THROWS_AS(harness::run_experiment(cfg, "/proc/appmin_cannot_write"), Error);
}

TEST_CASE("comparison tables")
{
    auto cfg = config::parse_compare(R"({"objective": {"name": "revised_rastrigin", "dim": 2},
        "n_seeds": 3, "budget": 2000,
        "left": {"solver": "app_stable", "app": {"rho": 0.9, "n": 40}},
        "right": {"solver": "app_stable", "app": {"rho": 0.9, "n": 40}}})");
    const fs::path dir = scratch_dir("cmp");
    const auto same = harness::compare(cfg, dir);
    CHECK(same.verdict == "tie");
    for (const auto& row : same.rows)
        CHECK(row.left_median == row.right_median);
    CHECK(fs::exists(dir / "comparison.csv"));

    cfg = config::parse_compare(R"({"objective": {"name": "sphere", "dim": 2},
        "n_seeds": 3, "budget": 0,
        "left": {"solver": "app_stable", "app": {"rho": 0.9, "n": 40}},
        "right": {"solver": "de_rand_1_bin"}})");
    const auto zero = harness::compare(cfg, scratch_dir("cmp0"));
    // Only the two initialization rows: APP at 0 evaluations, DE after NP.
    REQUIRE(zero.rows.size() == 2);
    CHECK(zero.rows[0].eval_count == 0);
    CHECK(zero.rows[1].eval_count == 20);

    const auto a = harness::run_seeds(config::parse_experiment(kSphereConfig));
    auto other = config::parse_experiment(R"({"objective": {"name": "sphere", "dim": 3},
        "solver": "app_stable", "app": {"rho": 0.9, "n": 4}, "stop": {"max_iters": 3}})");
    const auto b = harness::run_seeds(other);
    CHECK_THROWS_AS(harness::compare_traces(a, b, 100, "x", "y"), Error);

    // Step alignment: at each eval count the latest record at or below it.
    std::vector<RunTrace> l{geometric({1.0, 0.5, 0.25})}, r{geometric({2.0, 0.1})};
    for (auto* g : {&l, &r}) {
        for (RunTrace& t : *g) {
            t.objective = "o";
            t.dim = 1;
        }
    }
    for (std::size_t i = 0; i < 3; ++i)
        l[0].records[i].eval_count = 10 * i;
    r[0].records[0].eval_count = 15;
    r[0].records[1].eval_count = 30;
    const auto c = harness::compare_traces(l, r, 30, "L", "R");
    REQUIRE(c.rows.size() == 5);
    CHECK(c.rows[0].left_median == 1.0);
    CHECK(!c.rows[0].right_median);
    CHECK(c.rows[2].eval_count == 15);
    CHECK(c.rows[2].left_median == 0.5);
    CHECK(c.rows[2].right_median == 2.0);
    CHECK(c.rows[4].left_median == 0.25);
    CHECK(c.rows[4].right_median == 0.1);
    CHECK(c.verdict == "R");
    CHECK(c.right_pair_wins == 1);
}

TEST_CASE("validation report")
{
    validation::Options opt;
    const auto integrals = validation::check_gaussian_integrals(opt);
    CHECK(integrals.passed);
    CHECK(integrals.max_error <= 1e-8);
    opt.inject_integral_sign_fault = true;
    const auto broken = validation::check_gaussian_integrals(opt);
    CHECK(!broken.passed);
    CHECK(broken.max_error > 1e-8);
    CHECK(validation::check_rho_lambda().passed);
    CHECK(validation::check_mk_envelope().passed);
}
