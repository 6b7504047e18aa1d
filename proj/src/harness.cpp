#include "appmin/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <set>
#include <thread>

#include "json.hpp"

#include "appmin/baselines.hpp"
#include "appmin/numeric_text.hpp"
#include "appmin/objectives.hpp"
#include "appmin/trace_io.hpp"

namespace appmin::harness {

namespace fs = std::filesystem;
using config::ExperimentConfig;

RunTrace run_single(const ExperimentConfig& cfg, std::uint64_t seed)
{
    const ObjectiveSpec objective = objectives::make_objective(cfg.objective, cfg.dim);
    auto reached_target = [&cfg](const IterateRecord& rec) {
        return cfg.target_err_sq && rec.err_sq && *rec.err_sq <= *cfg.target_err_sq;
    };

    RunTrace trace;
    if (config::is_app(cfg.solver)) {
        AppParams params = cfg.app;
        params.seed = seed;
        params.max_iters = cfg.max_iters;
        params.initial_point = cfg.init_point ? *cfg.init_point
                                              : random_sphere_point(cfg.dim, cfg.init_radius, seed);
        AppRunner runner(objective, params);
        for (int i = 0; i < params.max_iters; ++i) {
            if (reached_target(runner.trace().records.back()) || !runner.step())
                break;
        }
        trace = runner.take_trace();
        trace.provenance["initializer"] =
            cfg.init_point ? "explicit point" : "sphere radius " + format_double(cfg.init_radius);
    }
    else {
        baselines::DEConfig de = cfg.de;
        de.seed = seed;
        de.max_generations = cfg.max_iters;
        trace = baselines::de_run(objective, de, reached_target);
        trace.provenance["initializer"] = "uniform population on the search domain";
    }
    if (cfg.target_err_sq)
        trace.provenance["target_err_sq"] = format_double(*cfg.target_err_sq);
    for (const auto& [key, value] : cfg.defaults)
        trace.provenance["default." + key] = value;
    return trace;
}

std::vector<RunTrace> run_seeds(const ExperimentConfig& cfg)
{
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(cfg.n_seeds);
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<RunTrace> traces(n);
    // Each seed owns its sampler stream and state, so seeds are independent.
    for (std::size_t start = 0; start < n; start += workers) {
        std::vector<std::future<RunTrace>> jobs;
        const std::size_t end = std::min(n, start + workers);
        for (std::size_t i = start; i < end; ++i)
            jobs.push_back(std::async(std::launch::async, run_single, std::cref(cfg), cfg.seed + i));
        for (std::size_t i = start; i < end; ++i)
            traces[i] = jobs[i - start].get();
    }
    return traces;
}

bool RunSummary::all_passed() const
{
    return std::all_of(seeds.begin(), seeds.end(), [](const SeedOutcome& s) { return s.passed; });
}

std::string trace_file_name(const ExperimentConfig& cfg, std::uint64_t seed)
{
    return cfg.objective + "_d" + std::to_string(cfg.dim) + "_" + config::to_string(cfg.solver)
           + "_seed" + std::to_string(seed) + ".csv";
}

double median(std::vector<double> values)
{
    if (values.empty())
        throw Error("median of an empty list");
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

namespace {

void ensure_directory(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw Error("cannot create output directory " + dir.string());
}

std::vector<fs::path> write_traces(const ExperimentConfig& cfg, const std::vector<RunTrace>& traces,
                                   const fs::path& dir)
{
    ensure_directory(dir);
    std::vector<fs::path> files;
    for (const RunTrace& trace : traces) {
        files.push_back(dir / trace_file_name(cfg, trace.seed));
        trace_io::write_trace(trace, files.back());
    }
    return files;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& cfg, const fs::path& output_dir)
{
    const std::vector<RunTrace> traces = run_seeds(cfg);
    const std::vector<fs::path> files = write_traces(cfg, traces, output_dir);

    RunSummary summary;
    std::vector<double> finals;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const RunTrace& t = traces[i];
        SeedOutcome s;
        s.seed = t.seed;
        s.trace_file = files[i];
        s.final_err_sq = t.final_err_sq();
        s.iterations = static_cast<int>(t.records.size()) - 1;
        s.eval_count = t.records.back().eval_count;
        s.failure = t.failure;
        s.passed = !t.failure
                   && (!cfg.target_err_sq || (s.final_err_sq && *s.final_err_sq <= *cfg.target_err_sq));
        if (s.final_err_sq)
            finals.push_back(*s.final_err_sq);
        summary.seeds.push_back(std::move(s));
    }
    if (!finals.empty())
        summary.median_final_err_sq = median(finals);

    nlohmann::ordered_json doc;
    doc["objective"] = cfg.objective;
    doc["dim"] = cfg.dim;
    doc["solver"] = config::to_string(cfg.solver);
    doc["target_err_sq"] = cfg.target_err_sq ? nlohmann::ordered_json(*cfg.target_err_sq) : nullptr;
    doc["median_final_err_sq"] =
        summary.median_final_err_sq ? nlohmann::ordered_json(*summary.median_final_err_sq) : nullptr;
    doc["all_passed"] = summary.all_passed();
    doc["seeds"] = nlohmann::ordered_json::array();
    for (const SeedOutcome& s : summary.seeds) {
        nlohmann::ordered_json row;
        row["seed"] = s.seed;
        row["trace"] = s.trace_file.filename().string();
        row["final_err_sq"] = s.final_err_sq ? nlohmann::ordered_json(*s.final_err_sq) : nullptr;
        row["iterations"] = s.iterations;
        row["eval_count"] = s.eval_count;
        row["failure"] = s.failure ? nlohmann::ordered_json(*s.failure) : nullptr;
        row["passed"] = s.passed;
        doc["seeds"].push_back(std::move(row));
    }
    summary.summary_file = output_dir / "summary.json";
    std::ofstream out(summary.summary_file);
    if (!out)
        throw Error("cannot write " + summary.summary_file.string());
    out << doc.dump(2) << '\n';
    return summary;
}

RateFit fit_rate(const RunTrace& trace, std::optional<std::pair<int, int>> window)
{
    std::vector<const IterateRecord*> rows;
    for (const IterateRecord& rec : trace.records) {
        if (rec.err_sq)
            rows.push_back(&rec);
    }
    if (window) {
        if (window->first > window->second)
            throw Error("empty fit window");
        std::erase_if(rows, [&](const IterateRecord* r) {
            return r->k < window->first || r->k > window->second;
        });
    }
    else {
        rows.erase(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(rows.size() / 10));
    }
    const auto zero = std::find_if(rows.begin(), rows.end(),
                                   [](const IterateRecord* r) { return !(*r->err_sq > 0.0); });
    rows.erase(zero, rows.end());
    if (rows.size() < 3)
        throw Error("rate fit needs at least 3 positive err_sq values in the window");

    const double n = static_cast<double>(rows.size());
    double mean_k = 0.0, mean_y = 0.0;
    for (const IterateRecord* r : rows) {
        mean_k += r->k;
        mean_y += std::log(*r->err_sq);
    }
    mean_k /= n;
    mean_y /= n;
    double skk = 0.0, sky = 0.0, syy = 0.0;
    for (const IterateRecord* r : rows) {
        const double dk = r->k - mean_k;
        const double dy = std::log(*r->err_sq) - mean_y;
        skk += dk * dk;
        sky += dk * dy;
        syy += dy * dy;
    }
    if (skk == 0.0)
        throw Error("rate fit needs distinct iteration indices");
    const double slope = sky / skk;
    RateFit fit;
    fit.rho_hat = std::exp(slope);
    // A perfectly flat series is fitted exactly by the zero slope.
    fit.r_squared = syy == 0.0 ? 1.0 : (sky * sky) / (skk * syy);
    fit.k_first = rows.front()->k;
    fit.k_last = rows.back()->k;
    fit.points = rows.size();
    return fit;
}

std::pair<int, int> parse_window(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw Error("window must look like a:b");
    try {
        std::size_t used_a = 0, used_b = 0;
        const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
        const int first = std::stoi(a, &used_a);
        const int last = std::stoi(b, &used_b);
        if (used_a != a.size() || used_b != b.size())
            throw Error("bad window");
        return {first, last};
    }
    catch (const std::exception&) {
        throw Error("window must look like a:b with integer bounds");
    }
}

namespace {

// err_sq of the last record with eval_count <= e, if any.
std::optional<double> value_at(const RunTrace& trace, std::uint64_t e)
{
    std::optional<double> value;
    for (const IterateRecord& rec : trace.records) {
        if (rec.eval_count > e)
            break;
        value = rec.err_sq;
    }
    return value;
}

std::optional<double> median_at(const std::vector<RunTrace>& traces, std::uint64_t e)
{
    std::vector<double> values;
    for (const RunTrace& t : traces) {
        if (auto v = value_at(t, e))
            values.push_back(*v);
    }
    if (values.size() < traces.size() || values.empty())
        return std::nullopt;
    return median(values);
}

void check_group(const std::vector<RunTrace>& group, const std::string& objective, int dim)
{
    for (const RunTrace& t : group) {
        if (t.objective != objective || t.dim != dim)
            throw Error("compared traces target different objectives");
        if (t.records.empty())
            throw Error("compared trace has no records");
        if (!t.records.front().err_sq)
            throw Error("comparison needs err_sq, i.e. an objective with a known minimizer");
    }
}

}  // namespace

Comparison compare_traces(const std::vector<RunTrace>& left, const std::vector<RunTrace>& right,
                          std::uint64_t budget, const std::string& left_label,
                          const std::string& right_label)
{
    if (left.empty() || right.empty())
        throw Error("comparison needs traces on both sides");
    check_group(left, left.front().objective, left.front().dim);
    check_group(right, left.front().objective, left.front().dim);

    std::set<std::uint64_t> grid;
    for (const auto* group : {&left, &right}) {
        for (const RunTrace& t : *group) {
            grid.insert(t.records.front().eval_count);
            for (const IterateRecord& rec : t.records) {
                if (rec.eval_count <= budget)
                    grid.insert(rec.eval_count);
            }
        }
    }

    Comparison cmp;
    cmp.left_label = left_label;
    cmp.right_label = right_label;
    for (std::uint64_t e : grid)
        cmp.rows.push_back({e, median_at(left, e), median_at(right, e)});

    const std::uint64_t final_e = *grid.rbegin();
    cmp.left_final = median_at(left, final_e);
    cmp.right_final = median_at(right, final_e);
    if (!cmp.left_final || !cmp.right_final)
        cmp.verdict = "undetermined";
    else if (*cmp.left_final < *cmp.right_final)
        cmp.verdict = left_label;
    else if (*cmp.right_final < *cmp.left_final)
        cmp.verdict = right_label;
    else
        cmp.verdict = "tie";

    const std::size_t pairs = std::min(left.size(), right.size());
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto a = value_at(left[i], final_e);
        const auto b = value_at(right[i], final_e);
        if (!a || !b)
            continue;
        if (*a < *b)
            ++cmp.left_pair_wins;
        else if (*b < *a)
            ++cmp.right_pair_wins;
        else
            ++cmp.pair_ties;
    }
    return cmp;
}

void write_comparison(const Comparison& cmp, std::ostream& out)
{
    out << "# verdict: " << cmp.verdict << '\n';
    out << "# pair_wins: " << cmp.left_label << "=" << cmp.left_pair_wins << " " << cmp.right_label
        << "=" << cmp.right_pair_wins << " tie=" << cmp.pair_ties << '\n';
    out << "eval_count," << cmp.left_label << "_median_err_sq," << cmp.right_label
        << "_median_err_sq\n";
    for (const CompareRow& row : cmp.rows) {
        out << row.eval_count << ','
            << (row.left_median ? format_double(*row.left_median) : std::string()) << ','
            << (row.right_median ? format_double(*row.right_median) : std::string()) << '\n';
    }
}

Comparison compare(const config::CompareConfig& cfg, const fs::path& output_dir)
{
    const std::vector<RunTrace> left = run_seeds(cfg.left);
    const std::vector<RunTrace> right = run_seeds(cfg.right);
    write_traces(cfg.left, left, output_dir / cfg.left_label);
    write_traces(cfg.right, right, output_dir / cfg.right_label);

    Comparison cmp = compare_traces(left, right, cfg.budget, cfg.left_label, cfg.right_label);
    std::ofstream out(output_dir / "comparison.csv");
    if (!out)
        throw Error("cannot write comparison table in " + output_dir.string());
    write_comparison(cmp, out);
    return cmp;
}

}  // namespace appmin::harness
