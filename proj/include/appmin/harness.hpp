#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "appmin/config.hpp"
#include "appmin/core.hpp"

namespace appmin::harness {

/// Runs one seed of an experiment in memory. Step failures are recorded in
/// the trace, never thrown. Config-derived defaults are added to the
/// trace provenance.
RunTrace run_single(const config::ExperimentConfig& cfg, std::uint64_t seed);

/// Runs every seed of the experiment in parallel.
std::vector<RunTrace> run_seeds(const config::ExperimentConfig& cfg);

struct SeedOutcome {
    std::uint64_t seed = 0;
    std::filesystem::path trace_file;
    std::optional<double> final_err_sq;
    int iterations = 0;
    std::uint64_t eval_count = 0;
    std::optional<std::string> failure;
    // No solver failure, and final err_sq within the target when one is set.
    bool passed = false;
};

struct RunSummary {
    std::vector<SeedOutcome> seeds;
    std::optional<double> median_final_err_sq;
    std::filesystem::path summary_file;

    bool all_passed() const;
};

/// One trace file per seed plus summary.json in `output_dir` (created when
/// missing). Throws when the directory cannot be written.
RunSummary run_experiment(const config::ExperimentConfig& cfg,
                          const std::filesystem::path& output_dir);

/// File name used for the trace of one seed.
std::string trace_file_name(const config::ExperimentConfig& cfg, std::uint64_t seed);

/// Median of a non-empty list (mean of the two middle values for even sizes).
double median(std::vector<double> values);

struct RateFit {
    double rho_hat = 0.0;
    double r_squared = 0.0;
    int k_first = 0;
    int k_last = 0;
    std::size_t points = 0;
};

/// Least-squares fit of log err_sq against k; rho_hat = exp(slope).
/// `window` is an inclusive k range. Without it the first 10% of rows are
/// skipped. Points after the first exact zero are dropped; fewer than three
/// usable points is an error.
RateFit fit_rate(const RunTrace& trace, std::optional<std::pair<int, int>> window = std::nullopt);

/// Parses "a:b" into an inclusive k range.
std::pair<int, int> parse_window(const std::string& text);

struct CompareRow {
    std::uint64_t eval_count = 0;
    std::optional<double> left_median;
    std::optional<double> right_median;
};

struct Comparison {
    std::string left_label;
    std::string right_label;
    std::vector<CompareRow> rows;
    std::optional<double> left_final;   // median err_sq at the last row
    std::optional<double> right_final;
    std::string verdict;                // a label, "tie", or "undetermined"
    // Seed-by-seed comparison of final err_sq (seed i against seed i).
    int left_pair_wins = 0;
    int right_pair_wins = 0;
    int pair_ties = 0;
};

/// Aligns two groups of traces on cumulative eval_count. At each evaluation
/// count every trace contributes the err_sq of its last record at or below
/// that count. Rows cover each side's initialization and every record
/// within the budget.
Comparison compare_traces(const std::vector<RunTrace>& left, const std::vector<RunTrace>& right,
                          std::uint64_t budget, const std::string& left_label,
                          const std::string& right_label);

/// Runs both sides, writes their traces under output_dir/<label>/ and the
/// table to output_dir/comparison.csv.
Comparison compare(const config::CompareConfig& cfg, const std::filesystem::path& output_dir);

void write_comparison(const Comparison& cmp, std::ostream& out);

}  // namespace appmin::harness
