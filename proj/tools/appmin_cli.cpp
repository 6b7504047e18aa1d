// appmin command-line front end.
//
//   appmin run <config.json>
//   appmin compare <config.json>
//   appmin validate [--inject-integral-fault]
//   appmin fit-rate <trace.csv> [--window a:b]
//
// Exit status: 0 success, 1 run failure, 2 validation failure, 3 config error.

#include <iostream>

#include "CLI11.hpp"

#include "appmin/config.hpp"
#include "appmin/harness.hpp"
#include "appmin/numeric_text.hpp"
#include "appmin/trace_io.hpp"
#include "appmin/validate.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRunFailure = 1;
constexpr int kValidationFailure = 2;
constexpr int kConfigError = 3;

std::string opt(const std::optional<double>& v)
{
    return v ? appmin::format_double(*v) : "n/a";
}

int cmd_run(const std::string& path)
{
    const appmin::config::ExperimentConfig cfg = appmin::config::load_experiment(path);
    const auto dir = appmin::config::resolve_output(cfg.output);
    const appmin::harness::RunSummary summary = appmin::harness::run_experiment(cfg, dir);
    for (const auto& s : summary.seeds) {
        std::cout << "seed " << s.seed << "  final_err_sq=" << opt(s.final_err_sq)
                  << "  iterations=" << s.iterations << "  evals=" << s.eval_count
                  << (s.passed ? "  ok" : "  FAILED");
        if (s.failure)
            std::cout << "  (" << *s.failure << ")";
        std::cout << '\n';
    }
    std::cout << "median final_err_sq=" << opt(summary.median_final_err_sq) << '\n';
    std::cout << "summary: " << summary.summary_file.string() << '\n';
    return summary.all_passed() ? kOk : kRunFailure;
}

int cmd_compare(const std::string& path)
{
    const appmin::config::CompareConfig cfg = appmin::config::load_compare(path);
    const auto dir = appmin::config::resolve_output(cfg.output);
    const appmin::harness::Comparison cmp = appmin::harness::compare(cfg, dir);
    appmin::harness::write_comparison(cmp, std::cout);
    return kOk;
}

int cmd_validate(bool inject_fault)
{
    appmin::validation::Options options;
    options.inject_integral_sign_fault = inject_fault;
    const appmin::validation::Report report = appmin::validation::validate(options);
    appmin::validation::print_report(report, std::cout);
    return report.all_passed() ? kOk : kValidationFailure;
}

int cmd_fit_rate(const std::string& path, const std::string& window)
{
    std::optional<std::pair<int, int>> range;
    if (!window.empty()) {
        try {
            range = appmin::harness::parse_window(window);
        }
        catch (const appmin::Error& e) {
            throw appmin::config::ConfigError(e.what());
        }
    }
    const appmin::RunTrace trace = appmin::trace_io::read_trace(std::filesystem::path(path));
    const appmin::harness::RateFit fit = appmin::harness::fit_rate(trace, range);
    std::cout << "rho_hat=" << appmin::format_double(fit.rho_hat)
              << "  r_squared=" << appmin::format_double(fit.r_squared) << "  window=" << fit.k_first
              << ":" << fit.k_last << "  points=" << fit.points << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Asymptotic proximal point optimizer and benchmark harness"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run = app.add_subcommand("run", "Run a seeded experiment from a JSON config");
    run->add_option("config", run_config, "Experiment config")->required();

    std::string compare_config;
    auto* compare = app.add_subcommand("compare", "Compare two solvers at an equal budget");
    compare->add_option("config", compare_config, "Comparison config")->required();

    bool inject_fault = false;
    auto* validate = app.add_subcommand("validate", "Run the analysis oracle checks");
    validate->add_flag("--inject-integral-fault", inject_fault,
                       "Corrupt the Gaussian integral closed form to exercise the failure path");

    std::string trace_path, window;
    auto* fit = app.add_subcommand("fit-rate", "Fit the contraction rate of a trace");
    fit->add_option("trace", trace_path, "Trace CSV")->required();
    fit->add_option("--window", window, "Inclusive iteration range a:b");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run)
            return cmd_run(run_config);
        if (*compare)
            return cmd_compare(compare_config);
        if (*validate)
            return cmd_validate(inject_fault);
        return cmd_fit_rate(trace_path, window);
    }
    catch (const appmin::config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRunFailure;
    }
}
