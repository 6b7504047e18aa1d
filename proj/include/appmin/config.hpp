#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "appmin/baselines.hpp"
#include "appmin/core.hpp"

namespace appmin::config {

/// Raised for anything wrong with a configuration file; the CLI maps it to
/// exit status 3.
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Solver { app_original, app_original_naive, app_stable, de_rand_1_bin };

Solver parse_solver(const std::string& name);
std::string to_string(Solver s);
bool is_app(Solver s);

struct ExperimentConfig {
    std::string objective;
    int dim = 0;
    Solver solver = Solver::app_stable;
    AppParams app;           // used by the app_* solvers
    baselines::DEConfig de;  // used by de_rand_1_bin
    std::uint64_t seed = 0;  // seeds run from seed to seed + n_seeds - 1
    int n_seeds = 1;
    // Initializer: explicit point, otherwise a random point on the sphere of
    // this radius (sqrt(d) unless given).
    std::optional<Point> init_point;
    double init_radius = 0.0;
    int max_iters = 100;  // iterations for APP, generations for DE
    std::optional<double> target_err_sq;
    std::filesystem::path output = "appmin_out";
    // Every default filled in while loading, as printable text.
    std::map<std::string, std::string> defaults;

    void validate() const;
};

/// Two experiments on the same objective compared at an equal evaluation
/// budget. Iteration counts of both sides are derived from the budget.
struct CompareConfig {
    ExperimentConfig left;
    ExperimentConfig right;
    std::string left_label;
    std::string right_label;
    std::uint64_t budget = 0;
    std::filesystem::path output = "appmin_out";
};

/// Parses JSON configuration text.
ExperimentConfig parse_experiment(const std::string& text);
CompareConfig parse_compare(const std::string& text);

ExperimentConfig load_experiment(const std::filesystem::path& path);
CompareConfig load_compare(const std::filesystem::path& path);

/// Name of the environment variable that overrides the output directory.
inline constexpr const char* kOutputDirEnv = "APPMIN_OUTPUT_DIR";

/// The configured output path, replaced by $APPMIN_OUTPUT_DIR when set.
std::filesystem::path resolve_output(const std::filesystem::path& configured);

}  // namespace appmin::config
