#include "appmin/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "appmin/numeric_text.hpp"
#include "appmin/objectives.hpp"

namespace appmin::config {

using nlohmann::json;

Solver parse_solver(const std::string& name)
{
    if (name == "app_original")
        return Solver::app_original;
    if (name == "app_original_naive")
        return Solver::app_original_naive;
    if (name == "app_stable")
        return Solver::app_stable;
    if (name == "de_rand_1_bin")
        return Solver::de_rand_1_bin;
    throw ConfigError("unknown solver '" + name + "'");
}

std::string to_string(Solver s)
{
    switch (s) {
    case Solver::app_original: return "app_original";
    case Solver::app_original_naive: return "app_original_naive";
    case Solver::app_stable: return "app_stable";
    case Solver::de_rand_1_bin: return "de_rand_1_bin";
    }
    return "unknown";
}

bool is_app(Solver s)
{
    return s != Solver::de_rand_1_bin;
}

void ExperimentConfig::validate() const
{
    try {
        const ObjectiveSpec spec = objectives::make_objective(objective, dim);
        if (n_seeds < 1)
            throw ConfigError("n_seeds must be at least 1");
        if (max_iters < 0)
            throw ConfigError("max_iters must be non-negative");
        if (target_err_sq && !(*target_err_sq >= 0.0))
            throw ConfigError("target_err_sq must be non-negative");
        if (target_err_sq && !spec.known_minimizer)
            throw ConfigError("target_err_sq needs an objective with a known minimizer");
        if (init_point && init_point->size() != dim)
            throw ConfigError("init.point has the wrong dimension");
        if (!init_point && !(init_radius > 0.0))
            throw ConfigError("init.radius must be positive");
        if (is_app(solver))
            app.validate();
        else
            de.validate(dim);
    }
    catch (const ConfigError&) {
        throw;
    }
    catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

namespace {

// Rejects keys outside `allowed` so that typos do not silently fall back to
// defaults.
void check_keys(const json& section, const std::string& where, std::set<std::string> allowed)
{
    if (!section.is_object())
        throw ConfigError(where + " must be an object");
    for (const auto& item : section.items()) {
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
}

template <typename T>
T get(const json& section, const std::string& key, const std::string& where)
{
    try {
        return section.at(key).get<T>();
    }
    catch (const json::exception&) {
        throw ConfigError(where + "." + key + " is missing or has the wrong type");
    }
}

template <typename T>
std::optional<T> get_optional(const json& section, const std::string& key, const std::string& where)
{
    if (!section.contains(key))
        return std::nullopt;
    return get<T>(section, key, where);
}

Point to_point(const json& value, const std::string& where)
{
    if (!value.is_array() || value.empty())
        throw ConfigError(where + " must be a non-empty array of numbers");
    Point p(static_cast<Eigen::Index>(value.size()));
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_number())
            throw ConfigError(where + " must be a non-empty array of numbers");
        p[static_cast<Eigen::Index>(i)] = value[i].get<double>();
    }
    return p;
}

// Fields that may appear per solver side. Shared fields (objective, seeds,
// output) are read by the callers.
void read_solver_side(const json& doc, ExperimentConfig& cfg, const std::string& where)
{
    cfg.solver = parse_solver(get<std::string>(doc, "solver", where));
    const double sqrt_d = std::sqrt(static_cast<double>(cfg.dim));

    if (is_app(cfg.solver)) {
        if (!doc.contains("app"))
            throw ConfigError(where + ".app is required for solver " + to_string(cfg.solver));
        const json& app = doc.at("app");
        const std::string w = where + ".app";
        check_keys(app, w, {"lambda", "rho", "n", "sampler"});
        cfg.app.variant = cfg.solver == Solver::app_stable           ? Variant::stable
                          : cfg.solver == Solver::app_original_naive ? Variant::original_naive
                                                                     : Variant::original;
        if (auto lambda = get_optional<double>(app, "lambda", w)) {
            cfg.app.lambda = *lambda;
        }
        else {
            cfg.app.lambda = 1.0 / sqrt_d;
            cfg.defaults["lambda"] = "1/sqrt(d) = " + format_double(cfg.app.lambda);
        }
        cfg.app.rho = get<double>(app, "rho", w);
        cfg.app.n = get<int>(app, "n", w);
        if (auto sampler = get_optional<std::string>(app, "sampler", w)) {
            try {
                cfg.app.sampler = sampling::parse_sampler_kind(*sampler);
            }
            catch (const Error& e) {
                throw ConfigError(e.what());
            }
        }
        else {
            cfg.app.sampler = sampling::SamplerKind::pseudo_random;
            cfg.defaults["sampler"] = sampling::to_string(cfg.app.sampler);
        }
    }
    else if (doc.contains("app")) {
        throw ConfigError(where + ".app given for solver de_rand_1_bin");
    }

    if (!is_app(cfg.solver)) {
        const json de = doc.contains("de") ? doc.at("de") : json::object();
        const std::string w = where + ".de";
        check_keys(de, w, {"population_size", "F", "CR", "domain"});
        if (auto np = get_optional<int>(de, "population_size", w))
            cfg.de.population_size = *np;
        else
            cfg.defaults["population_size"] =
                "min(10 d, 200) = " + std::to_string(cfg.de.resolved_population(cfg.dim));
        if (auto F = get_optional<double>(de, "F", w))
            cfg.de.F = *F;
        else
            cfg.defaults["F"] = format_double(cfg.de.F);
        if (auto CR = get_optional<double>(de, "CR", w))
            cfg.de.CR = *CR;
        else
            cfg.defaults["CR"] = format_double(cfg.de.CR);
        if (de.contains("domain")) {
            const Point dom = to_point(de.at("domain"), w + ".domain");
            if (dom.size() != 2)
                throw ConfigError(w + ".domain must be [lo, hi]");
            cfg.de.lo = dom[0];
            cfg.de.hi = dom[1];
        }
        else {
            cfg.defaults["domain"] = "[-1, 1]";
        }
    }
    else if (doc.contains("de")) {
        throw ConfigError(where + ".de given for an APP solver");
    }

    cfg.init_radius = sqrt_d;
    if (doc.contains("init")) {
        const json& init = doc.at("init");
        check_keys(init, where + ".init", {"radius", "point"});
        if (init.contains("radius") && init.contains("point"))
            throw ConfigError(where + ".init takes either radius or point");
        if (init.contains("point"))
            cfg.init_point = to_point(init.at("point"), where + ".init.point");
        else if (auto r = get_optional<double>(init, "radius", where + ".init"))
            cfg.init_radius = *r;
    }
    if (!cfg.init_point && !(doc.contains("init") && doc.at("init").contains("radius")))
        cfg.defaults["init"] = "sphere radius sqrt(d) = " + format_double(sqrt_d);
}

void read_objective(const json& doc, ExperimentConfig& cfg)
{
    const json& obj = doc.at("objective");
    check_keys(obj, "objective", {"name", "dim"});
    cfg.objective = get<std::string>(obj, "name", "objective");
    cfg.dim = get<int>(obj, "dim", "objective");
}

void read_seeds(const json& doc, ExperimentConfig& cfg)
{
    if (auto seed = get_optional<std::uint64_t>(doc, "seed", "config"))
        cfg.seed = *seed;
    else
        cfg.defaults["seed"] = "0";
    if (auto n = get_optional<int>(doc, "n_seeds", "config"))
        cfg.n_seeds = *n;
}

json parse_text(const std::string& text)
{
    try {
        return json::parse(text, nullptr, true, /*ignore_comments=*/true);
    }
    catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed configuration: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read configuration " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

ExperimentConfig parse_experiment(const std::string& text)
{
    const json doc = parse_text(text);
    check_keys(doc, "config",
               {"objective", "solver", "app", "de", "seed", "n_seeds", "init", "stop", "output"});
    if (!doc.contains("objective"))
        throw ConfigError("config.objective is required");

    ExperimentConfig cfg;
    read_objective(doc, cfg);
    read_seeds(doc, cfg);
    read_solver_side(doc, cfg, "config");

    if (doc.contains("stop")) {
        const json& stop = doc.at("stop");
        check_keys(stop, "stop", {"max_iters", "target_err_sq"});
        if (auto iters = get_optional<int>(stop, "max_iters", "stop"))
            cfg.max_iters = *iters;
        cfg.target_err_sq = get_optional<double>(stop, "target_err_sq", "stop");
    }
    if (auto out = get_optional<std::string>(doc, "output", "config"))
        cfg.output = *out;

    cfg.app.max_iters = cfg.max_iters;
    cfg.de.max_generations = cfg.max_iters;
    cfg.validate();
    return cfg;
}

CompareConfig parse_compare(const std::string& text)
{
    const json doc = parse_text(text);
    check_keys(doc, "config", {"objective", "seed", "n_seeds", "budget", "output", "left", "right"});
    for (const char* key : {"objective", "budget", "left", "right"}) {
        if (!doc.contains(key))
            throw ConfigError(std::string("config.") + key + " is required");
    }

    CompareConfig cmp;
    const json budget = doc.at("budget");
    if (!budget.is_number_integer() || budget.get<long long>() < 0)
        throw ConfigError("config.budget must be a non-negative integer");
    cmp.budget = budget.get<std::uint64_t>();
    if (auto out = get_optional<std::string>(doc, "output", "config"))
        cmp.output = *out;

    auto side = [&](const char* key, std::string& label) {
        const json& s = doc.at(key);
        const std::string where = std::string("config.") + key;
        check_keys(s, where, {"label", "solver", "app", "de", "init"});
        ExperimentConfig cfg;
        read_objective(doc, cfg);
        read_seeds(doc, cfg);
        read_solver_side(s, cfg, where);
        label = s.contains("label") ? get<std::string>(s, "label", where)
                                    : (is_app(cfg.solver) ? "app" : "de");
        // Spend the budget: APP uses n evaluations per iteration, DE spends
        // NP on the initial population and NP per generation.
        if (is_app(cfg.solver)) {
            cfg.max_iters = static_cast<int>(cmp.budget / static_cast<std::uint64_t>(std::max(cfg.app.n, 1)));
        }
        else {
            const auto np = static_cast<std::uint64_t>(cfg.de.resolved_population(cfg.dim));
            cfg.max_iters = cmp.budget >= np ? static_cast<int>(cmp.budget / np - 1) : 0;
        }
        cfg.app.max_iters = cfg.max_iters;
        cfg.de.max_generations = cfg.max_iters;
        cfg.output = cmp.output;
        cfg.validate();
        return cfg;
    };
    cmp.left = side("left", cmp.left_label);
    cmp.right = side("right", cmp.right_label);
    if (cmp.left_label == cmp.right_label) {
        cmp.left_label += "_left";
        cmp.right_label += "_right";
    }
    return cmp;
}

ExperimentConfig load_experiment(const std::filesystem::path& path)
{
    return parse_experiment(read_file(path));
}

CompareConfig load_compare(const std::filesystem::path& path)
{
    return parse_compare(read_file(path));
}

std::filesystem::path resolve_output(const std::filesystem::path& configured)
{
    if (const char* env = std::getenv(kOutputDirEnv); env && *env)
        return env;
    return configured;
}

}  // namespace appmin::config
