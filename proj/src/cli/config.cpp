#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "specreg/cli.hpp"
#include "specreg/error.hpp"

namespace specreg::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &field, const std::string &what) {
    throw Error(ErrorCode::ConfigError, "field '" + field + "': " + what);
}

std::string join(const std::string &prefix, const std::string &key) { return prefix.empty() ? key : prefix + "." + key; }

void reject_unknown(const json &obj, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!obj.is_object()) fail(where.empty() ? "<root>" : where, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto &item : obj.items()) {
        if (!keys.count(item.key())) fail(join(where, item.key()), "unknown field");
    }
}

double get_number(const json &obj, const std::string &where, const char *key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto &v = obj.at(key);
    if (!v.is_number()) fail(join(where, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(join(where, key), "must be finite");
    return d;
}

double require_positive(double v, const std::string &field) {
    if (!(v > 0.0)) fail(field, "must be positive");
    return v;
}

std::int64_t get_integer(const json &obj, const std::string &where, const char *key, std::int64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto &v = obj.at(key);
    if (!v.is_number_integer()) fail(join(where, key), "expected an integer");
    return v.get<std::int64_t>();
}

std::uint64_t get_seed(const json &obj, const std::string &where, const char *key, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto &v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        fail(join(where, key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::vector<double> get_number_list(const json &obj, const std::string &where, const char *key) {
    const auto &v = obj.at(key);
    if (!v.is_array()) fail(join(where, key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto &e : v) {
        if (!e.is_number() || !std::isfinite(e.get<double>())) fail(join(where, key), "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

FilterConfig parse_filter(const json &v, const std::string &where) {
    std::string kind;
    json obj = json::object();
    if (v.is_string()) {
        kind = v.get<std::string>();
    } else {
        reject_unknown(v, where, {"kind", "step"});
        if (!v.contains("kind") || !v.at("kind").is_string()) fail(join(where, "kind"), "expected a string");
        kind = v.at("kind").get<std::string>();
        obj = v;
    }
    FilterConfig f;
    if (kind == "tikhonov" || kind == "ridge") {
        f.kind = FilterKind::Tikhonov;
    } else if (kind == "landweber" || kind == "gradient_descent") {
        f.kind = FilterKind::Landweber;
        f.step = get_number(obj, where, "step", 0.0);
        if (obj.contains("step")) require_positive(f.step, join(where, "step"));
    } else if (kind == "truncation" || kind == "pcr") {
        f.kind = FilterKind::Truncation;
    } else {
        fail(join(where, "kind"), "unknown filter '" + kind + "'");
    }
    if (f.kind != FilterKind::Landweber && obj.contains("step")) fail(join(where, "step"), "only Landweber takes a step");
    return f;
}

ProblemConfig parse_problem(const json &v, std::uint64_t default_seed) {
    const std::string where = "problem";
    reject_unknown(v, where, {"p", "beta", "B", "M", "D", "noise", "seed"});
    ProblemConfig pc;
    pc.p = get_number(v, where, "p", pc.p);
    if (!(pc.p > 0.0 && pc.p < 1.0)) fail("problem.p", "must lie in (0, 1)");
    pc.beta = require_positive(get_number(v, where, "beta", pc.beta), "problem.beta");
    pc.B = require_positive(get_number(v, where, "B", pc.B), "problem.B");
    pc.M = static_cast<int>(get_integer(v, where, "M", pc.M));
    if (pc.M < 1) fail("problem.M", "must be >= 1");
    pc.D = static_cast<int>(get_integer(v, where, "D", pc.D));
    if (pc.D < 1) fail("problem.D", "must be >= 1");
    pc.seed = get_seed(v, where, "seed", default_seed);
    if (v.contains("noise")) {
        const auto &nz = v.at("noise");
        reject_unknown(nz, "problem.noise", {"kind", "param"});
        if (!nz.contains("kind") || !nz.at("kind").is_string()) fail("problem.noise.kind", "expected a string");
        const auto kind = nz.at("kind").get<std::string>();
        if (kind == "bounded_uniform") {
            pc.noise.kind = NoiseKind::BoundedUniform;
        } else if (kind == "gaussian") {
            pc.noise.kind = NoiseKind::Gaussian;
        } else {
            fail("problem.noise.kind", "unknown noise '" + kind + "'");
        }
        pc.noise.param = get_number(nz, "problem.noise", "param", pc.noise.param);
        if (!(pc.noise.param >= 0.0)) fail("problem.noise.param", "must be >= 0");
    }
    return pc;
}

LambdaSchedule parse_schedule(const json &v, bool &default_grid) {
    const std::string where = "schedule";
    reject_unknown(v, where, {"kind", "exponent", "scale", "alpha", "theta", "grid"});
    if (!v.contains("kind") || !v.at("kind").is_string()) fail("schedule.kind", "expected a string");
    const auto kind = v.at("kind").get<std::string>();
    default_grid = false;
    if (kind == "power_law") {
        if (!v.contains("exponent")) fail("schedule.exponent", "required for power_law");
        return LambdaSchedule::power_law(require_positive(get_number(v, where, "exponent", 0.0), "schedule.exponent"),
                                         require_positive(get_number(v, where, "scale", 1.0), "schedule.scale"));
    }
    if (kind == "log_power") {
        if (!v.contains("alpha")) fail("schedule.alpha", "required for log_power");
        return LambdaSchedule::log_power(require_positive(get_number(v, where, "alpha", 0.0), "schedule.alpha"),
                                         get_number(v, where, "theta", 1.0),
                                         require_positive(get_number(v, where, "scale", 1.0), "schedule.scale"));
    }
    if (kind == "oracle_grid") {
        if (!v.contains("grid")) {
            default_grid = true;
            LambdaSchedule s;
            s.kind = ScheduleKind::OracleGrid;
            return s;
        }
        auto grid = get_number_list(v, where, "grid");
        if (grid.empty()) fail("schedule.grid", "must not be empty");
        for (double g : grid) require_positive(g, "schedule.grid");
        return LambdaSchedule::oracle_grid(std::move(grid));
    }
    fail("schedule.kind", "unknown schedule '" + kind + "'");
}

Command parse_command(const json &doc) {
    if (!doc.contains("command") || !doc.at("command").is_string()) fail("command", "expected a string");
    const auto c = doc.at("command").get<std::string>();
    if (c == "rates") return Command::Rates;
    if (c == "saturation") return Command::Saturation;
    if (c == "effdim") return Command::Effdim;
    if (c == "filter-check") return Command::FilterCheck;
    if (c == "cme-demo") return Command::CmeDemo;
    if (c == "bias-variance") return Command::BiasVariance;
    fail("command", "unknown command '" + c + "'");
}

std::vector<double> default_decades(double top) {
    std::vector<double> out;
    for (int e = -4; e <= 0; ++e) out.push_back(top * std::pow(10.0, e));
    return out;
}

}  // namespace

std::string to_string(Command command) {
    switch (command) {
        case Command::Rates: return "rates";
        case Command::Saturation: return "saturation";
        case Command::Effdim: return "effdim";
        case Command::FilterCheck: return "filter-check";
        case Command::CmeDemo: return "cme-demo";
        case Command::BiasVariance: return "bias-variance";
    }
    return "unknown";
}

FilterSpec FilterConfig::resolve(double kappa2) const {
    switch (kind) {
        case FilterKind::Tikhonov: return FilterSpec::tikhonov();
        case FilterKind::Truncation: return FilterSpec::truncation();
        case FilterKind::Landweber: return FilterSpec::landweber(step > 0.0 ? step : 1.0 / kappa2);
    }
    return FilterSpec::tikhonov();
}

MercerProblem ProblemConfig::make() const { return make_problem(p, beta, B, M, D, noise, seed); }

ExperimentConfig parse_config(const json &doc) {
    reject_unknown(doc, "", {"command", "problem", "filters", "schedule", "n_grid", "trials", "gamma", "seed",
                             "output_dir", "check", "decays", "orders", "lambda_count", "kappa2", "lambda_grid",
                             "rho_primes", "n", "lambda", "cme"});
    ExperimentConfig c;
    c.command = parse_command(doc);
    c.seed = get_seed(doc, "", "seed", 0);
    if (const char *env = std::getenv("SPECREG_SEED"); env != nullptr && *env != '\0') {
        char *end = nullptr;
        const auto value = std::strtoull(env, &end, 10);
        if (end == nullptr || *end != '\0') fail("SPECREG_SEED", "expected an unsigned integer");
        c.seed = value;
    }
    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string()) fail("output_dir", "expected a string");
        c.output_dir = doc.at("output_dir").get<std::string>();
    }
    c.trials = static_cast<int>(get_integer(doc, "", "trials", c.command == Command::Saturation ? 50 : 20));
    if (c.trials < 1) fail("trials", "must be >= 1");
    c.gamma = get_number(doc, "", "gamma", 0.0);
    if (!(c.gamma >= 0.0 && c.gamma < 1.0)) fail("gamma", "must lie in [0, 1)");

    const bool uses_problem = c.command == Command::Rates || c.command == Command::Saturation ||
                              c.command == Command::BiasVariance;
    if (uses_problem) {
        c.problem = parse_problem(doc.contains("problem") ? doc.at("problem") : json::object(), c.seed);
        if (c.command == Command::Saturation && c.problem.beta < 2.0) fail("problem.beta", "saturation needs beta >= 2");
    } else if (doc.contains("problem")) {
        fail("problem", "not used by command '" + to_string(c.command) + "'");
    }

    if (doc.contains("filters")) {
        const auto &fs = doc.at("filters");
        if (!fs.is_array() || fs.empty()) fail("filters", "expected a non-empty array");
        for (std::size_t i = 0; i < fs.size(); ++i) c.filters.push_back(parse_filter(fs[i], "filters[" + std::to_string(i) + "]"));
    } else if (c.command == Command::Saturation) {
        c.filters = {{FilterKind::Tikhonov, 0.0}, {FilterKind::Truncation, 0.0}, {FilterKind::Landweber, 0.0}};
    } else if (c.command == Command::BiasVariance) {
        c.filters = {{FilterKind::Tikhonov, 0.0}};
    } else {
        c.filters = {{FilterKind::Tikhonov, 0.0}, {FilterKind::Landweber, 0.0}, {FilterKind::Truncation, 0.0}};
    }
    if (c.command == Command::Saturation && doc.contains("filters")) fail("filters", "saturation always runs ridge, truncation and Landweber");

    if (doc.contains("schedule")) {
        c.schedule = parse_schedule(doc.at("schedule"), c.schedule_default_grid);
        if (c.command == Command::Saturation && c.schedule.kind != ScheduleKind::OracleGrid) {
            fail("schedule.kind", "saturation uses an oracle grid");
        }
    } else if (c.command == Command::Rates) {
        c.schedule = LambdaSchedule::power_law(1.0 / (c.problem.beta + c.problem.p));
    } else {
        c.schedule.kind = ScheduleKind::OracleGrid;
        c.schedule_default_grid = true;
    }
    if (c.schedule_default_grid && uses_problem) {
        c.schedule = LambdaSchedule::default_oracle_grid(c.problem.make().kernel().kappa2());
        c.schedule_default_grid = false;
    }

    if (doc.contains("n_grid")) {
        const auto &ng = doc.at("n_grid");
        if (!ng.is_array()) fail("n_grid", "expected an array of integers");
        for (const auto &e : ng) {
            if (!e.is_number_integer() || e.get<std::int64_t>() < 1) fail("n_grid", "expected positive integers");
            c.n_grid.push_back(e.get<Index>());
        }
    } else if (c.command == Command::CmeDemo) {
        c.n_grid = {250, 500, 1000, 2000};
    } else {
        c.n_grid = {128, 256, 512, 1024, 2048, 4096};
    }
    for (std::size_t i = 1; i < c.n_grid.size(); ++i) {
        if (c.n_grid[i] <= c.n_grid[i - 1]) fail("n_grid", "must be strictly ascending");
    }
    if ((c.command == Command::Rates || c.command == Command::Saturation) && c.n_grid.size() < 4) {
        fail("n_grid", "needs at least 4 sample sizes");
    }
    if (c.command == Command::CmeDemo && c.n_grid.empty()) fail("n_grid", "must not be empty");

    if (c.command == Command::Effdim) {
        c.decays = doc.contains("decays") ? get_number_list(doc, "", "decays") : std::vector<double>{0.25, 0.5, 0.75};
        for (double p : c.decays) {
            if (!(p > 0.0 && p < 1.0)) fail("decays", "each p must lie in (0, 1)");
        }
        c.orders = doc.contains("orders") ? get_number_list(doc, "", "orders") : std::vector<double>{1.0, 2.0};
        for (double l : c.orders) {
            if (!(l >= 1.0)) fail("orders", "each l must be >= 1");
        }
        c.problem.M = static_cast<int>(kDefaultMercerOrder);
        c.lambda_count = static_cast<int>(get_integer(doc, "", "lambda_count", 20));
        if (c.lambda_count < 2) fail("lambda_count", "must be >= 2");
    } else {
        for (const char *k : {"decays", "orders", "lambda_count"}) {
            if (doc.contains(k)) fail(k, "only used by effdim");
        }
    }

    if (c.command == Command::FilterCheck) {
        c.kappa2 = require_positive(get_number(doc, "", "kappa2", 1.0), "kappa2");
        c.lambda_grid = doc.contains("lambda_grid") ? get_number_list(doc, "", "lambda_grid") : default_decades(c.kappa2);
        for (double l : c.lambda_grid) {
            if (!(l > 0.0 && l <= c.kappa2)) fail("lambda_grid", "values must lie in (0, kappa2]");
        }
        if (doc.contains("rho_primes")) {
            c.rho_primes = get_number_list(doc, "", "rho_primes");
            for (double r : c.rho_primes) require_positive(r, "rho_primes");
        }
    } else {
        for (const char *k : {"kappa2", "rho_primes"}) {
            if (doc.contains(k)) fail(k, "only used by filter-check");
        }
        if (doc.contains("lambda_grid")) {
            if (c.command != Command::CmeDemo) fail("lambda_grid", "only used by filter-check and cme-demo");
            c.lambda_grid = get_number_list(doc, "", "lambda_grid");
            for (double l : c.lambda_grid) require_positive(l, "lambda_grid");
        } else if (c.command == Command::CmeDemo) {
            c.lambda_grid = LambdaSchedule::default_oracle_grid(1.0).grid;
        }
    }

    if (c.command == Command::BiasVariance) {
        c.n = get_integer(doc, "", "n", 512);
        if (c.n < 1) fail("n", "must be >= 1");
        if (doc.contains("lambda")) c.lambda = require_positive(get_number(doc, "", "lambda", 0.0), "lambda");
    } else {
        for (const char *k : {"n", "lambda"}) {
            if (doc.contains(k)) fail(k, "only used by bias-variance");
        }
    }

    if (c.command == Command::CmeDemo) {
        if (doc.contains("cme")) {
            const auto &m = doc.at("cme");
            reject_unknown(m, "cme", {"sigma", "output_bandwidth", "covariate_bandwidth", "z0", "probes"});
            c.cme.sigma = require_positive(get_number(m, "cme", "sigma", c.cme.sigma), "cme.sigma");
            c.cme.output_bandwidth = require_positive(get_number(m, "cme", "output_bandwidth", c.cme.output_bandwidth), "cme.output_bandwidth");
            c.cme.covariate_bandwidth = require_positive(get_number(m, "cme", "covariate_bandwidth", c.cme.covariate_bandwidth), "cme.covariate_bandwidth");
            c.cme.z0 = get_number(m, "cme", "z0", c.cme.z0);
            c.cme.probes = static_cast<int>(get_integer(m, "cme", "probes", c.cme.probes));
            if (c.cme.probes < 1) fail("cme.probes", "must be >= 1");
        }
    } else if (doc.contains("cme")) {
        fail("cme", "only used by cme-demo");
    }

    if (doc.contains("check")) {
        const auto &k = doc.at("check");
        reject_unknown(k, "check", {"expected_slope", "tolerance", "min_separation", "max_ridge_abs_slope",
                                    "min_pcr_abs_slope", "max_relative_gap", "max_abs_error", "require_decreasing"});
        if (k.contains("expected_slope")) c.check.expected_slope = get_number(k, "check", "expected_slope", 0.0);
        c.check.tolerance = get_number(k, "check", "tolerance", c.check.tolerance);
        if (!(c.check.tolerance >= 0.0)) fail("check.tolerance", "must be >= 0");
        c.check.min_separation = get_number(k, "check", "min_separation", c.check.min_separation);
        c.check.max_ridge_abs_slope = get_number(k, "check", "max_ridge_abs_slope", c.check.max_ridge_abs_slope);
        c.check.min_pcr_abs_slope = get_number(k, "check", "min_pcr_abs_slope", c.check.min_pcr_abs_slope);
        c.check.max_relative_gap = get_number(k, "check", "max_relative_gap", c.check.max_relative_gap);
        c.check.max_abs_error = get_number(k, "check", "max_abs_error", c.check.max_abs_error);
        if (k.contains("require_decreasing")) {
            if (!k.at("require_decreasing").is_boolean()) fail("check.require_decreasing", "expected a boolean");
            c.check.require_decreasing = k.at("require_decreasing").get<bool>();
        }
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

namespace {

json filter_json(const FilterConfig &f) {
    switch (f.kind) {
        case FilterKind::Tikhonov: return {{"kind", "tikhonov"}};
        case FilterKind::Truncation: return {{"kind", "truncation"}};
        case FilterKind::Landweber: {
            json j = {{"kind", "landweber"}};
            if (f.step > 0.0) j["step"] = f.step;
            return j;
        }
    }
    return {};
}

json schedule_json(const LambdaSchedule &s) {
    switch (s.kind) {
        case ScheduleKind::PowerLaw: return {{"kind", "power_law"}, {"exponent", s.exponent}, {"scale", s.scale}};
        case ScheduleKind::LogPower:
            return {{"kind", "log_power"}, {"alpha", s.alpha}, {"theta", s.theta}, {"scale", s.scale}};
        case ScheduleKind::OracleGrid: return {{"kind", "oracle_grid"}, {"grid", s.grid}};
    }
    return {};
}

}  // namespace

json to_json(const ExperimentConfig &c) {
    json j;
    j["command"] = to_string(c.command);
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["trials"] = c.trials;
    j["gamma"] = c.gamma;
    j["filters"] = json::array();
    for (const auto &f : c.filters) j["filters"].push_back(filter_json(f));
    j["n_grid"] = c.n_grid;

    const bool uses_problem = c.command == Command::Rates || c.command == Command::Saturation ||
                              c.command == Command::BiasVariance;
    if (uses_problem) {
        j["problem"] = {{"p", c.problem.p},
                        {"beta", c.problem.beta},
                        {"B", c.problem.B},
                        {"M", c.problem.M},
                        {"D", c.problem.D},
                        {"noise", {{"kind", c.problem.noise.kind_name()}, {"param", c.problem.noise.param}}},
                        {"seed", c.problem.seed}};
        j["schedule"] = schedule_json(c.schedule);
    } else if (c.command == Command::CmeDemo) {
        j["schedule"] = {{"kind", "oracle_grid"}};
    }
    if (c.command == Command::Saturation) j.erase("filters");

    json check = {{"tolerance", c.check.tolerance},
                  {"min_separation", c.check.min_separation},
                  {"max_ridge_abs_slope", c.check.max_ridge_abs_slope},
                  {"min_pcr_abs_slope", c.check.min_pcr_abs_slope},
                  {"max_relative_gap", c.check.max_relative_gap},
                  {"max_abs_error", c.check.max_abs_error},
                  {"require_decreasing", c.check.require_decreasing}};
    if (c.check.expected_slope) check["expected_slope"] = *c.check.expected_slope;
    j["check"] = check;

    switch (c.command) {
        case Command::Effdim:
            j["decays"] = c.decays;
            j["orders"] = c.orders;
            j["lambda_count"] = c.lambda_count;
            break;
        case Command::FilterCheck:
            j["kappa2"] = c.kappa2;
            j["lambda_grid"] = c.lambda_grid;
            if (!c.rho_primes.empty()) j["rho_primes"] = c.rho_primes;
            break;
        case Command::BiasVariance:
            j["n"] = c.n;
            if (c.lambda) j["lambda"] = *c.lambda;
            break;
        case Command::CmeDemo:
            j["lambda_grid"] = c.lambda_grid;
            j["cme"] = {{"sigma", c.cme.sigma},
                        {"output_bandwidth", c.cme.output_bandwidth},
                        {"covariate_bandwidth", c.cme.covariate_bandwidth},
                        {"z0", c.cme.z0},
                        {"probes", c.cme.probes}};
            break;
        default: break;
    }
    return j;
}

}  // namespace specreg::cli
