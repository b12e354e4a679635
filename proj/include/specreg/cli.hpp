#pragma once

// Experiment configuration, result files and the `specreg` command runner.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "specreg/analysis.hpp"
#include "specreg/cme.hpp"

namespace specreg::cli {

enum class Command { Rates, Saturation, Effdim, FilterCheck, CmeDemo, BiasVariance };

std::string to_string(Command command);

/// Filter as configured; a Landweber step of 0 means "1 / kappa^2 of the kernel in use".
struct FilterConfig {
    FilterKind kind = FilterKind::Tikhonov;
    double step = 0.0;

    [[nodiscard]] FilterSpec resolve(double kappa2) const;
};

struct ProblemConfig {
    double p = 0.5;
    double beta = 1.0;
    double B = 1.0;
    int M = kDefaultMercerOrder;
    int D = 1;
    NoiseLaw noise = NoiseLaw::bounded_uniform(0.5);
    std::uint64_t seed = 0;

    [[nodiscard]] MercerProblem make() const;
};

struct CheckConfig {
    // rates
    std::optional<double> expected_slope;  // default: -theoretical exponent per filter
    double tolerance = 0.15;
    // saturation
    double min_separation = 0.03;
    double max_ridge_abs_slope = 0.86;
    double min_pcr_abs_slope = 0.82;
    // bias-variance
    double max_relative_gap = 0.1;
    // cme-demo
    double max_abs_error = 0.05;
    bool require_decreasing = true;
};

struct ExperimentConfig {
    Command command = Command::Rates;
    ProblemConfig problem;
    std::vector<FilterConfig> filters;
    LambdaSchedule schedule;
    bool schedule_default_grid = false;  // oracle grid resolved from kappa^2
    std::vector<Index> n_grid;
    int trials = 1;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    std::string output_dir = "results";
    CheckConfig check;

    // effdim
    std::vector<double> decays;
    std::vector<double> orders;
    int lambda_count = 20;
    // filter-check
    double kappa2 = 1.0;
    std::vector<double> lambda_grid;
    std::vector<double> rho_primes;
    // bias-variance
    Index n = 512;
    std::optional<double> lambda;
    // cme-demo
    CmeDemoSetup cme;
};

/// Validates and fills defaults. Throws Error(ConfigError) naming the field.
ExperimentConfig parse_config(const nlohmann::json &doc);
/// Reads and parses a file; malformed JSON is a ConfigError with its location.
ExperimentConfig load_config(const std::filesystem::path &path);
/// Fully resolved config; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig &config);

/// Shortest-round-trip-safe decimal with 17 significant digits.
std::string format_double(double value);

void write_rate_results(const std::filesystem::path &path, const std::vector<RateReport> &reports);
void write_rate_summary(const std::filesystem::path &path, const std::vector<RateReport> &reports,
                        const std::optional<SaturationResult> &saturation = std::nullopt);

/// Writes "<stem>_<filter>.dat" per report with rows "log10(n) log10(mean error)"
/// and a gnuplot script "<stem>.gp" referencing them. Returns the data files.
std::vector<std::filesystem::path> emit_plot_data(const std::vector<RateReport> &reports,
                                                  const std::filesystem::path &dir, const std::string &stem = "plot");
/// Parses a data file written by emit_plot_data.
std::vector<std::pair<double, double>> read_plot_data(const std::filesystem::path &path);

struct RunFlags {
    bool check = false;
    std::optional<std::string> output_dir;
    unsigned threads = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCheck = 4;

/// `specreg run`: executes the config, writes results.csv, summary.csv and
/// config_echo.json into the output directory and prints a summary table.
int run(const std::filesystem::path &config_path, const RunFlags &flags, std::ostream &out, std::ostream &err);
/// Same, from an already parsed config.
int run(ExperimentConfig config, const RunFlags &flags, std::ostream &out, std::ostream &err);

/// `specreg filter-check <filter>`: axiom verification with default grids.
int filter_check(const std::string &filter, double kappa2, std::ostream &out, std::ostream &err);

}  // namespace specreg::cli
