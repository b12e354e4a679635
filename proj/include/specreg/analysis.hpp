#pragma once

// Effective dimensions, regularization schedules and learning-rate
// experiments on synthetic Mercer problems.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specreg/synthetic.hpp"

namespace specreg {

/// N_l(lambda) = sum_i (mu_i / (mu_i + lambda))^l
double effective_dimension(std::span<const double> mu, double lambda, double l);

/// Constants of the two-sided bound c1 lambda^{-p} <= N_l(lambda) <= c2 lambda^{-p}
/// under mu_i in [D1 i^{-1/p}, D2 i^{-1/p}], p < l.
struct EffdimBounds {
    double lower;
    double upper;
};
EffdimBounds effective_dimension_bounds(double p, double l, double d1 = 1.0, double d2 = 1.0);

/// sqrt((1/n) sum f_i^2)
double empirical_norm(std::span<const double> values);

enum class ScheduleKind { PowerLaw, LogPower, OracleGrid };

struct LambdaSchedule {
    ScheduleKind kind = ScheduleKind::PowerLaw;
    double exponent = 1.0;  // PowerLaw: lambda_n = scale n^{-exponent}
    double scale = 1.0;
    double alpha = 1.0;  // LogPower: lambda_n = scale (n / log^theta n)^{-1/alpha}
    double theta = 1.0;
    std::vector<double> grid;  // OracleGrid

    static LambdaSchedule power_law(double exponent, double scale = 1.0);
    static LambdaSchedule log_power(double alpha, double theta, double scale = 1.0);
    static LambdaSchedule oracle_grid(std::vector<double> grid);
    /// 25 values geometric in [1e-6 kappa2, kappa2].
    static LambdaSchedule default_oracle_grid(double kappa2);

    /// lambda_n for the closed-form schedules (n >= 2). Throws BadParams for OracleGrid.
    [[nodiscard]] double at(Index n) const;
    [[nodiscard]] std::string name() const;
};

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

/// Least squares line through (log n, log err).
OlsFit fit_loglog(std::span<const double> n, std::span<const double> err);

/// (min(beta, 2 rho) - gamma) / (min(beta, 2 rho) + p) with rho the filter's qualification.
double theoretical_exponent(const FilterSpec &filter, double beta, double p, double gamma);

struct TrialRecord {
    Index n = 0;
    int trial = 0;
    double lambda = 0.0;
    double sq_error = 0.0;
};

struct RateReport {
    std::string filter;
    double gamma = 0.0;
    std::vector<Index> n_grid;
    std::vector<double> mean_sq_error;
    std::vector<TrialRecord> trials;  // sorted by (n, trial)
    Matrix trial_errors;              // n_grid.size() x trials
    double fitted_slope = 0.0;
    double slope_stderr = 0.0;
    double theoretical_exponent = 0.0;
};

struct RunOptions {
    unsigned threads = 0;
};

/// One rate sweep per filter over shared draws: the dataset for (n, trial) comes
/// from stream (seed, n, trial) regardless of filter or thread count. OracleGrid
/// picks, per (n, trial), the grid value minimizing exact_error at gamma.
std::vector<RateReport> sweep_filters(const MercerProblem &problem, const std::vector<FilterSpec> &filters,
                                      const LambdaSchedule &schedule, std::span<const Index> n_grid, int trials,
                                      double gamma, std::uint64_t seed, RunOptions options = {});

RateReport rate_sweep(const MercerProblem &problem, const FilterSpec &filter, const LambdaSchedule &schedule,
                      std::span<const Index> n_grid, int trials, double gamma, std::uint64_t seed,
                      RunOptions options = {});

struct SaturationResult {
    RateReport ridge;
    RateReport pcr;
    RateReport landweber;
    /// |slope(pcr)| - |slope(ridge)|
    double separation = 0.0;
    /// beta / (beta + p) - 2 / (2 + p)
    double theoretical_separation = 0.0;
};

struct SaturationSetup {
    int M = kDefaultMercerOrder;
    int D = 1;
    NoiseLaw noise = NoiseLaw::bounded_uniform(0.5);
    /// Seed of the target coefficients; the sweep seed when unset.
    std::optional<std::uint64_t> problem_seed;
    /// Oracle grid; 25 values geometric in [1e-6 kappa2, kappa2] when unset.
    std::optional<std::vector<double>> grid;
};

/// Ridge, truncation and Landweber (step 1/kappa^2) under the default oracle
/// grid. Throws BadParams when beta < 2.
SaturationResult saturation_experiment(double p, double beta, double B, std::span<const Index> n_grid, int trials,
                                       std::uint64_t seed, RunOptions options = {}, SaturationSetup setup = {});

struct BiasVariance {
    double bias_sq = 0.0;
    double variance = 0.0;
    double total = 0.0;

    /// |total - bias_sq - variance| / total
    [[nodiscard]] double relative_gap() const;
};

/// Per trial: fit on noisy outputs and on noiseless outputs at the same
/// covariates; average squared L2 errors of both and the distance between them.
BiasVariance bias_variance_diagnostic(const MercerProblem &problem, const FilterSpec &filter, double lambda, Index n,
                                      int trials, std::uint64_t seed, RunOptions options = {});

/// Grid value minimizing the mean exact L2 error over `trials` draws taken from
/// streams disjoint from those of the sweeps and the diagnostic.
double pilot_oracle_lambda(const MercerProblem &problem, const FilterSpec &filter, std::span<const double> grid,
                           Index n, int trials, std::uint64_t seed, RunOptions options = {});

/// Filter used for Landweber runs on a given kernel: step 1 / kappa^2.
FilterSpec landweber_for(const Kernel &kernel);

}  // namespace specreg
