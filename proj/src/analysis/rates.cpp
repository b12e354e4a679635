#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "specreg/analysis.hpp"
#include "specreg/error.hpp"
#include "specreg/parallel.hpp"

namespace specreg {

namespace {

constexpr std::uint64_t kSweepStream = 0x7377656570ULL;
constexpr std::uint64_t kPilotStream = 0x70696c6f74ULL;
constexpr std::uint64_t kBiasVarianceStream = 0x6269617376ULL;

struct Choice {
    double lambda;
    double error;
};

Choice choose(const CoefficientProjector &proj, const FilterSpec &filter, const LambdaSchedule &schedule, Index n,
              double gamma) {
    if (schedule.kind != ScheduleKind::OracleGrid) {
        const double lam = schedule.at(n);
        return {lam, proj.error(filter, lam, gamma)};
    }
    Choice best{schedule.grid.front(), std::numeric_limits<double>::infinity()};
    for (double lam : schedule.grid) {
        const double err = proj.error(filter, lam, gamma);
        if (err < best.error) best = {lam, err};
    }
    return best;
}

}  // namespace

LambdaSchedule LambdaSchedule::power_law(double exponent, double scale) {
    if (!(exponent > 0.0) || !(scale > 0.0)) throw Error(ErrorCode::BadParams, "power-law schedule needs positive exponent and scale");
    LambdaSchedule s;
    s.kind = ScheduleKind::PowerLaw;
    s.exponent = exponent;
    s.scale = scale;
    return s;
}

LambdaSchedule LambdaSchedule::log_power(double alpha, double theta, double scale) {
    if (!(alpha > 0.0) || !(scale > 0.0) || !std::isfinite(theta)) throw Error(ErrorCode::BadParams, "invalid log-power schedule");
    LambdaSchedule s;
    s.kind = ScheduleKind::LogPower;
    s.alpha = alpha;
    s.theta = theta;
    s.scale = scale;
    return s;
}

LambdaSchedule LambdaSchedule::oracle_grid(std::vector<double> grid) {
    if (grid.empty()) throw Error(ErrorCode::BadParams, "empty oracle grid");
    for (double g : grid) {
        if (!(g > 0.0) || !std::isfinite(g)) throw Error(ErrorCode::BadParams, "oracle grid values must be positive");
    }
    LambdaSchedule s;
    s.kind = ScheduleKind::OracleGrid;
    s.grid = std::move(grid);
    return s;
}

LambdaSchedule LambdaSchedule::default_oracle_grid(double kappa2) {
    constexpr int count = 25;
    std::vector<double> grid(count);
    const double lo = std::log(1e-6 * kappa2);
    const double hi = std::log(kappa2);
    for (int i = 0; i < count; ++i) grid[i] = i + 1 == count ? kappa2 : std::exp(lo + (hi - lo) * i / (count - 1));
    return oracle_grid(std::move(grid));
}

double LambdaSchedule::at(Index n) const {
    const auto nn = static_cast<double>(n);
    switch (kind) {
        case ScheduleKind::PowerLaw: return scale * std::pow(nn, -exponent);
        case ScheduleKind::LogPower: {
            if (n < 2) throw Error(ErrorCode::BadParams, "log-power schedule needs n >= 2");
            return scale * std::pow(nn / std::pow(std::log(nn), theta), -1.0 / alpha);
        }
        case ScheduleKind::OracleGrid: break;
    }
    throw Error(ErrorCode::BadParams, "oracle grid has no closed-form lambda_n");
}

std::string LambdaSchedule::name() const {
    std::ostringstream os;
    switch (kind) {
        case ScheduleKind::PowerLaw: os << "power_law(" << exponent << "," << scale << ")"; break;
        case ScheduleKind::LogPower: os << "log_power(" << alpha << "," << theta << "," << scale << ")"; break;
        case ScheduleKind::OracleGrid: os << "oracle_grid(" << grid.size() << ")"; break;
    }
    return os.str();
}

OlsFit fit_loglog(std::span<const double> n, std::span<const double> err) {
    if (n.size() != err.size() || n.size() < 2) throw Error(ErrorCode::InsufficientGrid, "log-log fit needs at least two points");
    const auto m = static_cast<double>(n.size());
    double mx = 0.0;
    double my = 0.0;
    std::vector<double> lx(n.size());
    std::vector<double> ly(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(n[i] > 0.0) || !(err[i] > 0.0)) throw Error(ErrorCode::BadParams, "log-log fit needs positive values");
        lx[i] = std::log(n[i]);
        ly[i] = std::log(err[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorCode::InsufficientGrid, "log-log fit needs distinct n");
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n.size() > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < n.size(); ++i) {
            const double r = ly[i] - fit.intercept - fit.slope * lx[i];
            ssr += r * r;
        }
        fit.slope_stderr = std::sqrt(ssr / (m - 2.0) / sxx);
    }
    return fit;
}

double theoretical_exponent(const FilterSpec &filter, double beta, double p, double gamma) {
    const double effective = std::min(beta, 2.0 * filter.qualification());
    return (effective - gamma) / (effective + p);
}

FilterSpec landweber_for(const Kernel &kernel) { return FilterSpec::landweber(1.0 / kernel.kappa2()); }

std::vector<RateReport> sweep_filters(const MercerProblem &problem, const std::vector<FilterSpec> &filters,
                                      const LambdaSchedule &schedule, std::span<const Index> n_grid, int trials,
                                      double gamma, std::uint64_t seed, RunOptions options) {
    if (n_grid.size() < 4) throw Error(ErrorCode::InsufficientGrid, "rate sweeps need at least 4 sample sizes");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
            throw Error(ErrorCode::InsufficientGrid, "n grid must be positive and strictly ascending");
        }
    }
    if (trials < 1) throw Error(ErrorCode::BadParams, "trials must be >= 1");
    if (filters.empty()) throw Error(ErrorCode::BadParams, "no filters");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorCode::BadParams, "gamma must lie in [0, 1)");

    const std::size_t cells = n_grid.size() * static_cast<std::size_t>(trials);
    // results[cell][filter]
    std::vector<std::vector<Choice>> results(cells);
    // largest n first so long tasks do not trail at the end of the pool
    parallel_for(cells, options.threads, [&](std::size_t task) {
        const std::size_t cell = cells - 1 - task;
        const std::size_t ni = cell / static_cast<std::size_t>(trials);
        const int trial = static_cast<int>(cell % static_cast<std::size_t>(trials));
        const Index n = n_grid[ni];
        RngStream rng(seed, stream_id(kSweepStream, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)));
        const Dataset data = sample(problem, n, rng);
        auto spectrum = GramSpectrum::decompose(problem.kernel(), data.xs);
        const CoefficientProjector proj(problem, spectrum, data.ys);
        std::vector<Choice> row;
        row.reserve(filters.size());
        for (const auto &filter : filters) row.push_back(choose(proj, filter, schedule, n, gamma));
        results[cell] = std::move(row);
    });

    std::vector<RateReport> reports;
    for (std::size_t f = 0; f < filters.size(); ++f) {
        RateReport rep;
        rep.filter = filters[f].name();
        rep.gamma = gamma;
        rep.n_grid.assign(n_grid.begin(), n_grid.end());
        rep.trial_errors.resize(static_cast<Index>(n_grid.size()), trials);
        std::vector<double> ns;
        for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
            double sum = 0.0;
            for (int t = 0; t < trials; ++t) {
                const auto &c = results[ni * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)][f];
                rep.trials.push_back({n_grid[ni], t, c.lambda, c.error});
                rep.trial_errors(static_cast<Index>(ni), t) = c.error;
                sum += c.error;
            }
            rep.mean_sq_error.push_back(sum / trials);
            ns.push_back(static_cast<double>(n_grid[ni]));
        }
        const OlsFit fit = fit_loglog(ns, rep.mean_sq_error);
        rep.fitted_slope = fit.slope;
        rep.slope_stderr = fit.slope_stderr;
        rep.theoretical_exponent = theoretical_exponent(filters[f], problem.beta, problem.p, gamma);
        reports.push_back(std::move(rep));
    }
    return reports;
}

RateReport rate_sweep(const MercerProblem &problem, const FilterSpec &filter, const LambdaSchedule &schedule,
                      std::span<const Index> n_grid, int trials, double gamma, std::uint64_t seed, RunOptions options) {
    return sweep_filters(problem, {filter}, schedule, n_grid, trials, gamma, seed, options).front();
}

SaturationResult saturation_experiment(double p, double beta, double B, std::span<const Index> n_grid, int trials,
                                       std::uint64_t seed, RunOptions options, SaturationSetup setup) {
    if (!(beta >= 2.0)) throw Error(ErrorCode::BadParams, "saturation experiment needs beta >= 2");
    const MercerProblem problem =
        make_problem(p, beta, B, setup.M, setup.D, setup.noise, setup.problem_seed.value_or(seed));
    const Kernel kernel = problem.kernel();
    const std::vector<FilterSpec> filters{FilterSpec::tikhonov(), FilterSpec::truncation(), landweber_for(kernel)};
    const LambdaSchedule schedule =
        setup.grid ? LambdaSchedule::oracle_grid(*setup.grid) : LambdaSchedule::default_oracle_grid(kernel.kappa2());
    auto reports = sweep_filters(problem, filters, schedule, n_grid, trials, 0.0, seed, options);
    SaturationResult out;
    out.ridge = std::move(reports[0]);
    out.pcr = std::move(reports[1]);
    out.landweber = std::move(reports[2]);
    out.separation = std::abs(out.pcr.fitted_slope) - std::abs(out.ridge.fitted_slope);
    out.theoretical_separation = beta / (beta + p) - std::min(beta, 2.0) / (std::min(beta, 2.0) + p);
    return out;
}

double BiasVariance::relative_gap() const { return std::abs(total - bias_sq - variance) / total; }

BiasVariance bias_variance_diagnostic(const MercerProblem &problem, const FilterSpec &filter, double lambda, Index n,
                                      int trials, std::uint64_t seed, RunOptions options) {
    if (trials < 1) throw Error(ErrorCode::BadParams, "trials must be >= 1");
    const Vector mu = problem.mu();
    struct Parts {
        double bias_sq, variance, total;
    };
    std::vector<Parts> parts(static_cast<std::size_t>(trials));
    parallel_for(parts.size(), options.threads, [&](std::size_t t) {
        RngStream rng(seed, stream_id(kBiasVarianceStream, static_cast<std::uint64_t>(n), t));
        const Dataset noisy = sample(problem, n, rng);
        const Matrix clean = problem.target(noisy.xs.col(0));
        auto spectrum = GramSpectrum::decompose(problem.kernel(), noisy.xs);
        const SpectralWeights weights(spectrum, filter, lambda);
        const Matrix c_noisy = CoefficientProjector(problem, spectrum, noisy.ys).coefficients(weights);
        const Matrix c_clean = CoefficientProjector(problem, spectrum, clean).coefficients(weights);
        parts[t] = {weighted_coefficient_distance(c_clean, problem.a, mu, 0.0),
                    weighted_coefficient_distance(c_noisy, c_clean, mu, 0.0),
                    weighted_coefficient_distance(c_noisy, problem.a, mu, 0.0)};
    });
    BiasVariance out;
    for (const auto &p : parts) {
        out.bias_sq += p.bias_sq;
        out.variance += p.variance;
        out.total += p.total;
    }
    out.bias_sq /= trials;
    out.variance /= trials;
    out.total /= trials;
    return out;
}

double pilot_oracle_lambda(const MercerProblem &problem, const FilterSpec &filter, std::span<const double> grid,
                           Index n, int trials, std::uint64_t seed, RunOptions options) {
    if (grid.empty()) throw Error(ErrorCode::BadParams, "empty grid");
    if (trials < 1) throw Error(ErrorCode::BadParams, "trials must be >= 1");
    std::vector<std::vector<double>> errors(static_cast<std::size_t>(trials));
    parallel_for(errors.size(), options.threads, [&](std::size_t t) {
        RngStream rng(seed, stream_id(kPilotStream, static_cast<std::uint64_t>(n), t));
        const Dataset data = sample(problem, n, rng);
        auto spectrum = GramSpectrum::decompose(problem.kernel(), data.xs);
        const CoefficientProjector proj(problem, spectrum, data.ys);
        for (double lam : grid) errors[t].push_back(proj.error(filter, lam, 0.0));
    });
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double sum = 0.0;
        for (const auto &row : errors) sum += row[g];
        if (sum < best_err) {
            best_err = sum;
            best = g;
        }
    }
    return grid[best];
}

}  // namespace specreg
