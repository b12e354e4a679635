#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "specreg/cli.hpp"
#include "specreg/error.hpp"

namespace specreg::cli {

namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool check_passed = true;
};

std::ofstream open_csv(const fs::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    return out;
}

// Short form for the console; the files keep full precision.
std::string brief(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}

std::vector<FilterSpec> resolve_filters(const ExperimentConfig &c, double kappa2) {
    std::vector<FilterSpec> out;
    for (const auto &f : c.filters) out.push_back(f.resolve(kappa2));
    return out;
}

void print_rate_table(const std::vector<RateReport> &reports, std::ostream &out) {
    out << std::left << std::setw(12) << "filter" << std::right << std::setw(8) << "gamma" << std::setw(12) << "slope"
        << std::setw(12) << "stderr" << std::setw(12) << "theory" << '\n';
    for (const auto &r : reports) {
        out << std::left << std::setw(12) << r.filter << std::right << std::fixed << std::setprecision(3) << std::setw(8)
            << r.gamma << std::setw(12) << std::setprecision(4) << r.fitted_slope << std::setw(12) << r.slope_stderr
            << std::setw(12) << -r.theoretical_exponent << '\n';
    }
    out.unsetf(std::ios::floatfield);
}

Outcome run_rates(const ExperimentConfig &c, const fs::path &dir, const RunFlags &flags, std::ostream &out) {
    const MercerProblem problem = c.problem.make();
    const auto filters = resolve_filters(c, problem.kernel().kappa2());
    const auto reports =
        sweep_filters(problem, filters, c.schedule, c.n_grid, c.trials, c.gamma, c.seed, {flags.threads});
    write_rate_results(dir / "results.csv", reports);
    write_rate_summary(dir / "summary.csv", reports);
    emit_plot_data(reports, dir);
    print_rate_table(reports, out);

    Outcome o;
    for (const auto &r : reports) {
        const double expected = c.check.expected_slope.value_or(-r.theoretical_exponent);
        const bool ok = std::abs(r.fitted_slope - expected) <= c.check.tolerance;
        if (flags.check) {
            out << "check " << r.filter << ": slope " << brief(r.fitted_slope) << " vs " << brief(expected)
                << " +/- " << brief(c.check.tolerance) << (ok ? " PASS" : " FAIL") << '\n';
        }
        o.check_passed = o.check_passed && ok;
    }
    return o;
}

Outcome run_saturation(const ExperimentConfig &c, const fs::path &dir, const RunFlags &flags, std::ostream &out) {
    SaturationSetup setup;
    setup.M = c.problem.M;
    setup.D = c.problem.D;
    setup.noise = c.problem.noise;
    setup.problem_seed = c.problem.seed;
    setup.grid = c.schedule.grid;
    const auto sat = saturation_experiment(c.problem.p, c.problem.beta, c.problem.B, c.n_grid, c.trials, c.seed,
                                           {flags.threads}, setup);
    const std::vector<RateReport> reports{sat.ridge, sat.pcr, sat.landweber};
    write_rate_results(dir / "results.csv", reports);
    write_rate_summary(dir / "summary.csv", reports, sat);
    emit_plot_data(reports, dir);
    print_rate_table(reports, out);
    out << "separation |pcr| - |ridge| = " << brief(sat.separation) << " (theory "
        << brief(sat.theoretical_separation) << ")\n";

    const double ridge = std::abs(sat.ridge.fitted_slope);
    const double pcr = std::abs(sat.pcr.fitted_slope);
    Outcome o;
    o.check_passed = sat.separation >= c.check.min_separation && ridge <= c.check.max_ridge_abs_slope &&
                     pcr >= c.check.min_pcr_abs_slope;
    if (flags.check) {
        out << "check separation " << brief(sat.separation) << " >= " << brief(c.check.min_separation)
            << ", |ridge| " << brief(ridge) << " <= " << brief(c.check.max_ridge_abs_slope) << ", |pcr| "
            << brief(pcr) << " >= " << brief(c.check.min_pcr_abs_slope)
            << (o.check_passed ? " PASS" : " FAIL") << '\n';
    }
    return o;
}

Outcome run_effdim(const ExperimentConfig &c, const fs::path &dir, std::ostream &out) {
    auto results = open_csv(dir / "results.csv");
    auto summary = open_csv(dir / "summary.csv");
    results << "p,l,lambda,effective_dimension,lower_bound,upper_bound,within\n";
    summary << "p,l,min_lower_ratio,max_upper_ratio,pass\n";
    Outcome o;
    for (double p : c.decays) {
        const auto mu = mercer_eigenpairs(Kernel::truncated_mercer(p, c.problem.M)).mu;
        const std::span<const double> spectrum(mu.data(), static_cast<std::size_t>(mu.size()));
        const double lo = std::log(10.0 * mu[mu.size() - 1]);
        const double hi = std::log(mu[0]);
        for (double l : c.orders) {
            const auto bounds = effective_dimension_bounds(p, l);
            double min_lower = INFINITY;
            double max_upper = 0.0;
            for (int i = 0; i < c.lambda_count; ++i) {
                const double lam = std::exp(lo + (hi - lo) * i / (c.lambda_count - 1));
                const double nl = effective_dimension(spectrum, lam, l);
                const double scale = std::pow(lam, -p);
                const bool within = bounds.lower * scale <= nl && nl <= bounds.upper * scale;
                min_lower = std::min(min_lower, nl / (bounds.lower * scale));
                max_upper = std::max(max_upper, nl / (bounds.upper * scale));
                results << format_double(p) << ',' << format_double(l) << ',' << format_double(lam) << ','
                        << format_double(nl) << ',' << format_double(bounds.lower * scale) << ','
                        << format_double(bounds.upper * scale) << ',' << (within ? 1 : 0) << '\n';
            }
            const bool pass = min_lower >= 1.0 && max_upper <= 1.0;
            o.check_passed = o.check_passed && pass;
            summary << format_double(p) << ',' << format_double(l) << ',' << format_double(min_lower) << ','
                    << format_double(max_upper) << ',' << (pass ? 1 : 0) << '\n';
            out << "p=" << p << " l=" << l << "  N_l / lower >= " << brief(min_lower) << "  N_l / upper <= "
                << brief(max_upper) << (pass ? "  ok" : "  VIOLATED") << '\n';
        }
    }
    return o;
}

std::vector<double> default_rho_primes(FilterKind kind) {
    switch (kind) {
        case FilterKind::Tikhonov: return {1.0};
        case FilterKind::Landweber: return {0.5, 1.0, 2.0, 3.0};
        case FilterKind::Truncation: return {1.0, 2.0, 4.0};
    }
    return {1.0};
}

bool report_axioms(const FilterSpec &filter, const AxiomReport &rep, std::ostream *csv, std::ostream &out) {
    if (csv) {
        *csv << filter.name() << ",axiom1,," << format_double(rep.max_lhs_axiom1) << ',' << format_double(filter.E())
             << ',' << (rep.max_lhs_axiom1 <= filter.E() + kAxiomSlack ? 1 : 0) << '\n';
        for (const auto &q : rep.axiom2) {
            *csv << filter.name() << ",axiom2," << format_double(q.rho_prime) << ',' << format_double(q.max_lhs) << ','
                 << format_double(q.bound) << ',' << (q.max_lhs <= q.bound + kAxiomSlack ? 1 : 0) << '\n';
        }
    }
    out << filter.name() << ": axiom1 sup " << brief(rep.max_lhs_axiom1) << " <= E=" << filter.E();
    for (const auto &q : rep.axiom2) {
        out << "; axiom2(rho'=" << q.rho_prime << ") sup " << brief(q.max_lhs) << " <= " << q.bound;
    }
    out << (rep.pass ? "  PASS" : "  FAIL") << '\n';
    return rep.pass;
}

Outcome run_filter_check(const ExperimentConfig &c, const fs::path &dir, std::ostream &out) {
    auto results = open_csv(dir / "results.csv");
    auto summary = open_csv(dir / "summary.csv");
    results << "filter,axiom,rho_prime,max_lhs,bound,pass\n";
    summary << "filter,pass\n";
    Outcome o;
    for (const auto &fc : c.filters) {
        const FilterSpec filter = fc.resolve(c.kappa2);
        auto rhos = c.rho_primes.empty() ? default_rho_primes(filter.kind()) : c.rho_primes;
        std::erase_if(rhos, [&](double r) { return r > filter.qualification(); });
        const auto rep = verify_filter_axioms(filter, c.lambda_grid, c.kappa2, rhos);
        const bool pass = report_axioms(filter, rep, &results, out);
        summary << filter.name() << ',' << (pass ? 1 : 0) << '\n';
        o.check_passed = o.check_passed && pass;
    }
    return o;
}

Outcome run_cme(const ExperimentConfig &c, const fs::path &dir, std::ostream &out) {
    auto results = open_csv(dir / "results.csv");
    auto summary = open_csv(dir / "summary.csv");
    results << "filter,n,lambda,probe_x,truth,estimate,abs_error\n";
    summary << "filter,n,lambda,max_abs_error\n";
    const Index master = c.n_grid.back();
    Outcome o;
    for (const auto &fc : c.filters) {
        const FilterSpec filter = fc.resolve(1.0);
        double previous = INFINITY;
        bool decreasing = true;
        double last = INFINITY;
        for (Index n : c.n_grid) {
            const auto demo = cme_demo(n, filter, c.lambda_grid, c.seed, c.cme, master);
            for (const auto &p : demo.probes) {
                results << demo.filter << ',' << n << ',' << format_double(demo.lambda) << ',' << format_double(p.x) << ','
                        << format_double(p.truth) << ',' << format_double(p.estimate) << ','
                        << format_double(p.abs_error) << '\n';
            }
            summary << demo.filter << ',' << n << ',' << format_double(demo.lambda) << ','
                    << format_double(demo.max_abs_error) << '\n';
            out << demo.filter << " n=" << n << " lambda=" << brief(demo.lambda)
                << " max|error|=" << brief(demo.max_abs_error) << '\n';
            decreasing = decreasing && demo.max_abs_error < previous;
            previous = demo.max_abs_error;
            last = demo.max_abs_error;
        }
        const bool ok = last <= c.check.max_abs_error && (!c.check.require_decreasing || decreasing);
        o.check_passed = o.check_passed && ok;
    }
    return o;
}

Outcome run_bias_variance(const ExperimentConfig &c, const fs::path &dir, const RunFlags &flags, std::ostream &out) {
    const MercerProblem problem = c.problem.make();
    auto results = open_csv(dir / "results.csv");
    auto summary = open_csv(dir / "summary.csv");
    results << "filter,n,lambda,bias_sq,variance,total,relative_gap\n";
    summary << "filter,relative_gap,pass\n";
    Outcome o;
    for (const auto &filter : resolve_filters(c, problem.kernel().kappa2())) {
        const double lambda = c.lambda ? *c.lambda
                                       : pilot_oracle_lambda(problem, filter, c.schedule.grid, c.n, c.trials, c.seed,
                                                             {flags.threads});
        const auto bv = bias_variance_diagnostic(problem, filter, lambda, c.n, c.trials, c.seed, {flags.threads});
        const bool ok = bv.relative_gap() <= c.check.max_relative_gap;
        results << filter.name() << ',' << c.n << ',' << format_double(lambda) << ',' << format_double(bv.bias_sq) << ','
                << format_double(bv.variance) << ',' << format_double(bv.total) << ','
                << format_double(bv.relative_gap()) << '\n';
        summary << filter.name() << ',' << format_double(bv.relative_gap()) << ',' << (ok ? 1 : 0) << '\n';
        out << filter.name() << " n=" << c.n << " lambda=" << brief(lambda) << " bias^2="
            << brief(bv.bias_sq) << " variance=" << brief(bv.variance)
            << " total=" << brief(bv.total) << " gap=" << brief(bv.relative_gap()) << '\n';
        o.check_passed = o.check_passed && ok;
    }
    return o;
}

}  // namespace

int run(const fs::path &config_path, const RunFlags &flags, std::ostream &out, std::ostream &err) {
    ExperimentConfig config;
    try {
        config = load_config(config_path);
    } catch (const Error &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return run(std::move(config), flags, out, err);
}

int run(ExperimentConfig config, const RunFlags &flags, std::ostream &out, std::ostream &err) {
    try {
        if (flags.output_dir) config.output_dir = *flags.output_dir;
        const fs::path dir(config.output_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
        {
            const fs::path echo = dir / "config_echo.json";
            std::ofstream os(echo, std::ios::binary | std::ios::trunc);
            if (!os) throw Error(ErrorCode::IoError, "cannot write '" + echo.string() + "'");
            os << to_json(config).dump(2) << '\n';
        }
        Outcome o;
        switch (config.command) {
            case Command::Rates: o = run_rates(config, dir, flags, out); break;
            case Command::Saturation: o = run_saturation(config, dir, flags, out); break;
            case Command::Effdim: o = run_effdim(config, dir, out); break;
            case Command::FilterCheck: o = run_filter_check(config, dir, out); break;
            case Command::CmeDemo: o = run_cme(config, dir, out); break;
            case Command::BiasVariance: o = run_bias_variance(config, dir, flags, out); break;
        }
        if (flags.check && !o.check_passed) {
            err << "acceptance check failed\n";
            return kExitCheck;
        }
        return kExitOk;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitNumerical;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

int filter_check(const std::string &filter, double kappa2, std::ostream &out, std::ostream &err) {
    try {
        nlohmann::json doc = {{"command", "filter-check"}, {"filters", {filter}}, {"kappa2", kappa2}};
        const ExperimentConfig c = parse_config(doc);
        const FilterSpec spec = c.filters.front().resolve(kappa2);
        auto rhos = default_rho_primes(spec.kind());
        const auto rep = verify_filter_axioms(spec, c.lambda_grid, kappa2, rhos);
        return report_axioms(spec, rep, nullptr, out) ? kExitOk : kExitCheck;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitNumerical;
    }
}

}  // namespace specreg::cli
