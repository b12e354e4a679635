// Runs the nine acceptance checks and prints one PASS/FAIL line for each.
//   acceptance [--only 1,4,9] [--work-dir DIR]
// Exit status is 0 only when every selected check passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "specreg/analysis.hpp"
#include "specreg/cli.hpp"
#include "specreg/cme.hpp"
#include "specreg/estimators.hpp"

using namespace specreg;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240601;
const std::vector<Index> kNGrid{128, 256, 512, 1024, 2048, 4096};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v, int digits = 4) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

fs::path g_work;

Outcome representer_equivalence() {
    RngStream rng(kSeed, stream_id(0xc1));
    double worst = 0.0;
    int fits = 0;
    for (int inst = 0; inst < 100; ++inst) {
        const Index n = 1 + static_cast<Index>(rng.next_u64() % 32);
        const int M = 1 + static_cast<int>(rng.next_u64() % 64);
        const Index D = 1 + static_cast<Index>(rng.next_u64() % 4);
        const auto kernel = Kernel::truncated_mercer(0.5, M);
        Dataset data{Matrix(n, 1), Matrix(n, D)};
        for (Index i = 0; i < n; ++i) data.xs(i, 0) = rng.uniform();
        for (Index j = 0; j < D; ++j)
            for (Index i = 0; i < n; ++i) data.ys(i, j) = rng.normal();
        for (const auto &f : {FilterSpec::tikhonov(), landweber_for(kernel), FilterSpec::truncation()}) {
            for (double lambda : {1.0, 0.1, 0.01}) {
                const auto dual = fit(data, kernel, f, lambda);
                const auto primal = primal_fit(data, kernel, f, lambda);
                for (int q = 0; q < 16; ++q) {
                    const double x = q / 15.0;
                    const Vector diff = dual.predict(Vector::Constant(1, x)) - primal.predict(x);
                    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
                }
                ++fits;
            }
        }
    }
    return {worst <= 1e-8, "max |dual - primal| = " + num(worst) + " over " + std::to_string(fits) + " fits x 16 probes"};
}

Outcome filter_axioms() {
    const std::vector<double> grid{1e-4, 1e-3, 1e-2, 1e-1, 1.0};
    struct Case {
        FilterSpec filter;
        std::vector<double> rho;
        std::vector<double> omega;
    };
    const std::vector<Case> cases{
        {FilterSpec::tikhonov(), {1.0}, {1.0}},
        {FilterSpec::landweber(1.0), {0.5, 1.0, 2.0, 3.0}, {1.0, 1.0, 4.0, 27.0}},
        {FilterSpec::truncation(), {1.0, 2.0, 4.0}, {1.0, 1.0, 1.0}},
    };
    bool pass = true;
    std::string detail;
    for (const auto &c : cases) {
        const auto rep = verify_filter_axioms(c.filter, grid, 1.0, c.rho);
        bool declared = c.filter.E() == 1.0;
        for (std::size_t i = 0; i < c.rho.size(); ++i) declared = declared && rep.axiom2[i].bound == c.omega[i];
        pass = pass && rep.pass && declared;
        detail += c.filter.name() + " E-sup " + num(rep.max_lhs_axiom1, 12);
        for (const auto &q : rep.axiom2) detail += " w" + num(q.rho_prime) + "-sup " + num(q.max_lhs, 6) + "/" + num(q.bound);
        detail += "; ";
    }
    return {pass, detail};
}

Outcome effdim_sandwich() {
    bool pass = true;
    double lo_ratio = INFINITY, hi_ratio = 0.0;
    for (double p : {0.25, 0.5, 0.75}) {
        const Vector mu = mercer_eigenpairs(Kernel::truncated_mercer(p, 512)).mu;
        const std::span<const double> s(mu.data(), 512);
        const double a = std::log(10.0 * mu(511)), b = std::log(mu(0));
        for (double l : {1.0, 2.0}) {
            const auto bounds = effective_dimension_bounds(p, l);
            for (int i = 0; i < 20; ++i) {
                const double lam = std::exp(a + (b - a) * i / 19.0);
                const double v = effective_dimension(s, lam, l) * std::pow(lam, p);
                lo_ratio = std::min(lo_ratio, v / bounds.lower);
                hi_ratio = std::max(hi_ratio, v / bounds.upper);
                pass = pass && bounds.lower <= v && v <= bounds.upper;
            }
        }
    }
    return {pass, "min N/(c1 l^-p) = " + num(lo_ratio) + ", max N/(c2 l^-p) = " + num(hi_ratio)};
}

nlohmann::json rates_config() {
    return {{"command", "rates"},
            {"problem", {{"p", 0.5}, {"beta", 1.0}, {"B", 1.0}, {"D", 2}, {"noise", {{"kind", "bounded_uniform"}, {"param", 0.5}}}}},
            {"filters", {"tikhonov", "truncation", "landweber"}},
            {"schedule", {{"kind", "power_law"}, {"exponent", 1.0 / 1.5}}},
            {"n_grid", kNGrid},
            {"trials", 20},
            {"seed", kSeed}};
}

int run_rates_config(const fs::path &dir, unsigned threads) {
    cli::RunFlags flags;
    flags.output_dir = dir.string();
    flags.threads = threads;
    std::ostringstream out, err;
    const int code = cli::run(cli::parse_config(rates_config()), flags, out, err);
    if (code != cli::kExitOk) std::cerr << err.str();
    return code;
}

Outcome well_specified_rate() {
    const fs::path dir = g_work / "rates_threads1";
    if (run_rates_config(dir, 1) != cli::kExitOk) return {false, "run failed"};
    std::ifstream in(dir / "summary.csv");
    std::string line;
    std::getline(in, line);
    bool pass = true;
    int rows = 0;
    std::string detail;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string filter, gamma, slope;
        std::getline(ss, filter, ',');
        std::getline(ss, gamma, ',');
        std::getline(ss, slope, ',');
        const double s = std::stod(slope);
        pass = pass && std::abs(s + 2.0 / 3.0) <= 0.15;
        detail += filter + " " + num(s) + "  ";
        ++rows;
    }
    return {pass && rows == 3, "slopes vs -0.6667 +/- 0.15: " + detail};
}

Outcome saturation() {
    const auto s = saturation_experiment(0.5, 4.0, 1.0, kNGrid, 50, kSeed);
    const double ridge = std::abs(s.ridge.fitted_slope), pcr = std::abs(s.pcr.fitted_slope);
    const bool pass = s.separation >= 0.03 && ridge <= 0.86 && pcr >= 0.82;
    return {pass, "|ridge| " + num(ridge) + " (<= 0.86), |pcr| " + num(pcr) + " (>= 0.82), separation " +
                      num(s.separation) + " (>= 0.03), landweber " + num(std::abs(s.landweber.fitted_slope))};
}

Outcome gamma_norm_rate() {
    const auto prob = make_problem(0.5, 2.0, 1.0, kDefaultMercerOrder, 1, NoiseLaw::bounded_uniform(0.5), kSeed);
    const auto r = rate_sweep(prob, FilterSpec::truncation(), LambdaSchedule::power_law(1.0 / 2.5), kNGrid, 20, 0.5, kSeed);
    return {std::abs(r.fitted_slope + 0.6) <= 0.15, "truncation gamma=0.5 slope " + num(r.fitted_slope) + " vs -0.6 +/- 0.15"};
}

Outcome bias_variance() {
    const auto prob = make_problem(0.5, 1.0, 1.0, kDefaultMercerOrder, 2, NoiseLaw::bounded_uniform(0.5), kSeed);
    const auto grid = LambdaSchedule::default_oracle_grid(prob.kernel().kappa2()).grid;
    const double lambda = pilot_oracle_lambda(prob, FilterSpec::tikhonov(), grid, 512, 20, kSeed);
    const auto bv = bias_variance_diagnostic(prob, FilterSpec::tikhonov(), lambda, 512, 50, kSeed);
    return {bv.relative_gap() <= 0.1, "lambda " + num(lambda) + ", bias^2 " + num(bv.bias_sq) + ", variance " +
                                          num(bv.variance) + ", total " + num(bv.total) + ", gap " + num(bv.relative_gap())};
}

Outcome cme_recovery() {
    std::vector<double> grid;
    for (int i = 0; i < 25; ++i) grid.push_back(std::pow(10.0, -6.0 + 6.0 * i / 24.0));
    double previous = INFINITY;
    bool decreasing = true;
    std::string detail;
    double last = 0.0;
    for (Index n : {250, 500, 1000, 2000}) {
        const auto r = cme_demo(n, FilterSpec::tikhonov(), grid, kSeed, {}, 2000);
        decreasing = decreasing && r.max_abs_error < previous;
        previous = last = r.max_abs_error;
        detail += "n=" + std::to_string(n) + ": " + num(r.max_abs_error) + "  ";
    }
    return {decreasing && last <= 0.05, "max probe error " + detail};
}

Outcome determinism() {
    const fs::path a = g_work / "rates_threads1";
    const fs::path b = g_work / "rates_threads8";
    if (!fs::exists(a / "results.csv") && run_rates_config(a, 1) != cli::kExitOk) return {false, "threads=1 run failed"};
    if (run_rates_config(b, 8) != cli::kExitOk) return {false, "threads=8 run failed"};
    auto slurp = [](const fs::path &p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const auto x = slurp(a / "results.csv");
    const auto y = slurp(b / "results.csv");
    return {!x.empty() && x == y, "results.csv " + std::to_string(x.size()) + " bytes, threads 1 vs 8 " +
                                      (x == y ? "identical" : "DIFFER")};
}

struct Criterion {
    int id;
    const char *name;
    double budget_seconds;  // 0 = no runtime bound
    std::function<Outcome()> body;
};

}  // namespace

int main(int argc, char **argv) {
    std::set<int> only;
    g_work = fs::temp_directory_path() / "specreg_acceptance";
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string tok;
            while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
        } else if (arg == "--work-dir" && i + 1 < argc) {
            g_work = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--only 1,2,...] [--work-dir DIR]\n";
            return 2;
        }
    }
    fs::remove_all(g_work);
    fs::create_directories(g_work);

    const std::vector<Criterion> criteria{
        {1, "dual/primal representer equivalence", 30.0, representer_equivalence},
        {2, "filter axioms", 5.0, filter_axioms},
        {3, "effective-dimension sandwich", 1.0, effdim_sandwich},
        {4, "well-specified rate", 900.0, well_specified_rate},
        {5, "saturation separation", 2700.0, saturation},
        {6, "gamma-norm rate", 0.0, gamma_norm_rate},
        {7, "bias-variance decomposition", 0.0, bias_variance},
        {8, "CME recovery", 120.0, cme_recovery},
        {9, "determinism across thread counts", 0.0, determinism},
    };

    int failed = 0;
    for (const auto &c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = c.budget_seconds == 0.0 || secs <= c.budget_seconds;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::printf("criterion %d %-38s %s  [%.1f s%s]  %s\n", c.id, c.name, pass ? "PASS" : "FAIL", secs,
                    in_time ? "" : " OVER BUDGET", o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
