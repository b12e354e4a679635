#include <doctest.h>

#include <cmath>
#include <vector>

#include "specreg/analysis.hpp"
#include "specreg/error.hpp"
#include "support.hpp"

using namespace specreg;

TEST_CASE("effective dimension values and limits") {
    const std::vector<double> mu{1.0, 0.5};
    CHECK(effective_dimension(mu, 0.5, 1.0) == doctest::Approx(7.0 / 6.0).epsilon(1e-15));
    CHECK(effective_dimension(mu, 1e12, 1.0) < 1e-11);
    CHECK(effective_dimension(mu, 1e-14, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)effective_dimension(mu, 0.0, 1.0), Error);
    CHECK_THROWS_AS((void)effective_dimension(mu, 0.1, 0.5), Error);

    const auto b = effective_dimension_bounds(0.5, 1.0);
    CHECK(b.lower == doctest::Approx(0.5));
    CHECK(b.upper == doctest::Approx(2.0));
    const auto b2 = effective_dimension_bounds(0.25, 2.0, 2.0, 3.0);
    CHECK(b2.lower == doctest::Approx(std::pow(2.0 / 3.0, 2.0) * 0.25 / 1.75));
    CHECK(b2.upper == doctest::Approx(1.0 + 9.0 * 0.25 / 1.75));
}

TEST_CASE("effective dimension is monotone") {
    const Vector mu = mercer_eigenpairs(Kernel::truncated_mercer(0.5, 128)).mu;
    const std::span<const double> s(mu.data(), 128);
    Vector bigger = mu * 1.5;
    const std::span<const double> sb(bigger.data(), 128);
    for (double l : {1.0, 1.5, 2.0, 3.0}) {
        double previous = INFINITY;
        for (double lam = 1e-5; lam < 10.0; lam *= 2.0) {
            const double v = effective_dimension(s, lam, l);
            CHECK(v <= previous);
            CHECK(effective_dimension(sb, lam, l) >= v);
            previous = v;
        }
    }
}

TEST_CASE("effective dimension sandwich on a Mercer spectrum") {
    const Vector mu = mercer_eigenpairs(Kernel::truncated_mercer(0.5, 512)).mu;
    const std::span<const double> s(mu.data(), 512);
    const auto b = effective_dimension_bounds(0.5, 1.0);
    for (double lam = 1e-3; lam <= 1e-1 * (1 + 1e-12); lam *= std::pow(10.0, 0.25)) {
        const double v = effective_dimension(s, lam, 1.0);
        CHECK(v >= b.lower / std::sqrt(lam));
        CHECK(v <= b.upper / std::sqrt(lam));
    }
}

TEST_CASE("empirical norm") {
    const std::vector<double> zeros(7, 0.0);
    CHECK(empirical_norm(zeros) == 0.0);
    const std::vector<double> constant(9, -2.5);
    CHECK(empirical_norm(constant) == doctest::Approx(2.5));
    RngStream rng(12, 0);
    std::vector<double> v(33);
    double loop = 0.0;
    for (auto &x : v) {
        x = rng.normal();
        loop += x * x;
    }
    CHECK(empirical_norm(v) == doctest::Approx(std::sqrt(loop / 33.0)).epsilon(1e-14));
}

TEST_CASE("schedules") {
    CHECK(LambdaSchedule::power_law(0.5, 2.0).at(100) == doctest::Approx(0.2));
    const auto lp = LambdaSchedule::log_power(2.0, 1.0);
    CHECK(lp.at(1000) == doctest::Approx(std::pow(1000.0 / std::log(1000.0), -0.5)));
    const auto g = LambdaSchedule::default_oracle_grid(2.5);
    REQUIRE(g.grid.size() == 25);
    CHECK(g.grid.front() == doctest::Approx(2.5e-6));
    CHECK(g.grid.back() == doctest::Approx(2.5));
    CHECK_THROWS_AS((void)g.at(100), Error);
}

TEST_CASE("log-log fit recovers exact power laws") {
    const std::vector<double> n{128, 256, 512, 1024, 2048, 4096};
    std::vector<double> err;
    for (double x : n) err.push_back(3.0 * std::pow(x, -0.7));
    const auto f = fit_loglog(n, err);
    CHECK(std::abs(f.slope + 0.7) < 1e-10);
    CHECK(std::abs(f.intercept - std::log(3.0)) < 1e-9);
    CHECK(f.slope_stderr < 1e-10);
    const std::vector<double> one{5.0};
    CHECK_THROWS_AS(fit_loglog(one, one), Error);
}

TEST_CASE("theoretical exponents") {
    CHECK(theoretical_exponent(FilterSpec::tikhonov(), 1.0, 0.5, 0.0) == doctest::Approx(2.0 / 3.0));
    CHECK(theoretical_exponent(FilterSpec::tikhonov(), 4.0, 0.5, 0.0) == doctest::Approx(0.8));
    CHECK(theoretical_exponent(FilterSpec::truncation(), 4.0, 0.5, 0.0) == doctest::Approx(4.0 / 4.5));
    CHECK(theoretical_exponent(FilterSpec::landweber(1.0), 4.0, 0.5, 0.0) == doctest::Approx(4.0 / 4.5));
    CHECK(theoretical_exponent(FilterSpec::truncation(), 2.0, 0.5, 0.5) == doctest::Approx(0.6));
}

TEST_CASE("rate sweeps") {
    const auto clean = make_problem(0.5, 1.0, 1.0, 64, 1, NoiseLaw::bounded_uniform(0.0), 1);
    const std::vector<Index> grid{4, 8, 16, 32};
    const auto tiny = LambdaSchedule::oracle_grid({1e-8});
    const auto r = rate_sweep(clean, FilterSpec::truncation(), tiny, grid, 2, 0.0, 3);
    for (std::size_t i = 1; i < r.mean_sq_error.size(); ++i) CHECK(r.mean_sq_error[i] <= r.mean_sq_error[i - 1]);

    const auto prob = make_problem(0.5, 1.0, 1.0, 64, 2, NoiseLaw::bounded_uniform(0.5), 2);
    const auto sched = LambdaSchedule::power_law(1.0 / 1.5);
    const auto a = rate_sweep(prob, FilterSpec::tikhonov(), sched, grid, 1, 0.0, 5, {1});
    const auto b = rate_sweep(prob, FilterSpec::tikhonov(), sched, grid, 1, 0.0, 5, {4});
    CHECK(a.fitted_slope == b.fitted_slope);
    CHECK(a.mean_sq_error == b.mean_sq_error);
    REQUIRE(a.trials.size() == 4);
    CHECK(a.trials[2].n == 16);
    CHECK(a.trials[2].lambda == doctest::Approx(std::pow(16.0, -1.0 / 1.5)));
    CHECK(a.theoretical_exponent == doctest::Approx(2.0 / 3.0));

    // filters evaluated jointly see the same draws as filters evaluated alone
    const std::vector<FilterSpec> both{FilterSpec::tikhonov(), FilterSpec::truncation()};
    const auto joint = sweep_filters(prob, both, sched, grid, 1, 0.0, 5);
    CHECK(joint[0].mean_sq_error == a.mean_sq_error);

    const std::vector<Index> short_grid{8, 16, 32};
    CHECK_THROWS_AS(rate_sweep(prob, FilterSpec::tikhonov(), sched, short_grid, 1, 0.0, 5), Error);
    const std::vector<Index> unsorted{8, 32, 16, 64};
    try {
        (void)rate_sweep(prob, FilterSpec::tikhonov(), sched, unsorted, 1, 0.0, 5);
        FAIL("expected InsufficientGrid");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::InsufficientGrid);
    }
}

TEST_CASE("oracle grid picks the best grid value") {
    const auto prob = make_problem(0.5, 1.0, 1.0, 32, 1, NoiseLaw::bounded_uniform(0.5), 7);
    const std::vector<Index> grid{16, 32, 64, 128};
    const std::vector<double> values{1e-4, 1e-2, 1.0};
    const auto r = rate_sweep(prob, FilterSpec::tikhonov(), LambdaSchedule::oracle_grid(values), grid, 1, 0.0, 9);
    for (const auto &t : r.trials) {
        double best = INFINITY;
        for (double l : values) {
            const auto fixed = rate_sweep(prob, FilterSpec::tikhonov(), LambdaSchedule::oracle_grid({l}), grid, 1, 0.0, 9);
            for (const auto &u : fixed.trials)
                if (u.n == t.n) best = std::min(best, u.sq_error);
        }
        CHECK(t.sq_error == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("saturation experiment contract") {
    const std::vector<Index> grid{16, 32, 64, 128};
    CHECK_THROWS_AS(saturation_experiment(0.5, 1.5, 1.0, grid, 1, 1), Error);
    SaturationSetup setup;
    setup.M = 32;
    const auto s = saturation_experiment(0.5, 4.0, 1.0, grid, 2, 1, {}, setup);
    CHECK(s.theoretical_separation == doctest::Approx(4.0 / 4.5 - 0.8));
    CHECK(s.separation == doctest::Approx(std::abs(s.pcr.fitted_slope) - std::abs(s.ridge.fitted_slope)));
    CHECK(s.ridge.filter == "tikhonov");
    CHECK(s.pcr.filter == "truncation");
    const auto edge = saturation_experiment(0.5, 2.0, 1.0, grid, 1, 1, {}, setup);
    CHECK(edge.theoretical_separation == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("bias-variance diagnostic limits") {
    const auto clean = make_problem(0.5, 1.0, 1.0, 64, 2, NoiseLaw::bounded_uniform(0.0), 3);
    const auto z = bias_variance_diagnostic(clean, FilterSpec::tikhonov(), 1e-3, 64, 5, 1);
    CHECK(z.variance <= 1e-12);
    CHECK(z.total == doctest::Approx(z.bias_sq).epsilon(1e-12));

    const auto prob = make_problem(0.5, 1.0, 1.0, 64, 2, NoiseLaw::bounded_uniform(0.5), 3);
    const auto big = bias_variance_diagnostic(prob, FilterSpec::tikhonov(), 100.0 * prob.kernel().kappa2(), 64, 5, 1);
    CHECK(std::abs(big.bias_sq - prob.a.squaredNorm()) / prob.a.squaredNorm() <= 0.05);
    const auto at10 = bias_variance_diagnostic(prob, FilterSpec::tikhonov(), 10.0 * prob.kernel().kappa2(), 64, 5, 1);
    CHECK(at10.bias_sq > 0.0);
    MESSAGE("bias at lambda = 10 kappa^2: " << at10.bias_sq / prob.a.squaredNorm() << " of |F*|^2");
}
