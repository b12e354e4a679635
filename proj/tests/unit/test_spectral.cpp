#include <doctest.h>

#include <cmath>
#include <vector>

#include "specreg/error.hpp"
#include "specreg/spectral.hpp"
#include "support.hpp"

using namespace specreg;

namespace {

const std::vector<FilterSpec> kFilters{FilterSpec::tikhonov(), FilterSpec::landweber(1.0), FilterSpec::truncation()};

Matrix seeded_psd(Index n, std::uint64_t id) {
    RngStream rng(11, id);
    const Matrix a = test::normal_matrix(rng, n, n);
    return a * a.transpose();
}

}  // namespace

TEST_CASE("sym_eig on small fixed matrices") {
    const auto id = sym_eig(Matrix::Identity(2, 2));
    CHECK(id.values(0) == doctest::Approx(1.0));
    CHECK(id.values(1) == doctest::Approx(1.0));
    CHECK(test::max_abs(id.reconstruct() - Matrix::Identity(2, 2)) < 1e-14);

    Matrix d(2, 2);
    d << 1, 0, 0, 3;
    const auto e = sym_eig(d);
    CHECK(e.values(0) == doctest::Approx(3.0));
    CHECK(e.values(1) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig reconstructs a seeded 5x5 matrix") {
    const Matrix a = seeded_psd(5, 1);
    const auto e = sym_eig(a);
    CHECK((e.reconstruct() - a).norm() / a.norm() < 1e-8);
    for (Index i = 1; i < e.values.size(); ++i) CHECK(e.values(i - 1) >= e.values(i));
    CHECK(test::max_abs(e.vectors.transpose() * e.vectors - Matrix::Identity(5, 5)) < 1e-12);
    for (Index j = 0; j < 5; ++j) {
        Index first = 0;
        while (std::abs(e.vectors(first, j)) <= 1e-12) ++first;
        CHECK(e.vectors(first, j) > 0.0);
    }
    const auto again = sym_eig(a);
    CHECK(again.vectors == e.vectors);
}

TEST_CASE("sym_eig rejects bad input") {
    Matrix a(2, 2);
    a << 1, 0.5, 0.4, 1;
    CHECK_THROWS_AS(sym_eig(a), Error);
    try {
        (void)sym_eig(a);
    } catch (const Error &err) {
        CHECK(err.code() == ErrorCode::NonSymmetric);
    }
    Matrix neg(2, 2);
    neg << 1, 0, 0, -1;
    try {
        (void)sym_eig(neg);
        FAIL("expected NotPsd");
    } catch (const Error &err) {
        CHECK(err.code() == ErrorCode::NotPsd);
    }
    Matrix tiny(2, 2);
    tiny << 1, 0, 0, -1e-13;
    CHECK(sym_eig(tiny).values(1) == 0.0);
    Matrix nan = Matrix::Identity(2, 2);
    nan(0, 0) = std::nan("");
    CHECK_THROWS_AS(sym_eig(nan), Error);
}

TEST_CASE("factored decomposition agrees with the dense one") {
    RngStream rng(5, 0);
    const Matrix s = test::normal_matrix(rng, 30, 6);
    const Matrix a = s * s.transpose();
    const auto thin = sym_eig_factored(s);
    CHECK(thin.thin());
    CHECK(thin.rank_stored() == 6);
    CHECK((thin.reconstruct() - a).norm() / a.norm() < 1e-12);
    const auto dense = sym_eig(a);
    for (Index i = 0; i < 6; ++i) CHECK(thin.values(i) == doctest::Approx(dense.values(i)).epsilon(1e-10));
    for (const auto &f : kFilters) {
        const Matrix x = apply_filter(f, 0.5, thin);
        const Matrix y = apply_filter(f, 0.5, dense);
        CHECK(test::max_abs(x - y) < 1e-8);
    }
}

TEST_CASE("filter values at fixed points") {
    const auto tik = FilterSpec::tikhonov();
    CHECK(tik.value(1.0, 1.0) == 0.5);
    CHECK(tik.residual(1.0, 1.0) == 0.5);

    const auto lw = FilterSpec::landweber(1.0);
    CHECK(FilterSpec::landweber_iterations(0.5) == 2);
    CHECK(FilterSpec::landweber_iterations(0.3) == 4);
    CHECK(FilterSpec::landweber_iterations(0.1) == 10);
    CHECK(lw.value(0.5, 0.5) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(lw.residual(0.5, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(lw.value(0.25, 0.0) == 4.0);

    const auto tr = FilterSpec::truncation();
    CHECK(tr.value(0.5, 1.0) == 1.0);
    CHECK(tr.value(0.5, 0.3) == 0.0);
    CHECK(tr.value(0.5, 0.5) == 2.0);
    CHECK(tr.value(0.5, 0.0) == 0.0);

    CHECK_THROWS_AS(FilterSpec::landweber(0.0), Error);
    CHECK(tik.qualification() == 1.0);
    CHECK(std::isinf(lw.qualification()));
    CHECK(lw.omega(0.5) == 1.0);
    CHECK(lw.omega(2.0) == 4.0);
    CHECK(lw.omega(3.0) == 27.0);
    CHECK(tr.omega(4.0) == 1.0);
    CHECK_THROWS_AS((void)tik.omega(2.0), Error);
}

TEST_CASE("Landweber closed form matches the literal gradient iteration") {
    for (double tau : {1.0, 0.5, 0.3}) {
        for (int k = 1; k <= 64; ++k) {
            const auto lw = FilterSpec::landweber(tau);
            const double lambda = 1.0 / k;
            for (double x : {0.0, 1e-9, 1e-3, 0.2, 0.5, 0.9, 1.0}) {
                if (tau * x > 1.0) continue;
                // f_{t+1} = f_t + tau (1 - x f_t) from f_0 = 0
                double f = 0.0;
                for (int t = 0; t < k; ++t) f += tau * (1.0 - x * f);
                CAPTURE(tau);
                CAPTURE(k);
                CAPTURE(x);
                CHECK(std::abs(lw.value(lambda, x) - f) <= 1e-12 * std::max(1.0, f));
                CHECK(std::abs(lw.residual(lambda, x) - std::pow(1.0 - tau * x, k)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("filter identities over a grid") {
    std::vector<double> xs{0.0};
    for (int i = 0; i <= 200; ++i) xs.push_back(std::pow(10.0, -8.0 + 8.0 * i / 200.0));
    for (const auto &f : kFilters) {
        for (double lambda : {1.0, 0.3, 0.1, 0.01, 1e-4}) {
            std::vector<double> batch(xs.size());
            f.values(lambda, xs, batch);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double x = xs[i];
                CHECK(batch[i] == doctest::Approx(f.value(lambda, x)).epsilon(1e-14));
                CHECK(std::abs(x * f.value(lambda, x) + f.residual(lambda, x) - 1.0) <= 1e-12);
                CHECK(f.value(lambda, x) >= 0.0);
            }
        }
    }
    const auto tik = FilterSpec::tikhonov();
    for (double x : {0.01, 0.5, 1.0}) CHECK(tik.value(0.1, x) > tik.value(0.2, x));
}

TEST_CASE("apply_filter on diagonal and seeded matrices") {
    Matrix d(2, 2);
    d << 1, 0, 0, 0;
    const Matrix t = apply_filter(FilterSpec::tikhonov(), 1.0, sym_eig(d));
    CHECK(t(0, 0) == doctest::Approx(0.5));
    CHECK(t(1, 1) == doctest::Approx(1.0));
    CHECK(std::abs(t(0, 1)) < 1e-15);

    d << 1, 0, 0, 0.25;
    const Matrix tr = apply_filter(FilterSpec::truncation(), 0.5, sym_eig(d));
    CHECK(tr(0, 0) == doctest::Approx(1.0));
    CHECK(std::abs(tr(1, 1)) < 1e-15);

    const Matrix a = seeded_psd(6, 2) / 20.0;
    const auto e = sym_eig(a);
    for (const auto &f : kFilters) {
        Matrix naive = Matrix::Zero(6, 6);
        for (Index i = 0; i < 6; ++i) naive += f.value(0.05, e.values(i)) * e.vectors.col(i) * e.vectors.col(i).transpose();
        const Matrix fast = apply_filter(f, 0.05, e);
        CHECK(test::max_abs(fast - naive) < 1e-10);
        CHECK(test::max_abs(fast - fast.transpose()) < 1e-12);
    }
}

TEST_CASE("filter axioms on the documented grids") {
    const std::vector<double> lambdas{0.01, 0.1, 1.0};
    const std::vector<double> one{1.0};
    auto tik = verify_filter_axioms(FilterSpec::tikhonov(), lambdas, 1.0, one);
    CHECK(tik.pass);
    CHECK(tik.max_lhs_axiom1 <= 1.0 + kAxiomSlack);

    const std::vector<double> three{3.0};
    CHECK(verify_filter_axioms(FilterSpec::truncation(), lambdas, 1.0, three).pass);

    const std::vector<double> two{2.0};
    const auto lw = verify_filter_axioms(FilterSpec::landweber(1.0), lambdas, 1.0, two);
    CHECK(lw.pass);
    REQUIRE(lw.axiom2.size() == 1);
    CHECK(lw.axiom2[0].bound == 4.0);

    CHECK_THROWS_AS(verify_filter_axioms(FilterSpec::tikhonov(), lambdas, 1.0, one, 8), Error);
    CHECK_THROWS_AS(verify_filter_axioms(FilterSpec::landweber(2.0), lambdas, 1.0, one), Error);
    const std::vector<double> too_big{2.0};
    CHECK_THROWS_AS(verify_filter_axioms(FilterSpec::tikhonov(), too_big, 1.0, one), Error);
}

TEST_CASE("Landweber with non-integer 1/lambda exceeds E = 1") {
    // lambda = 0.6 gives k = 2 steps; at x -> 0 the first axiom reads lambda tau k = 1.2
    const std::vector<double> grid{0.6};
    const std::vector<double> one{1.0};
    const auto rep = verify_filter_axioms(FilterSpec::landweber(1.0), grid, 1.0, one);
    CHECK(rep.max_lhs_axiom1 == doctest::Approx(1.2));
    CHECK_FALSE(rep.pass);
}
