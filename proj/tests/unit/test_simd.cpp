#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "specreg/rng.hpp"
#include "specreg/simd.hpp"

using namespace specreg;

namespace {

std::vector<double> draws(std::size_t n, std::uint64_t id, double lo, double hi) {
    RngStream rng(7, id);
    std::vector<double> v(n);
    for (auto &x : v) x = rng.uniform(lo, hi);
    return v;
}

bool bitwise_equal(const std::vector<double> &a, const std::vector<double> &b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar cosine basis matches std::cos") {
    const auto xs = draws(37, 1, 0.0, 1.0);
    const std::size_t order = 64;
    std::vector<double> out(xs.size() * order);
    simd::scalar::cosine_basis(xs, order, out.data());
    double worst = 0.0;
    for (std::size_t i = 0; i < order; ++i)
        for (std::size_t l = 0; l < xs.size(); ++l) {
            const double ref = std::sqrt(2.0) * std::cos(static_cast<double>(i + 1) * std::numbers::pi * xs[l]);
            worst = std::max(worst, std::abs(out[i * xs.size() + l] - ref));
        }
    CHECK(worst < 1e-11);
}

TEST_CASE("avx2 kernels reproduce the scalar reference") {
    if (!simd::avx2::compiled() || simd::detected_level() != simd::Level::Avx2) {
        MESSAGE("AVX2 unavailable; equivalence not exercised");
        return;
    }
    for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 128u, 1001u}) {
        CAPTURE(n);
        const auto xs = draws(n, 10 + n, 0.0, 1.0);
        const std::size_t order = 19;
        std::vector<double> a(n * order), b(n * order);
        simd::scalar::cosine_basis(xs, order, a.data());
        simd::avx2::cosine_basis(xs, order, b.data());
        CHECK(bitwise_equal(a, b));

        auto spec = draws(n, 20 + n, 0.0, 2.0);
        spec[0] = 0.25;
        std::vector<double> sa(n), sb(n);
        simd::scalar::tikhonov_spectrum(spec, 0.01, sa);
        simd::avx2::tikhonov_spectrum(spec, 0.01, sb);
        CHECK(bitwise_equal(sa, sb));
        simd::scalar::truncation_spectrum(spec, 0.25, sa);
        simd::avx2::truncation_spectrum(spec, 0.25, sb);
        CHECK(bitwise_equal(sa, sb));
        CHECK(sa[0] == 4.0);

        const auto u = draws(n, 30 + n, -1.0, 1.0);
        const auto v = draws(n, 40 + n, -1.0, 1.0);
        const auto w = draws(n, 50 + n, 0.0, 3.0);
        const double ref = simd::scalar::weighted_sq_diff(u, v, w);
        CHECK(simd::avx2::weighted_sq_diff(u, v, w) == doctest::Approx(ref).epsilon(1e-13));
    }
}

TEST_CASE("dispatch honours the requested level") {
    const auto saved = simd::active_level();
    simd::set_active_level(simd::Level::Scalar);
    CHECK(simd::active_level() == simd::Level::Scalar);
    const auto xs = draws(9, 3, 0.0, 1.0);
    std::vector<double> a(9 * 4), b(9 * 4);
    simd::cosine_basis(xs, 4, a.data());
    simd::scalar::cosine_basis(xs, 4, b.data());
    CHECK(bitwise_equal(a, b));
    simd::set_active_level(saved);
    if (!simd::avx2::compiled()) CHECK_THROWS(simd::set_active_level(simd::Level::Avx2));
}

TEST_CASE("rng streams are reproducible and distinct") {
    RngStream a(42, stream_id(1, 2, 3));
    RngStream b(42, stream_id(1, 2, 3));
    RngStream c(42, stream_id(1, 3, 2));
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        differs = differs || x != c.uniform();
    }
    CHECK(differs);

    RngStream g(1, 0);
    double sum = 0.0, sq = 0.0;
    const int m = 20000;
    for (int i = 0; i < m; ++i) {
        const double z = g.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / m) < 4.0 / std::sqrt(m));
    CHECK(sq / m == doctest::Approx(1.0).epsilon(0.05));
}
