#include <cmath>
#include <numbers>

#include "specreg/simd.hpp"

#if defined(SPECREG_BUILD_AVX2)
#include <immintrin.h>
#endif

namespace specreg::simd::avx2 {

#if defined(SPECREG_BUILD_AVX2)

bool compiled() noexcept { return true; }

void cosine_basis(std::span<const double> xs, std::size_t order, double *out) {
    const std::size_t n = xs.size();
    const __m256d sqrt2 = _mm256_set1_pd(std::numbers::sqrt2);
    std::size_t l = 0;
    for (; l + 4 <= n; l += 4) {
        alignas(32) double c1s[4];
        for (int k = 0; k < 4; ++k) c1s[k] = std::cos(std::numbers::pi * xs[l + k]);
        const __m256d c1 = _mm256_load_pd(c1s);
        const __m256d two_c1 = _mm256_add_pd(c1, c1);
        __m256d prev = _mm256_set1_pd(1.0);
        __m256d cur = c1;
        for (std::size_t i = 0; i < order; ++i) {
            _mm256_storeu_pd(out + i * n + l, _mm256_mul_pd(sqrt2, cur));
            const __m256d next = _mm256_sub_pd(_mm256_mul_pd(two_c1, cur), prev);
            prev = cur;
            cur = next;
        }
    }
    // tail columns: same recurrence one point at a time
    for (; l < n; ++l) {
        const double c1 = std::cos(std::numbers::pi * xs[l]);
        const double two_c1 = 2.0 * c1;
        double prev = 1.0;
        double cur = c1;
        for (std::size_t i = 0; i < order; ++i) {
            out[i * n + l] = std::numbers::sqrt2 * cur;
            const double next = two_c1 * cur - prev;
            prev = cur;
            cur = next;
        }
    }
}

void tikhonov_spectrum(std::span<const double> x, double lambda, std::span<double> out) {
    const std::size_t n = x.size();
    const __m256d lam = _mm256_set1_pd(lambda);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x.data() + i);
        _mm256_storeu_pd(out.data() + i, _mm256_div_pd(one, _mm256_add_pd(v, lam)));
    }
    for (; i < n; ++i) out[i] = 1.0 / (x[i] + lambda);
}

void truncation_spectrum(std::span<const double> x, double lambda, std::span<double> out) {
    const std::size_t n = x.size();
    const __m256d lam = _mm256_set1_pd(lambda);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x.data() + i);
        const __m256d keep = _mm256_cmp_pd(v, lam, _CMP_GE_OQ);
        _mm256_storeu_pd(out.data() + i, _mm256_and_pd(keep, _mm256_div_pd(one, v)));
    }
    for (; i < n; ++i) out[i] = x[i] >= lambda ? 1.0 / x[i] : 0.0;
}

double weighted_sq_diff(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    const std::size_t n = a.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w.data() + i), _mm256_mul_pd(d, d)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += w[i] * (d * d);
    }
    return total;
}

#else

bool compiled() noexcept { return false; }

void cosine_basis(std::span<const double> xs, std::size_t order, double *out) {
    scalar::cosine_basis(xs, order, out);
}
void tikhonov_spectrum(std::span<const double> x, double lambda, std::span<double> out) {
    scalar::tikhonov_spectrum(x, lambda, out);
}
void truncation_spectrum(std::span<const double> x, double lambda, std::span<double> out) {
    scalar::truncation_spectrum(x, lambda, out);
}
double weighted_sq_diff(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    return scalar::weighted_sq_diff(a, b, w);
}

#endif

}  // namespace specreg::simd::avx2
