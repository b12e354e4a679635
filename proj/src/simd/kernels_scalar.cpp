#include <cmath>
#include <numbers>

#include "specreg/simd.hpp"

namespace specreg::simd::scalar {

void cosine_basis(std::span<const double> xs, std::size_t order, double *out) {
    const std::size_t n = xs.size();
    const double sqrt2 = std::numbers::sqrt2;
    for (std::size_t l = 0; l < n; ++l) {
        const double c1 = std::cos(std::numbers::pi * xs[l]);
        const double two_c1 = 2.0 * c1;
        double prev = 1.0;
        double cur = c1;
        for (std::size_t i = 0; i < order; ++i) {
            out[i * n + l] = sqrt2 * cur;
            const double next = two_c1 * cur - prev;
            prev = cur;
            cur = next;
        }
    }
}

void tikhonov_spectrum(std::span<const double> x, double lambda, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = 1.0 / (x[i] + lambda);
}

void truncation_spectrum(std::span<const double> x, double lambda, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] >= lambda ? 1.0 / x[i] : 0.0;
}

double weighted_sq_diff(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += w[i] * (d * d);
    }
    return acc;
}

}  // namespace specreg::simd::scalar
