#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference in
// simd::scalar and, on x86-64, an AVX2 variant in simd::avx2. The public
// entry points dispatch on the CPU at runtime; SPECREG_SIMD=scalar in the
// environment forces the reference path.
//
// Elementwise kernels perform the same IEEE operations in the same order in
// both variants and therefore agree bit for bit. Reductions differ only in
// summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace specreg::simd {

enum class Level { Scalar, Avx2 };

std::string_view to_string(Level level) noexcept;
/// Best level this binary and CPU both support.
Level detected_level() noexcept;
/// Level used by the dispatched entry points.
Level active_level() noexcept;
/// Throws BadParams if `level` is not supported here.
void set_active_level(Level level);

/// out(l, i) = sqrt(2) cos((i+1) pi xs[l]), column-major with leading
/// dimension xs.size(), for i < order. Three-term Chebyshev recurrence.
void cosine_basis(std::span<const double> xs, std::size_t order, double *out);
/// out[i] = 1 / (x[i] + lambda)
void tikhonov_spectrum(std::span<const double> x, double lambda, std::span<double> out);
/// out[i] = x[i] >= lambda ? 1 / x[i] : 0
void truncation_spectrum(std::span<const double> x, double lambda, std::span<double> out);
/// sum_i w[i] (a[i] - b[i])^2
double weighted_sq_diff(std::span<const double> a, std::span<const double> b, std::span<const double> w);

namespace scalar {
void cosine_basis(std::span<const double> xs, std::size_t order, double *out);
void tikhonov_spectrum(std::span<const double> x, double lambda, std::span<double> out);
void truncation_spectrum(std::span<const double> x, double lambda, std::span<double> out);
double weighted_sq_diff(std::span<const double> a, std::span<const double> b, std::span<const double> w);
}  // namespace scalar

namespace avx2 {
/// False when the build target has no AVX2 translation unit.
bool compiled() noexcept;
void cosine_basis(std::span<const double> xs, std::size_t order, double *out);
void tikhonov_spectrum(std::span<const double> x, double lambda, std::span<double> out);
void truncation_spectrum(std::span<const double> x, double lambda, std::span<double> out);
double weighted_sq_diff(std::span<const double> a, std::span<const double> b, std::span<const double> w);
}  // namespace avx2

}  // namespace specreg::simd
