#include <atomic>
#include <cstdlib>
#include <string>

#include "specreg/error.hpp"
#include "specreg/simd.hpp"

namespace specreg::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(SPECREG_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return avx2::compiled() && __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Level initial_level() noexcept {
    if (const char *env = std::getenv("SPECREG_SIMD"); env != nullptr && std::string(env) == "scalar") {
        return Level::Scalar;
    }
    return detected_level();
}

std::atomic<Level> &active() {
    static std::atomic<Level> level{initial_level()};
    return level;
}

}  // namespace

std::string_view to_string(Level level) noexcept {
    switch (level) {
        case Level::Scalar: return "scalar";
        case Level::Avx2: return "avx2";
    }
    return "unknown";
}

Level detected_level() noexcept { return cpu_has_avx2() ? Level::Avx2 : Level::Scalar; }

Level active_level() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_level(Level level) {
    if (level == Level::Avx2 && !cpu_has_avx2()) {
        throw Error(ErrorCode::BadParams, "AVX2 kernels are not available on this machine");
    }
    active().store(level, std::memory_order_relaxed);
}

void cosine_basis(std::span<const double> xs, std::size_t order, double *out) {
    if (active_level() == Level::Avx2) return avx2::cosine_basis(xs, order, out);
    scalar::cosine_basis(xs, order, out);
}

void tikhonov_spectrum(std::span<const double> x, double lambda, std::span<double> out) {
    if (active_level() == Level::Avx2) return avx2::tikhonov_spectrum(x, lambda, out);
    scalar::tikhonov_spectrum(x, lambda, out);
}

void truncation_spectrum(std::span<const double> x, double lambda, std::span<double> out) {
    if (active_level() == Level::Avx2) return avx2::truncation_spectrum(x, lambda, out);
    scalar::truncation_spectrum(x, lambda, out);
}

double weighted_sq_diff(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    if (active_level() == Level::Avx2) return avx2::weighted_sq_diff(a, b, w);
    return scalar::weighted_sq_diff(a, b, w);
}

}  // namespace specreg::simd
