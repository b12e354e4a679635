#include <algorithm>
#include <cmath>
#include <limits>

#include "specreg/error.hpp"
#include "specreg/simd.hpp"
#include "specreg/spectral.hpp"

namespace specreg {

FilterSpec FilterSpec::landweber(double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw Error(ErrorCode::BadParams, "Landweber step must be positive");
    return FilterSpec(FilterKind::Landweber, step);
}

std::string FilterSpec::name() const {
    switch (kind_) {
        case FilterKind::Tikhonov: return "tikhonov";
        case FilterKind::Landweber: return "landweber";
        case FilterKind::Truncation: return "truncation";
    }
    return "unknown";
}

double FilterSpec::qualification() const {
    return kind_ == FilterKind::Tikhonov ? 1.0 : std::numeric_limits<double>::infinity();
}

double FilterSpec::omega(double rho_prime) const {
    if (!(rho_prime > 0.0) || rho_prime > qualification()) {
        throw Error(ErrorCode::BadParams, "rho' must lie in (0, qualification]");
    }
    if (kind_ == FilterKind::Landweber && rho_prime > 1.0) return std::pow(rho_prime, rho_prime);
    return 1.0;
}

std::int64_t FilterSpec::landweber_iterations(double lambda) {
    const double k = std::ceil(1.0 / lambda - 1e-9);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(k));
}

double FilterSpec::value(double lambda, double x) const {
    switch (kind_) {
        case FilterKind::Tikhonov: return 1.0 / (x + lambda);
        case FilterKind::Truncation: return x >= lambda ? 1.0 / x : 0.0;
        case FilterKind::Landweber: {
            const auto k = static_cast<double>(landweber_iterations(lambda));
            if (x == 0.0) return step_ * k;
            const double t = step_ * x;
            // tau sum_{i<k} (1 - t)^i = (1 - (1 - t)^k) / x
            if (t < 1.0) return -std::expm1(k * std::log1p(-t)) / x;
            return (1.0 - std::pow(1.0 - t, k)) / x;
        }
    }
    return 0.0;
}

void FilterSpec::values(double lambda, std::span<const double> x, std::span<double> out) const {
    switch (kind_) {
        case FilterKind::Tikhonov: simd::tikhonov_spectrum(x, lambda, out); return;
        case FilterKind::Truncation: simd::truncation_spectrum(x, lambda, out); return;
        case FilterKind::Landweber:
            for (std::size_t i = 0; i < x.size(); ++i) out[i] = value(lambda, x[i]);
            return;
    }
}

Matrix apply_filter(const FilterSpec &filter, double lambda, const SymEig &eig) {
    Vector g(eig.values.size());
    filter.values(lambda, {eig.values.data(), static_cast<std::size_t>(eig.values.size())},
                  {g.data(), static_cast<std::size_t>(g.size())});
    Matrix out = eig.vectors * g.asDiagonal() * eig.vectors.transpose();
    if (eig.thin()) {
        const double g0 = filter.value(lambda, 0.0);
        if (g0 != 0.0) {
            out += g0 * (Matrix::Identity(eig.dim, eig.dim) - eig.vectors * eig.vectors.transpose());
        }
    }
    return out;
}

AxiomReport verify_filter_axioms(const FilterSpec &filter, std::span<const double> lambda_grid, double kappa2,
                                 std::span<const double> rho_primes, int alpha_grid_resolution) {
    if (alpha_grid_resolution < kMinAlphaGridResolution) {
        throw Error(ErrorCode::GridTooCoarse, "alpha grid resolution " + std::to_string(alpha_grid_resolution) +
                                                  " below minimum " + std::to_string(kMinAlphaGridResolution));
    }
    if (!(kappa2 > 0.0)) throw Error(ErrorCode::BadParams, "kappa2 must be positive");
    if (lambda_grid.empty()) throw Error(ErrorCode::GridTooCoarse, "empty lambda grid");
    for (double lam : lambda_grid) {
        if (!(lam > 0.0) || lam > kappa2) throw Error(ErrorCode::BadParams, "lambda grid must lie in (0, kappa2]");
    }
    if (filter.kind() == FilterKind::Landweber && filter.step() * kappa2 > 1.0 + 1e-12) {
        throw Error(ErrorCode::StepTooLarge, "Landweber step * kappa2 exceeds 1");
    }

    std::vector<double> xs{0.0};
    const double log_lo = std::log(kappa2 * kAxiomXGridFloor);
    const double log_hi = std::log(kappa2);
    for (int i = 0; i < kAxiomXGridPoints; ++i) {
        xs.push_back(i + 1 == kAxiomXGridPoints
                         ? kappa2
                         : std::exp(log_lo + (log_hi - log_lo) * i / (kAxiomXGridPoints - 1)));
    }
    auto alpha_grid = [&](double top) {
        std::vector<double> a(static_cast<std::size_t>(alpha_grid_resolution));
        for (int i = 0; i < alpha_grid_resolution; ++i) a[i] = top * i / (alpha_grid_resolution - 1);
        return a;
    };

    AxiomReport report;
    report.pass = true;

    const auto alpha1 = alpha_grid(1.0);
    for (double lam : lambda_grid) {
        for (double x : xs) {
            const double g = filter.value(lam, x);
            for (double a : alpha1) {
                const double lhs = std::pow(lam, 1.0 - a) * std::pow(x, a) * g;
                report.max_lhs_axiom1 = std::max(report.max_lhs_axiom1, lhs);
            }
        }
    }
    if (report.max_lhs_axiom1 > filter.E() + kAxiomSlack) report.pass = false;

    for (double rho : rho_primes) {
        AxiomReport::Qualification q{rho, 0.0, filter.omega(rho)};
        const auto alphas = alpha_grid(rho);
        for (double lam : lambda_grid) {
            for (double x : xs) {
                const double r = std::abs(filter.residual(lam, x));
                for (double a : alphas) q.max_lhs = std::max(q.max_lhs, r * std::pow(x / lam, a));
            }
        }
        if (q.max_lhs > q.bound + kAxiomSlack) report.pass = false;
        report.axiom2.push_back(q);
    }
    return report;
}

}  // namespace specreg
