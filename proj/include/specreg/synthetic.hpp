#pragma once

// Synthetic regression problems on [0, 1] with a TruncatedMercer kernel:
// prescribed eigenvalue decay p, source smoothness beta and norm bound B.
// Errors are computed exactly in the cosine coefficient basis.

#include <cstdint>
#include <memory>
#include <string>

#include "specreg/estimators.hpp"
#include "specreg/rng.hpp"

namespace specreg {

enum class NoiseKind { BoundedUniform, Gaussian };

/// Additive output noise, independent across coordinates and samples.
struct NoiseLaw {
    NoiseKind kind = NoiseKind::BoundedUniform;
    /// Half-width for BoundedUniform, standard deviation for Gaussian.
    double param = 0.0;

    static NoiseLaw bounded_uniform(double halfwidth) { return {NoiseKind::BoundedUniform, halfwidth}; }
    static NoiseLaw gaussian(double sigma) { return {NoiseKind::Gaussian, sigma}; }

    [[nodiscard]] double draw(RngStream &rng) const;
    [[nodiscard]] std::string kind_name() const;
    [[nodiscard]] double variance() const;
};

struct MercerProblem {
    double p = 0.5;
    double beta = 1.0;
    double B = 1.0;
    int M = kDefaultMercerOrder;
    int D = 1;
    Matrix a;  // M x D coefficients of F* in the e_i (x) d_j basis
    NoiseLaw noise;
    std::uint64_t seed = 0;

    [[nodiscard]] Kernel kernel() const { return Kernel::truncated_mercer(p, M); }
    [[nodiscard]] Vector mu() const { return mercer_eigenpairs(kernel()).mu; }
    /// F*(x) for each entry of xs, as rows of an n x D matrix.
    [[nodiscard]] Matrix target(const Eigen::Ref<const Vector> &xs) const;
};

/// a_ij = c mu_i^{beta/2} i^{-1/2} u_ij, with u_i a seeded unit D-vector (first
/// nonzero entry positive) and c chosen so that sum a_ij^2 / mu_i^beta = B^2.
MercerProblem make_problem(double p, double beta, double B, int M, int D, NoiseLaw noise, std::uint64_t seed);

/// n i.i.d. draws: x ~ uniform[0, 1], y = F*(x) + noise.
Dataset sample(const MercerProblem &problem, Index n, RngStream &rng);

/// sqrt(sum a_ij^2 / mu_i^gamma)
double interp_norm(const MercerProblem &problem, double gamma);

/// Coefficients (M x D) of an estimator trained with the problem's kernel:
/// c_ij = mu_i [E^T W Y]_ij with E_li = e_i(x_l).
Matrix estimator_coefficients(const MercerProblem &problem, const FittedEstimator &estimator);

/// sum_ij w_i (c_ij - d_ij)^2 with w_i = mu_i^{-gamma}.
double weighted_coefficient_distance(const Matrix &c, const Matrix &d, const Vector &mu, double gamma);

/// |[F] - F*|_gamma^2 for 0 <= gamma < 1, exact in the eigenbasis. Throws
/// KernelMismatch if the estimator uses a different kernel than the problem.
double exact_error(const MercerProblem &problem, const FittedEstimator &estimator, double gamma);

/// Estimator coefficients for many (filter, lambda) pairs on one
/// decomposition, at O(M r D) each after an O(M n r) setup.
class CoefficientProjector {
public:
    CoefficientProjector(const MercerProblem &problem, std::shared_ptr<const GramSpectrum> spectrum, const Matrix &ys);

    [[nodiscard]] Matrix coefficients(const SpectralWeights &weights) const;
    [[nodiscard]] Matrix coefficients(const FilterSpec &filter, double lambda) const;
    [[nodiscard]] double error(const FilterSpec &filter, double lambda, double gamma) const;

private:
    Matrix truth_;
    std::shared_ptr<const GramSpectrum> spectrum_;
    Vector mu_;
    Matrix projected_;  // diag(mu) E^T V          (M x r)
    Matrix outputs_;    // V^T Y                    (r x D)
    Matrix null_part_;  // diag(mu) E^T (Y - V V^T Y)  (M x D)
};

}  // namespace specreg
