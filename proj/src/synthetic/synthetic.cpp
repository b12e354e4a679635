#include <cmath>

#include "specreg/error.hpp"
#include "specreg/simd.hpp"
#include "specreg/synthetic.hpp"

namespace specreg {

namespace {

constexpr std::uint64_t kCoefficientStream = 0x636f656666ULL;

void check_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorCode::BadParams, "gamma must lie in [0, 1)");
}

}  // namespace

double NoiseLaw::draw(RngStream &rng) const {
    if (param == 0.0) return 0.0;
    return kind == NoiseKind::BoundedUniform ? rng.uniform(-param, param) : param * rng.normal();
}

std::string NoiseLaw::kind_name() const {
    return kind == NoiseKind::BoundedUniform ? "bounded_uniform" : "gaussian";
}

double NoiseLaw::variance() const {
    return kind == NoiseKind::BoundedUniform ? param * param / 3.0 : param * param;
}

Matrix MercerProblem::target(const Eigen::Ref<const Vector> &xs) const {
    return mercer_eigenpairs(kernel()).basis_matrix(xs) * a;
}

MercerProblem make_problem(double p, double beta, double B, int M, int D, NoiseLaw noise, std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::BadParams, "p must lie in (0, 1)");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::BadParams, "beta must be positive");
    if (!(B > 0.0) || !std::isfinite(B)) throw Error(ErrorCode::BadParams, "B must be positive");
    if (M < 1) throw Error(ErrorCode::BadParams, "M must be >= 1");
    if (D < 1) throw Error(ErrorCode::BadParams, "D must be >= 1");
    if (!(noise.param >= 0.0) || !std::isfinite(noise.param)) throw Error(ErrorCode::BadParams, "noise parameter must be >= 0");

    MercerProblem prob;
    prob.p = p;
    prob.beta = beta;
    prob.B = B;
    prob.M = M;
    prob.D = D;
    prob.noise = noise;
    prob.seed = seed;

    const Vector mu = prob.mu();
    RngStream rng(seed, stream_id(kCoefficientStream));
    prob.a.resize(M, D);
    for (int i = 0; i < M; ++i) {
        Vector u(D);
        do {
            for (int j = 0; j < D; ++j) u[j] = rng.normal();
        } while (u.norm() == 0.0);
        u.normalize();
        for (int j = 0; j < D; ++j) {
            if (u[j] != 0.0) {
                if (u[j] < 0.0) u = -u;
                break;
            }
        }
        const double shape = std::pow(mu[i], beta / 2.0) / std::sqrt(static_cast<double>(i + 1));
        prob.a.row(i) = shape * u.transpose();
    }
    // each row contributes shape^2 / mu^beta = 1/i, so the sum is a harmonic number
    double src = 0.0;
    for (int i = M - 1; i >= 0; --i) src += prob.a.row(i).squaredNorm() / std::pow(mu[i], beta);
    prob.a *= B / std::sqrt(src);
    return prob;
}

Dataset sample(const MercerProblem &problem, Index n, RngStream &rng) {
    if (n < 1) throw Error(ErrorCode::BadParams, "sample size must be >= 1");
    Dataset data;
    data.xs.resize(n, 1);
    for (Index l = 0; l < n; ++l) data.xs(l, 0) = rng.uniform();
    data.ys = problem.target(data.xs.col(0));
    for (Index l = 0; l < n; ++l) {
        for (Index j = 0; j < data.ys.cols(); ++j) data.ys(l, j) += problem.noise.draw(rng);
    }
    return data;
}

double interp_norm(const MercerProblem &problem, double gamma) {
    if (!(gamma >= 0.0)) throw Error(ErrorCode::BadParams, "gamma must be >= 0");
    const Vector mu = problem.mu();
    double acc = 0.0;
    for (Index i = mu.size() - 1; i >= 0; --i) acc += problem.a.row(i).squaredNorm() / std::pow(mu[i], gamma);
    return std::sqrt(acc);
}

double weighted_coefficient_distance(const Matrix &c, const Matrix &d, const Vector &mu, double gamma) {
    Vector w(mu.size());
    for (Index i = 0; i < mu.size(); ++i) w[i] = gamma == 0.0 ? 1.0 : std::pow(mu[i], -gamma);
    const auto m = static_cast<std::size_t>(mu.size());
    double acc = 0.0;
    for (Index j = 0; j < c.cols(); ++j) {
        acc += simd::weighted_sq_diff({c.col(j).data(), m}, {d.col(j).data(), m}, {w.data(), m});
    }
    return acc;
}

Matrix estimator_coefficients(const MercerProblem &problem, const FittedEstimator &estimator) {
    if (!(estimator.kernel() == problem.kernel())) throw Error(ErrorCode::KernelMismatch, "estimator kernel differs from the problem kernel");
    if (estimator.output_dim() != problem.D) throw Error(ErrorCode::BadParams, "output dimension mismatch");
    const auto pairs = mercer_eigenpairs(problem.kernel());
    const Matrix e = pairs.basis_matrix(estimator.weights().spectrum().xs().col(0));
    return pairs.mu.asDiagonal() * (e.transpose() * estimator.dual_coefficients());
}

double exact_error(const MercerProblem &problem, const FittedEstimator &estimator, double gamma) {
    check_gamma(gamma);
    const Matrix c = estimator_coefficients(problem, estimator);
    return weighted_coefficient_distance(c, problem.a, problem.mu(), gamma);
}

CoefficientProjector::CoefficientProjector(const MercerProblem &problem, std::shared_ptr<const GramSpectrum> spectrum,
                                           const Matrix &ys)
    : truth_(problem.a), spectrum_(std::move(spectrum)), mu_(problem.mu()) {
    if (!(spectrum_->kernel() == problem.kernel())) throw Error(ErrorCode::KernelMismatch, "spectrum kernel differs from the problem kernel");
    if (ys.rows() != spectrum_->size() || ys.cols() != problem.D) throw Error(ErrorCode::BadParams, "output shape mismatch");
    const auto pairs = mercer_eigenpairs(problem.kernel());
    const Matrix et = pairs.basis_matrix(spectrum_->xs().col(0)).transpose();
    const Matrix &v = spectrum_->eig().vectors;
    projected_ = mu_.asDiagonal() * (et * v);
    outputs_ = v.transpose() * ys;
    if (spectrum_->eig().thin()) {
        null_part_ = mu_.asDiagonal() * (et * (ys - v * outputs_));
    } else {
        null_part_ = Matrix::Zero(mu_.size(), ys.cols());
    }
}

Matrix CoefficientProjector::coefficients(const SpectralWeights &weights) const {
    const double inv_n = 1.0 / static_cast<double>(spectrum_->size());
    Matrix c = projected_ * (weights.filtered().asDiagonal() * outputs_);
    if (weights.filtered_zero() != 0.0) c += weights.filtered_zero() * null_part_;
    return inv_n * c;
}

Matrix CoefficientProjector::coefficients(const FilterSpec &filter, double lambda) const {
    return coefficients(SpectralWeights(spectrum_, filter, lambda));
}

double CoefficientProjector::error(const FilterSpec &filter, double lambda, double gamma) const {
    check_gamma(gamma);
    return weighted_coefficient_distance(coefficients(filter, lambda), truth_, mu_, gamma);
}

}  // namespace specreg
