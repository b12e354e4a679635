#include <cmath>
#include <numbers>
#include <sstream>

#include "specreg/error.hpp"
#include "specreg/kernels.hpp"
#include "specreg/simd.hpp"

namespace specreg {

Kernel Kernel::gaussian(double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw Error(ErrorCode::BadParams, "bandwidth must be positive");
    return Kernel(KernelKind::Gaussian, bandwidth, 0.0, 0, 1.0);
}

Kernel Kernel::laplace(double bandwidth) {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw Error(ErrorCode::BadParams, "bandwidth must be positive");
    return Kernel(KernelKind::Laplace, bandwidth, 0.0, 0, 1.0);
}

Kernel Kernel::truncated_mercer(double p, int order) {
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::BadParams, "decay p must lie in (0, 1)");
    if (order < 1) throw Error(ErrorCode::BadParams, "truncation order must be >= 1");
    double trace = 0.0;
    for (int i = order; i >= 1; --i) trace += std::pow(static_cast<double>(i), -1.0 / p);
    return Kernel(KernelKind::TruncatedMercer, 0.0, p, order, 2.0 * trace);
}

std::string Kernel::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case KernelKind::Gaussian: os << "gaussian(s=" << bandwidth_ << ")"; break;
        case KernelKind::Laplace: os << "laplace(s=" << bandwidth_ << ")"; break;
        case KernelKind::TruncatedMercer: os << "truncated_mercer(p=" << decay_ << ", M=" << order_ << ")"; break;
    }
    return os.str();
}

void Kernel::check_domain(const Matrix &points) const {
    if (!points.allFinite()) throw Error(ErrorCode::DomainError, "non-finite point");
    if (kind_ == KernelKind::TruncatedMercer) {
        if (points.cols() != 1) throw Error(ErrorCode::DomainError, "TruncatedMercer points are scalars");
        if (points.size() > 0 && (points.minCoeff() < 0.0 || points.maxCoeff() > 1.0)) {
            throw Error(ErrorCode::DomainError, "TruncatedMercer points must lie in [0, 1]");
        }
    }
}

double Kernel::operator()(const Eigen::Ref<const Vector> &x, const Eigen::Ref<const Vector> &y) const {
    switch (kind_) {
        case KernelKind::Gaussian: return std::exp(-(x - y).squaredNorm() / (2.0 * bandwidth_ * bandwidth_));
        case KernelKind::Laplace: return std::exp(-(x - y).norm() / bandwidth_);
        case KernelKind::TruncatedMercer: {
            double acc = 0.0;
            for (int i = order_; i >= 1; --i) {
                acc += std::pow(static_cast<double>(i), -1.0 / decay_) * MercerEigenpairs::basis(i, x[0]) *
                       MercerEigenpairs::basis(i, y[0]);
            }
            return acc;
        }
    }
    return 0.0;
}

namespace {

// Stationary kernels: entry depends on the pairwise distance only.
Matrix stationary_cross(const Kernel &kernel, const Matrix &xs, const Matrix &queries) {
    Matrix out(xs.rows(), queries.rows());
    const double s = kernel.bandwidth();
    for (Index l = 0; l < queries.rows(); ++l) {
        for (Index i = 0; i < xs.rows(); ++i) {
            const double d2 = (xs.row(i) - queries.row(l)).squaredNorm();
            out(i, l) = kernel.kind() == KernelKind::Gaussian ? std::exp(-d2 / (2.0 * s * s)) : std::exp(-std::sqrt(d2) / s);
        }
    }
    return out;
}

}  // namespace

Matrix cross_gram(const Kernel &kernel, const Matrix &xs, const Matrix &queries) {
    kernel.check_domain(xs);
    kernel.check_domain(queries);
    if (xs.cols() != queries.cols()) throw Error(ErrorCode::DomainError, "point dimension mismatch");
    if (kernel.kind() != KernelKind::TruncatedMercer) return stationary_cross(kernel, xs, queries);
    const auto eig = mercer_eigenpairs(kernel);
    const Matrix ex = eig.basis_matrix(xs.col(0));
    const Matrix eq = eig.basis_matrix(queries.col(0));
    return ex * eig.mu.asDiagonal() * eq.transpose();
}

Matrix gram(const Kernel &kernel, const Matrix &xs) {
    kernel.check_domain(xs);
    if (kernel.kind() != KernelKind::TruncatedMercer) {
        Matrix k = stationary_cross(kernel, xs, xs);
        return 0.5 * (k + k.transpose());
    }
    const auto eig = mercer_eigenpairs(kernel);
    const Matrix e = eig.basis_matrix(xs.col(0));
    const Matrix scaled = e * eig.mu.cwiseSqrt().asDiagonal();
    Matrix k(xs.rows(), xs.rows());
    k.setZero();
    k.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
    return k.selfadjointView<Eigen::Lower>();
}

Vector kernel_column(const Kernel &kernel, const Matrix &xs, const Eigen::Ref<const Vector> &x) {
    Matrix q(1, x.size());
    q.row(0) = x.transpose();
    return cross_gram(kernel, xs, q).col(0);
}

double MercerEigenpairs::basis(Index i, double x) {
    return std::numbers::sqrt2 * std::cos(static_cast<double>(i) * std::numbers::pi * x);
}

Matrix MercerEigenpairs::basis_matrix(const Eigen::Ref<const Vector> &x) const {
    const Vector xs = x;
    Matrix out(xs.size(), order());
    simd::cosine_basis({xs.data(), static_cast<std::size_t>(xs.size())}, static_cast<std::size_t>(order()), out.data());
    return out;
}

MercerEigenpairs mercer_eigenpairs(const Kernel &kernel) {
    if (kernel.kind() != KernelKind::TruncatedMercer) throw Error(ErrorCode::WrongKind, "kernel has no closed-form eigensystem");
    MercerEigenpairs out;
    out.mu.resize(kernel.order());
    for (int i = 1; i <= kernel.order(); ++i) out.mu[i - 1] = std::pow(static_cast<double>(i), -1.0 / kernel.decay());
    return out;
}

}  // namespace specreg
