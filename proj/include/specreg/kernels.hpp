#pragma once

// Scalar positive-definite kernels and their Gram matrices. Points are the
// rows of a matrix (n x d).

#include <string>

#include "specreg/spectral.hpp"

namespace specreg {

enum class KernelKind { Gaussian, Laplace, TruncatedMercer };

inline constexpr int kDefaultMercerOrder = 512;

class Kernel {
public:
    /// exp(-|x - x'|^2 / (2 s^2))
    static Kernel gaussian(double bandwidth);
    /// exp(-|x - x'| / s)
    static Kernel laplace(double bandwidth);
    /// sum_{i<=M} mu_i e_i(x) e_i(x') with mu_i = i^{-1/p}, e_i(x) = sqrt(2) cos(i pi x)
    /// on [0, 1]. Requires 0 < p < 1 (p = 1 is incompatible with a bounded kernel).
    static Kernel truncated_mercer(double p, int order = kDefaultMercerOrder);

    [[nodiscard]] KernelKind kind() const { return kind_; }
    [[nodiscard]] double bandwidth() const { return bandwidth_; }
    [[nodiscard]] double decay() const { return decay_; }
    [[nodiscard]] int order() const { return order_; }
    /// sup_x k(x, x)
    [[nodiscard]] double kappa2() const { return kappa2_; }
    [[nodiscard]] std::string describe() const;

    /// Throws DomainError if any row is outside the kernel's domain.
    void check_domain(const Matrix &points) const;
    [[nodiscard]] double operator()(const Eigen::Ref<const Vector> &x, const Eigen::Ref<const Vector> &y) const;

    friend bool operator==(const Kernel &, const Kernel &) = default;

private:
    Kernel(KernelKind kind, double bandwidth, double decay, int order, double kappa2)
        : kind_(kind), bandwidth_(bandwidth), decay_(decay), order_(order), kappa2_(kappa2) {}

    KernelKind kind_;
    double bandwidth_;
    double decay_;
    int order_;
    double kappa2_;
};

/// K_ij = k(x_i, x_j)
Matrix gram(const Kernel &kernel, const Matrix &xs);
/// C_il = k(queries_l, xs_i), an n x m matrix whose columns are k_x.
Matrix cross_gram(const Kernel &kernel, const Matrix &xs, const Matrix &queries);
/// (k_x)_i = k(x, x_i)
Vector kernel_column(const Kernel &kernel, const Matrix &xs, const Eigen::Ref<const Vector> &x);

/// Closed-form eigensystem of a TruncatedMercer kernel in L2(uniform[0,1]).
struct MercerEigenpairs {
    Vector mu;  // descending, mu_i = i^{-1/p}

    [[nodiscard]] Index order() const { return mu.size(); }
    /// e_i(x) for 1-based i.
    [[nodiscard]] static double basis(Index i, double x);
    /// n x M matrix E with E(l, i-1) = e_i(x_l), through the SIMD kernel.
    [[nodiscard]] Matrix basis_matrix(const Eigen::Ref<const Vector> &x) const;
};

/// Throws WrongKind for kernels other than TruncatedMercer.
MercerEigenpairs mercer_eigenpairs(const Kernel &kernel);

}  // namespace specreg
