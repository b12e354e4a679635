#pragma once

// Spectral calculus on symmetric positive semidefinite matrices and the
// regularization filters g_lambda applied through it.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace specreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Entrywise |A - A^T| allowed by sym_eig, relative to max(1, max|A|).
inline constexpr double kSymmetryTolerance = 1e-12;
/// Eigenvalues in [-kNegativeEigTolerance * lambda_max, 0) are clamped to 0.
inline constexpr double kNegativeEigTolerance = 1e-10;

/// Eigendecomposition A = V diag(values) V^T of a PSD matrix.
///
/// `vectors` may be thin (dim x r with r < dim). In that case the remaining
/// dim - r eigenvalues are exactly zero and their eigenvectors span the
/// orthogonal complement of range(vectors). Values are sorted descending and
/// the first entry of magnitude > 1e-12 of every column is positive.
struct SymEig {
    Vector values;
    Matrix vectors;
    Index dim = 0;

    [[nodiscard]] Index rank_stored() const { return values.size(); }
    [[nodiscard]] bool thin() const { return values.size() < dim; }
    /// V diag(values) V^T (the implicit zero block contributes nothing).
    [[nodiscard]] Matrix reconstruct() const;
};

/// Dense decomposition. Throws NonSymmetric, NotPsd or EigFailure.
SymEig sym_eig(const Matrix &a);

/// Decomposition of A = S S^T from its factor S (dim x m). For m < dim it
/// goes through a thin QR of S and the m x m problem R R^T, so the cost is
/// O(dim m^2) instead of O(dim^3). Falls back to sym_eig when m >= dim.
SymEig sym_eig_factored(const Matrix &factor);

enum class FilterKind { Tikhonov, Landweber, Truncation };

/// A filter function family g_lambda with its declared constants.
class FilterSpec {
public:
    static FilterSpec tikhonov() { return FilterSpec(FilterKind::Tikhonov, 0.0); }
    /// Gradient descent with constant step `step` (> 0); k = ceil(1/lambda) steps.
    static FilterSpec landweber(double step);
    static FilterSpec truncation() { return FilterSpec(FilterKind::Truncation, 0.0); }

    [[nodiscard]] FilterKind kind() const { return kind_; }
    [[nodiscard]] double step() const { return step_; }
    [[nodiscard]] std::string name() const;

    [[nodiscard]] double E() const { return 1.0; }
    /// Qualification rho; +infinity for Landweber and Truncation.
    [[nodiscard]] double qualification() const;
    /// omega_{rho'} for 0 < rho' <= qualification(). Throws BadParams otherwise.
    [[nodiscard]] double omega(double rho_prime) const;

    [[nodiscard]] double value(double lambda, double x) const;
    /// r_lambda(x) = 1 - x g_lambda(x)
    [[nodiscard]] double residual(double lambda, double x) const { return 1.0 - x * value(lambda, x); }
    /// out[i] = g_lambda(x[i]); vectorized where the filter allows.
    void values(double lambda, std::span<const double> x, std::span<double> out) const;

    /// Number of gradient steps for a given lambda: ceil(1/lambda), at least 1.
    /// 1/lambda within 1e-9 of an integer is treated as that integer.
    static std::int64_t landweber_iterations(double lambda);

    friend bool operator==(const FilterSpec &, const FilterSpec &) = default;

private:
    FilterSpec(FilterKind kind, double step) : kind_(kind), step_(step) {}

    FilterKind kind_;
    double step_;
};

/// V diag(g_lambda(values)) V^T, with g_lambda(0) on the implicit zero block
/// of a thin decomposition.
Matrix apply_filter(const FilterSpec &filter, double lambda, const SymEig &eig);

inline constexpr int kAxiomXGridPoints = 512;
inline constexpr double kAxiomXGridFloor = 1e-8;
inline constexpr int kDefaultAlphaGridResolution = 64;
inline constexpr int kMinAlphaGridResolution = 16;
inline constexpr double kAxiomSlack = 1e-9;

struct AxiomReport {
    struct Qualification {
        double rho_prime;
        double max_lhs;
        double bound;  // omega_{rho'}
    };
    double max_lhs_axiom1 = 0.0;
    std::vector<Qualification> axiom2;
    bool pass = false;
};

/// Evaluates both filter axioms on finite grids: lambda from `lambda_grid`
/// (each in (0, kappa2]), x geometric in [kappa2 * 1e-8, kappa2] plus x = 0,
/// alpha uniform on [0, 1] for the first axiom and on [0, rho'] for the
/// second. Passes iff every supremum is within kAxiomSlack of its constant.
AxiomReport verify_filter_axioms(const FilterSpec &filter, std::span<const double> lambda_grid, double kappa2,
                                 std::span<const double> rho_primes,
                                 int alpha_grid_resolution = kDefaultAlphaGridResolution);

}  // namespace specreg
