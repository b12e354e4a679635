#pragma once

// Vector-valued spectral estimators through the representer formula
//   F(x) = sum_i y_i alpha_i(x),  alpha(x) = (1/n) g_lambda(K/n) k_x,
// plus an operator-form (primal) estimator for finite feature maps.

#include <memory>

#include "specreg/kernels.hpp"
#include "specreg/spectral.hpp"

namespace specreg {

/// Covariates as rows of xs (n x d), outputs as rows of ys (n x D).
struct Dataset {
    Matrix xs;
    Matrix ys;

    [[nodiscard]] Index size() const { return xs.rows(); }
    [[nodiscard]] Index output_dim() const { return ys.cols(); }
    /// Throws BadParams on empty, mismatched or non-finite data.
    void validate() const;
};

enum class EigRoute {
    Auto,      // factored when the kernel has an explicit rank-M factor with M < n
    Dense,     // eigendecomposition of the full n x n matrix K/n
    Factored,  // requires TruncatedMercer
};

/// Eigendecomposition of K/n for a fixed set of covariates. Shared read-only
/// by every (filter, lambda) fitted on it.
class GramSpectrum {
public:
    static std::shared_ptr<const GramSpectrum> decompose(const Kernel &kernel, const Matrix &xs,
                                                         EigRoute route = EigRoute::Auto);

    [[nodiscard]] const Kernel &kernel() const { return kernel_; }
    [[nodiscard]] const Matrix &xs() const { return xs_; }
    /// Eigendecomposition of K/n.
    [[nodiscard]] const SymEig &eig() const { return eig_; }
    [[nodiscard]] Index size() const { return xs_.rows(); }

private:
    GramSpectrum(Kernel kernel, Matrix xs, SymEig eig) : kernel_(kernel), xs_(std::move(xs)), eig_(std::move(eig)) {}

    Kernel kernel_;
    Matrix xs_;
    SymEig eig_;
};

/// The filtered operator W = (1/n) g_lambda(K/n), kept in spectral form.
class SpectralWeights {
public:
    /// Throws BadParams for lambda <= 0 and StepTooLarge when a Landweber step
    /// violates tau kappa^2 <= 1.
    SpectralWeights(std::shared_ptr<const GramSpectrum> spectrum, FilterSpec filter, double lambda);

    [[nodiscard]] const GramSpectrum &spectrum() const { return *spectrum_; }
    [[nodiscard]] const std::shared_ptr<const GramSpectrum> &spectrum_ptr() const { return spectrum_; }
    [[nodiscard]] const FilterSpec &filter() const { return filter_; }
    [[nodiscard]] double lambda() const { return lambda_; }
    /// g_lambda at the stored eigenvalues.
    [[nodiscard]] const Vector &filtered() const { return filtered_; }
    /// g_lambda(0), applied on the implicit null space of a thin decomposition.
    [[nodiscard]] double filtered_zero() const { return filtered_zero_; }

    /// W b for an n x c matrix b.
    [[nodiscard]] Matrix apply(const Matrix &b) const;
    /// Dense W (n x n).
    [[nodiscard]] Matrix weights() const;
    /// alpha(x) = W k_x
    [[nodiscard]] Vector alpha(const Eigen::Ref<const Vector> &x) const;
    /// Columns are alpha(q) for each row q of `queries`.
    [[nodiscard]] Matrix alpha_batch(const Matrix &queries) const;

private:
    std::shared_ptr<const GramSpectrum> spectrum_;
    FilterSpec filter_;
    double lambda_;
    Vector filtered_;
    double filtered_zero_;
};

class FittedEstimator {
public:
    FittedEstimator(SpectralWeights weights, std::shared_ptr<const Matrix> ys);

    [[nodiscard]] const SpectralWeights &weights() const { return weights_; }
    [[nodiscard]] const Kernel &kernel() const { return weights_.spectrum().kernel(); }
    [[nodiscard]] const FilterSpec &filter() const { return weights_.filter(); }
    [[nodiscard]] double lambda() const { return weights_.lambda(); }
    [[nodiscard]] const Matrix &ys() const { return *ys_; }
    [[nodiscard]] Index output_dim() const { return ys_->cols(); }

    /// W Y (n x D): the dual coefficients of every output coordinate.
    [[nodiscard]] const Matrix &dual_coefficients() const { return dual_; }

    [[nodiscard]] Vector predict(const Eigen::Ref<const Vector> &x) const;
    /// m x D predictions for the rows of `queries`.
    [[nodiscard]] Matrix predict_batch(const Matrix &queries) const;

private:
    SpectralWeights weights_;
    std::shared_ptr<const Matrix> ys_;
    Matrix dual_;
};

FittedEstimator fit(const Dataset &data, const Kernel &kernel, const FilterSpec &filter, double lambda,
                    EigRoute route = EigRoute::Auto);
/// Fit on an existing decomposition (lambda sweeps reuse one eigendecomposition).
FittedEstimator fit(std::shared_ptr<const GramSpectrum> spectrum, std::shared_ptr<const Matrix> ys,
                    const FilterSpec &filter, double lambda);

/// (1/n) sum_i |y_i - F(x_i)|^2
double empirical_risk(const FittedEstimator &estimator, const Dataset &data);

/// Operator-form estimator C = C_YX g_lambda(C_X) for a TruncatedMercer kernel,
/// with feature map phi(x)_i = sqrt(mu_i) e_i(x).
class PrimalEstimator {
public:
    PrimalEstimator(Kernel kernel, Matrix op) : kernel_(kernel), op_(std::move(op)) {}

    /// D x M matrix in the basis d_j (x) sqrt(mu_i) e_i.
    [[nodiscard]] const Matrix &op() const { return op_; }
    [[nodiscard]] Vector predict(double x) const;

private:
    Kernel kernel_;
    Matrix op_;
};

/// Throws WrongKind for kernels other than TruncatedMercer.
PrimalEstimator primal_fit(const Dataset &data, const Kernel &kernel, const FilterSpec &filter, double lambda);

}  // namespace specreg
