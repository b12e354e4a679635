#include <cmath>

#include "specreg/error.hpp"
#include "specreg/estimators.hpp"

namespace specreg {

void Dataset::validate() const {
    if (xs.rows() < 1) throw Error(ErrorCode::BadParams, "dataset needs at least one sample");
    if (ys.rows() != xs.rows()) throw Error(ErrorCode::BadParams, "xs and ys disagree on the sample count");
    if (ys.cols() < 1) throw Error(ErrorCode::BadParams, "outputs need at least one coordinate");
    if (!xs.allFinite() || !ys.allFinite()) throw Error(ErrorCode::BadParams, "dataset has non-finite entries");
}

std::shared_ptr<const GramSpectrum> GramSpectrum::decompose(const Kernel &kernel, const Matrix &xs, EigRoute route) {
    kernel.check_domain(xs);
    const Index n = xs.rows();
    if (n < 1) throw Error(ErrorCode::BadParams, "no covariates");
    const bool mercer = kernel.kind() == KernelKind::TruncatedMercer;
    if (route == EigRoute::Factored && !mercer) throw Error(ErrorCode::WrongKind, "factored route needs a TruncatedMercer kernel");
    const bool factored = route == EigRoute::Factored || (route == EigRoute::Auto && mercer && kernel.order() < n);

    SymEig eig;
    if (factored) {
        // K/n = S S^T with S = E diag(sqrt(mu)) / sqrt(n)
        const auto pairs = mercer_eigenpairs(kernel);
        Matrix s = pairs.basis_matrix(xs.col(0)) * pairs.mu.cwiseSqrt().asDiagonal();
        s /= std::sqrt(static_cast<double>(n));
        eig = sym_eig_factored(s);
    } else {
        eig = sym_eig(gram(kernel, xs) / static_cast<double>(n));
    }
    return std::shared_ptr<const GramSpectrum>(new GramSpectrum(kernel, xs, std::move(eig)));
}

SpectralWeights::SpectralWeights(std::shared_ptr<const GramSpectrum> spectrum, FilterSpec filter, double lambda)
    : spectrum_(std::move(spectrum)), filter_(filter), lambda_(lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::BadParams, "lambda must be positive");
    if (filter_.kind() == FilterKind::Landweber && filter_.step() * spectrum_->kernel().kappa2() > 1.0 + 1e-12) {
        throw Error(ErrorCode::StepTooLarge, "Landweber step " + std::to_string(filter_.step()) +
                                                 " times kappa^2 " + std::to_string(spectrum_->kernel().kappa2()) +
                                                 " exceeds 1");
    }
    const auto &values = spectrum_->eig().values;
    filtered_.resize(values.size());
    filter_.values(lambda_, {values.data(), static_cast<std::size_t>(values.size())},
                   {filtered_.data(), static_cast<std::size_t>(filtered_.size())});
    filtered_zero_ = filter_.value(lambda_, 0.0);
}

Matrix SpectralWeights::apply(const Matrix &b) const {
    const auto &eig = spectrum_->eig();
    const double inv_n = 1.0 / static_cast<double>(spectrum_->size());
    const Matrix proj = eig.vectors.transpose() * b;
    Matrix out = eig.vectors * (filtered_.asDiagonal() * proj);
    if (eig.thin() && filtered_zero_ != 0.0) out += filtered_zero_ * (b - eig.vectors * proj);
    return inv_n * out;
}

Matrix SpectralWeights::weights() const {
    return apply_filter(filter_, lambda_, spectrum_->eig()) / static_cast<double>(spectrum_->size());
}

Vector SpectralWeights::alpha(const Eigen::Ref<const Vector> &x) const {
    return apply(kernel_column(spectrum_->kernel(), spectrum_->xs(), x));
}

Matrix SpectralWeights::alpha_batch(const Matrix &queries) const {
    return apply(cross_gram(spectrum_->kernel(), spectrum_->xs(), queries));
}

FittedEstimator::FittedEstimator(SpectralWeights weights, std::shared_ptr<const Matrix> ys)
    : weights_(std::move(weights)), ys_(std::move(ys)) {
    if (ys_->rows() != weights_.spectrum().size()) throw Error(ErrorCode::BadParams, "output count does not match covariates");
    dual_ = weights_.apply(*ys_);
}

Vector FittedEstimator::predict(const Eigen::Ref<const Vector> &x) const {
    const Vector k = kernel_column(kernel(), weights_.spectrum().xs(), x);
    return dual_.transpose() * k;
}

Matrix FittedEstimator::predict_batch(const Matrix &queries) const {
    // Y^T W k_q for every q; W is symmetric so this is K_q^T (W Y).
    return cross_gram(kernel(), weights_.spectrum().xs(), queries).transpose() * dual_;
}

FittedEstimator fit(const Dataset &data, const Kernel &kernel, const FilterSpec &filter, double lambda, EigRoute route) {
    data.validate();
    auto spectrum = GramSpectrum::decompose(kernel, data.xs, route);
    return fit(std::move(spectrum), std::make_shared<const Matrix>(data.ys), filter, lambda);
}

FittedEstimator fit(std::shared_ptr<const GramSpectrum> spectrum, std::shared_ptr<const Matrix> ys,
                    const FilterSpec &filter, double lambda) {
    return FittedEstimator(SpectralWeights(std::move(spectrum), filter, lambda), std::move(ys));
}

double empirical_risk(const FittedEstimator &estimator, const Dataset &data) {
    data.validate();
    const Matrix residual = data.ys - estimator.predict_batch(data.xs);
    return residual.squaredNorm() / static_cast<double>(data.size());
}

}  // namespace specreg
