#include <cmath>

#include "specreg/error.hpp"
#include "specreg/estimators.hpp"

namespace specreg {

namespace {

// phi(x)_i = sqrt(mu_i) e_i(x), evaluated term by term with std::cos so this
// path shares no code with the SIMD basis kernel used by the dual estimator.
Vector feature(const MercerEigenpairs &pairs, double x) {
    Vector phi(pairs.order());
    for (Index i = 0; i < pairs.order(); ++i) phi[i] = std::sqrt(pairs.mu[i]) * MercerEigenpairs::basis(i + 1, x);
    return phi;
}

}  // namespace

Vector PrimalEstimator::predict(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::DomainError, "TruncatedMercer points must lie in [0, 1]");
    return op_ * feature(mercer_eigenpairs(kernel_), x);
}

PrimalEstimator primal_fit(const Dataset &data, const Kernel &kernel, const FilterSpec &filter, double lambda) {
    const auto pairs = mercer_eigenpairs(kernel);
    data.validate();
    kernel.check_domain(data.xs);
    if (!(lambda > 0.0)) throw Error(ErrorCode::BadParams, "lambda must be positive");
    if (filter.kind() == FilterKind::Landweber && filter.step() * kernel.kappa2() > 1.0 + 1e-12) {
        throw Error(ErrorCode::StepTooLarge, "Landweber step times kappa^2 exceeds 1");
    }
    const Index n = data.size();
    const Index m = pairs.order();
    Matrix phi(n, m);
    for (Index l = 0; l < n; ++l) phi.row(l) = feature(pairs, data.xs(l, 0)).transpose();

    Matrix cov = phi.transpose() * phi / static_cast<double>(n);
    cov = 0.5 * (cov + cov.transpose());
    const Matrix cross = data.ys.transpose() * phi / static_cast<double>(n);
    const SymEig eig = sym_eig(cov);
    return PrimalEstimator(kernel, cross * apply_filter(filter, lambda, eig));
}

}  // namespace specreg
