#include <cmath>
#include <limits>
#include <numbers>

#include "specreg/cme.hpp"
#include "specreg/error.hpp"
#include "specreg/rng.hpp"

namespace specreg {

CmeModel::CmeModel(SpectralWeights weights, Vector zs, Kernel output_kernel)
    : weights_(std::move(weights)), zs_(std::move(zs)), output_kernel_(output_kernel) {
    if (zs_.size() != weights_.spectrum().size()) throw Error(ErrorCode::BadParams, "zs and xs disagree on the sample count");
}

double CmeModel::cond_expect(std::span<const double> f_at_zs, const Eigen::Ref<const Vector> &x) const {
    if (static_cast<Index>(f_at_zs.size()) != zs_.size()) throw Error(ErrorCode::BadParams, "f_at_zs has the wrong length");
    const Eigen::Map<const Vector> f(f_at_zs.data(), zs_.size());
    return f.dot(weights_.alpha(x));
}

Vector CmeModel::cond_expect_batch(std::span<const double> f_at_zs, const Matrix &queries) const {
    if (static_cast<Index>(f_at_zs.size()) != zs_.size()) throw Error(ErrorCode::BadParams, "f_at_zs has the wrong length");
    const Eigen::Map<const Vector> f(f_at_zs.data(), zs_.size());
    return weights_.alpha_batch(queries).transpose() * f;
}

Vector CmeModel::section_at_zs(double z0) const {
    Vector f(zs_.size());
    Vector a(1);
    Vector b(1);
    a[0] = z0;
    for (Index i = 0; i < zs_.size(); ++i) {
        b[0] = zs_[i];
        f[i] = output_kernel_(a, b);
    }
    return f;
}

CmeModel cme_fit(const Matrix &xs, const Vector &zs, const Kernel &covariate_kernel, const Kernel &output_kernel,
                 const FilterSpec &filter, double lambda) {
    if (xs.rows() < 1 || xs.rows() != zs.size()) throw Error(ErrorCode::BadParams, "need |xs| = |zs| >= 1");
    if (!zs.allFinite()) throw Error(ErrorCode::BadParams, "non-finite output sample");
    auto spectrum = GramSpectrum::decompose(covariate_kernel, xs);
    return CmeModel(SpectralWeights(std::move(spectrum), filter, lambda), zs, output_kernel);
}

double cme_gaussian_truth(const CmeDemoSetup &setup, double x) {
    const double s2 = setup.output_bandwidth * setup.output_bandwidth;
    const double v = s2 + setup.sigma * setup.sigma;
    const double d = setup.z0 - std::sin(2.0 * std::numbers::pi * x);
    return std::sqrt(s2 / v) * std::exp(-d * d / (2.0 * v));
}

CmeDemoResult cme_demo(Index n, const FilterSpec &filter, std::span<const double> grid, std::uint64_t seed,
                       const CmeDemoSetup &setup, Index master_size) {
    if (n < 1) throw Error(ErrorCode::BadParams, "n must be >= 1");
    if (grid.empty()) throw Error(ErrorCode::BadParams, "empty lambda grid");
    if (setup.probes < 1) throw Error(ErrorCode::BadParams, "need at least one probe");
    const Index total = std::max(n, master_size);
    RngStream rng(seed, stream_id(0x636d65ULL));
    Matrix master_x(total, 1);
    Vector master_z(total);
    for (Index i = 0; i < total; ++i) {
        master_x(i, 0) = rng.uniform();
        master_z[i] = std::sin(2.0 * std::numbers::pi * master_x(i, 0)) + setup.sigma * rng.normal();
    }
    const Matrix xs = master_x.topRows(n);
    const Vector zs = master_z.head(n);

    const Kernel covariate = Kernel::gaussian(setup.covariate_bandwidth);
    const Kernel output = Kernel::gaussian(setup.output_bandwidth);
    auto spectrum = GramSpectrum::decompose(covariate, xs);

    Matrix probes(setup.probes, 1);
    Vector truth(setup.probes);
    for (int j = 0; j < setup.probes; ++j) {
        probes(j, 0) = (j + 0.5) / setup.probes;
        truth[j] = cme_gaussian_truth(setup, probes(j, 0));
    }
    const Matrix kq = cross_gram(covariate, xs, probes);

    CmeDemoResult best;
    best.filter = filter.name();
    best.n = n;
    best.max_abs_error = std::numeric_limits<double>::infinity();
    for (double lam : grid) {
        const CmeModel model(SpectralWeights(spectrum, filter, lam), zs, output);
        const Vector f = model.section_at_zs(setup.z0);
        const Vector est = model.weights().apply(kq).transpose() * f;
        const double err = (est - truth).cwiseAbs().maxCoeff();
        if (err < best.max_abs_error) {
            best.max_abs_error = err;
            best.lambda = lam;
            best.probes.clear();
            for (int j = 0; j < setup.probes; ++j) {
                best.probes.push_back({probes(j, 0), truth[j], est[j], std::abs(est[j] - truth[j])});
            }
        }
    }
    return best;
}

}  // namespace specreg
