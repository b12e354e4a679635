#pragma once

// Conditional mean embeddings: the spectral estimator with outputs psi(z_i)
// in an output RKHS, evaluated only through f(z_i) for f in that RKHS.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "specreg/estimators.hpp"

namespace specreg {

class CmeModel {
public:
    CmeModel(SpectralWeights weights, Vector zs, Kernel output_kernel);

    [[nodiscard]] const SpectralWeights &weights() const { return weights_; }
    [[nodiscard]] const Vector &zs() const { return zs_; }
    [[nodiscard]] const Kernel &output_kernel() const { return output_kernel_; }

    /// E[f(Z) | X = x] estimated as f_z^T alpha(x), with f_z[i] = f(z_i).
    [[nodiscard]] double cond_expect(std::span<const double> f_at_zs, const Eigen::Ref<const Vector> &x) const;
    /// One estimate per row of `queries`.
    [[nodiscard]] Vector cond_expect_batch(std::span<const double> f_at_zs, const Matrix &queries) const;
    /// f_z for the section f = l(z0, .) of the output kernel.
    [[nodiscard]] Vector section_at_zs(double z0) const;

private:
    SpectralWeights weights_;
    Vector zs_;
    Kernel output_kernel_;
};

CmeModel cme_fit(const Matrix &xs, const Vector &zs, const Kernel &covariate_kernel, const Kernel &output_kernel,
                 const FilterSpec &filter, double lambda);

/// Z | X = x ~ Normal(sin(2 pi x), sigma^2), X ~ uniform[0, 1], Gaussian output
/// kernel of bandwidth s; the target is E[l(z0, Z) | X = x].
struct CmeDemoSetup {
    double sigma = 0.3;
    double output_bandwidth = 0.5;
    double covariate_bandwidth = 0.1;
    double z0 = 0.5;
    int probes = 20;
};

/// s / sqrt(s^2 + sigma^2) exp(-(z0 - sin(2 pi x))^2 / (2 (s^2 + sigma^2)))
double cme_gaussian_truth(const CmeDemoSetup &setup, double x);

struct CmeProbe {
    double x;
    double truth;
    double estimate;
    double abs_error;
};

struct CmeDemoResult {
    std::string filter;
    Index n = 0;
    double lambda = 0.0;
    double max_abs_error = 0.0;
    std::vector<CmeProbe> probes;  // at x = (j + 1/2) / probes
};

/// Draws (x_i, z_i) from stream (seed, 0); the first n of a common master
/// sample are used for every n, so curves over n are nested. lambda is picked
/// from `grid` minimizing the max probe error.
CmeDemoResult cme_demo(Index n, const FilterSpec &filter, std::span<const double> grid, std::uint64_t seed,
                       const CmeDemoSetup &setup = {}, Index master_size = 0);

}  // namespace specreg
