#pragma once

#include "specreg/rng.hpp"
#include "specreg/spectral.hpp"

namespace specreg::test {

inline Matrix uniform_points(RngStream &rng, Index n, double lo = 0.0, double hi = 1.0) {
    Matrix xs(n, 1);
    for (Index i = 0; i < n; ++i) xs(i, 0) = rng.uniform(lo, hi);
    return xs;
}

inline Matrix normal_matrix(RngStream &rng, Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    return m;
}

inline double max_abs(const Matrix &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace specreg::test
