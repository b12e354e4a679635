#include <algorithm>
#include <cmath>
#include <numeric>

#include "specreg/error.hpp"
#include "specreg/spectral.hpp"

namespace specreg {

namespace {

void check_finite(const Matrix &a, const char *what) {
    if (!a.allFinite()) throw Error(ErrorCode::EigFailure, std::string(what) + " has non-finite entries");
}

// Sorts descending, validates/clamps the negative tail and fixes signs.
SymEig finish(const Vector &ascending_values, const Matrix &ascending_vectors, Index dim) {
    const Index r = ascending_values.size();
    SymEig out;
    out.dim = dim;
    out.values.resize(r);
    out.vectors.resize(ascending_vectors.rows(), r);
    for (Index j = 0; j < r; ++j) {
        out.values[j] = ascending_values[r - 1 - j];
        out.vectors.col(j) = ascending_vectors.col(r - 1 - j);
    }
    const double top = r > 0 ? std::max(out.values[0], 0.0) : 0.0;
    const double floor = -kNegativeEigTolerance * top;
    for (Index j = 0; j < r; ++j) {
        if (out.values[j] < floor) {
            throw Error(ErrorCode::NotPsd, "eigenvalue " + std::to_string(out.values[j]) +
                                               " below tolerance " + std::to_string(floor));
        }
        out.values[j] = std::max(out.values[j], 0.0);
        auto col = out.vectors.col(j);
        for (Index i = 0; i < col.size(); ++i) {
            if (std::abs(col[i]) > 1e-12) {
                if (col[i] < 0.0) col = -col;
                break;
            }
        }
    }
    return out;
}

}  // namespace

Matrix SymEig::reconstruct() const {
    return vectors * values.asDiagonal() * vectors.transpose();
}

SymEig sym_eig(const Matrix &a) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::NonSymmetric, "matrix is not square");
    check_finite(a, "matrix");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
        throw Error(ErrorCode::NonSymmetric, "|A - A^T| exceeds tolerance");
    }
    if (a.rows() == 0) return SymEig{Vector(), Matrix(), 0};
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::EigFailure, "symmetric eigensolver did not converge");
    return finish(solver.eigenvalues(), solver.eigenvectors(), a.rows());
}

SymEig sym_eig_factored(const Matrix &factor) {
    check_finite(factor, "factor");
    const Index n = factor.rows();
    const Index m = factor.cols();
    if (m >= n) {
        Matrix a = factor * factor.transpose();
        a = 0.5 * (a + a.transpose());
        return sym_eig(a);
    }
    Eigen::HouseholderQR<Matrix> qr(factor);
    const Matrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    Matrix small = r * r.transpose();
    small = 0.5 * (small + small.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(small, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::EigFailure, "symmetric eigensolver did not converge");
    Matrix q = qr.householderQ() * Matrix::Identity(n, m);
    return finish(solver.eigenvalues(), q * solver.eigenvectors(), n);
}

}  // namespace specreg
