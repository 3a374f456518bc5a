// Example nodes: cyclic shift / DFT pairs, weighted unitary tuples, the
// Choi point, and the normalized random row contractions used by the
// search loop.

#ifndef NCPICK_ZOO_HPP
#define NCPICK_ZOO_HPP

#include <cmath>
#include <numbers>
#include <random>

#include "ncpick/pick.hpp"
#include "ncpick/types.hpp"

namespace ncpick {

/// The d = 2 pair (S/sqrt(2), M/sqrt(2)): S the cyclic shift, M the
/// diagonal of n-th roots of unity diag(w, w^2, ..., w^n). An exact row
/// co-isometry generating all of M_n.
inline RowTuple shiftDft(int n) {
    if (n < 2) throw DimensionMismatch("shiftDft: n must be >= 2");
    Matrix s = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) s((i + 1) % n, i) = 1.0;
    Matrix m = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        // exact roots of unity from the angle, not repeated multiplication
        double angle = 2.0 * std::numbers::pi * double(i + 1) / double(n);
        m(i, i) = std::polar(1.0, angle);
    }
    double w = 1.0 / std::sqrt(2.0);
    return RowTuple(n, {w * s, w * m});
}

/// The d = n^2 tuple E_{ij}/sqrt(n) with (i,j) in lexicographic order.
inline RowTuple choiPoint(int n) {
    if (n < 2) throw DimensionMismatch("choiPoint: n must be >= 2");
    std::vector<Matrix> mats;
    double w = 1.0 / std::sqrt(double(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Matrix e = Matrix::Zero(n, n);
            e(i, j) = w;
            mats.push_back(e);
        }
    return RowTuple(n, std::move(mats));
}

/// Tuple (w_i U_i) from unitaries and weights with sum |w_i|^2 = 1.
inline RowTuple weightedUnitaries(const std::vector<Matrix>& unitaries,
                                  const std::vector<Complex>& weights) {
    if (unitaries.empty() || unitaries.size() != weights.size())
        throw DimensionMismatch("weightedUnitaries: need matching nonempty lists");
    int n = int(unitaries[0].rows());
    double wsum = 0.0;
    for (const auto& w : weights) {
        if (w == Complex(0)) throw Error("weightedUnitaries: zero weight");
        wsum += std::norm(w);
    }
    if (std::abs(wsum - 1.0) > 1e-10)
        throw Error("weightedUnitaries: weights do not satisfy sum |w_i|^2 = 1");
    std::vector<Matrix> mats;
    for (size_t i = 0; i < unitaries.size(); ++i) {
        const Matrix& u = unitaries[i];
        if (u.rows() != n || u.cols() != n)
            throw DimensionMismatch("weightedUnitaries: sizes differ");
        if ((u.adjoint() * u - identity(n)).norm() > 1e-10)
            throw Error("weightedUnitaries: matrix is not unitary");
        mats.push_back(weights[i] * u);
    }
    return RowTuple(n, std::move(mats));
}

namespace detail {
inline Matrix complexGaussian(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(2.0));
    Matrix z(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) z(i, j) = Complex(dist(rng), dist(rng));
    return z;
}

inline Matrix invPsdSqrt(const Matrix& g) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((g + Matrix(g.adjoint())) / 2.0);
    Eigen::VectorXd v = es.eigenvalues();
    Eigen::VectorXd inv(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) inv(i) = 1.0 / std::sqrt(v(i));
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}
}  // namespace detail

/// Random node X = (1-eps) (sum Z_i Z_i^*)^{-1/2} Z with i.i.d. standard
/// complex Gaussian Z_i; row norm is 1-eps by construction. Deterministic
/// given the seed.
inline RowTuple randomNormalized(int n, int d, double epsilon, uint64_t seed) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw Error("randomNormalized: epsilon must be in (0,1)");
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<Matrix> z;
        for (int i = 0; i < d; ++i) z.push_back(detail::complexGaussian(n, n, rng));
        Matrix g = Matrix::Zero(n, n);
        for (const auto& zi : z) g += zi * zi.adjoint();
        Eigen::SelfAdjointEigenSolver<Matrix> es((g + Matrix(g.adjoint())) / 2.0);
        if (es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().maxCoeff())
            continue;  // singular draw, retry
        Matrix gi = detail::invPsdSqrt(g);
        std::vector<Matrix> mats;
        for (const auto& zi : z) mats.push_back((1.0 - epsilon) * (gi * zi));
        return RowTuple(n, std::move(mats));
    }
    throw Error("randomNormalized: could not draw an invertible Gram matrix");
}

}  // namespace ncpick

#endif
