// Shared matrix carrier, tolerances and error types for the ncpick library.

#ifndef NCPICK_TYPES_HPP
#define NCPICK_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ncpick {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;   // dense complex, the universal carrier
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct SingularResolvent : Error {
    using Error::Error;
};
struct NotPSD : Error {
    using Error::Error;
};
struct NotInAlgebra : Error {
    // (blockRow, blockCol, residual) for every offending block
    std::vector<std::tuple<int, int, double>> offenders;
    NotInAlgebra(const std::string& msg,
                 std::vector<std::tuple<int, int, double>> off)
        : Error(msg), offenders(std::move(off)) {}
};
struct NotInCommutant : Error {
    using Error::Error;
};
struct NotInvertible : Error {
    using Error::Error;
};
struct NotCoisometry : Error {
    using Error::Error;
};
struct NotIrreducible : Error {
    using Error::Error;
};
struct DegenerateGap : Error {
    using Error::Error;
};
struct NotFullRank : Error {
    using Error::Error;
};
struct RankTooSmall : Error {
    using Error::Error;
};
struct IsometryFailure : Error {
    using Error::Error;
};
struct IdentityViolation : Error {
    using Error::Error;
};
struct BudgetExhausted : Error {
    using Error::Error;
};

/// Numerical tolerances used across the library. rankTol and psdTol are
/// relative (to the largest eigenvalue / norm), seriesTail is absolute.
struct Tolerances {
    double rankTol = 1e-10;
    double psdTol = 1e-9;
    double seriesTail = 1e-8;
};

inline void requireFinite(const Matrix& a, const char* what) {
    if (!a.allFinite())
        throw Error(std::string(what) + ": non-finite entries");
}

inline Matrix identity(Eigen::Index k) { return Matrix::Identity(k, k); }

/// Operator norm (largest singular value).
inline double opNorm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    return a.jacobiSvd().singularValues()(0);
}

/// A d-tuple X = (X_1, ..., X_d) of n x n matrices, the interpolation node.
struct RowTuple {
    int n = 0;
    int d = 0;
    std::vector<Matrix> mats;

    RowTuple() = default;
    RowTuple(int n_, std::vector<Matrix> m) : n(n_), d(int(m.size())), mats(std::move(m)) {
        for (const auto& x : mats) {
            if (x.rows() != n || x.cols() != n)
                throw DimensionMismatch("RowTuple: matrix is not n x n");
            requireFinite(x, "RowTuple");
        }
    }

    RowTuple scaled(double t) const {
        std::vector<Matrix> out;
        out.reserve(mats.size());
        for (const auto& x : mats) out.push_back(t * x);
        return RowTuple(n, std::move(out));
    }
};

/// An s x t grid of n x n blocks, the interpolation target Y.
struct BlockTarget {
    int s = 0, t = 0, n = 0;
    std::vector<std::vector<Matrix>> blocks;  // blocks[i][j], i < s, j < t

    BlockTarget() = default;
    BlockTarget(int s_, int t_, int n_, std::vector<std::vector<Matrix>> b)
        : s(s_), t(t_), n(n_), blocks(std::move(b)) {
        if (int(blocks.size()) != s) throw DimensionMismatch("BlockTarget: bad grid");
        for (auto& row : blocks) {
            if (int(row.size()) != t) throw DimensionMismatch("BlockTarget: bad grid");
            for (auto& blk : row) {
                if (blk.rows() != n || blk.cols() != n)
                    throw DimensionMismatch("BlockTarget: block is not n x n");
                requireFinite(blk, "BlockTarget");
            }
        }
    }

    static BlockTarget single(const Matrix& y) {
        return BlockTarget(1, 1, int(y.rows()), {{y}});
    }
    static BlockTarget row(const std::vector<Matrix>& ys) {
        return BlockTarget(1, int(ys.size()), int(ys.at(0).rows()), {ys});
    }
    static BlockTarget column(const std::vector<Matrix>& ys) {
        std::vector<std::vector<Matrix>> grid;
        for (const auto& y : ys) grid.push_back({y});
        return BlockTarget(int(ys.size()), 1, int(ys.at(0).rows()), std::move(grid));
    }

    /// Flattened sn x tn matrix in block-outer order (block index outer,
    /// inner n-dimensional space inner).
    Matrix asMatrix() const {
        Matrix y = Matrix::Zero(Eigen::Index(s) * n, Eigen::Index(t) * n);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < t; ++j)
                y.block(Eigen::Index(i) * n, Eigen::Index(j) * n, n, n) = blocks[i][j];
        return y;
    }

    /// Same operator re-indexed onto H_space (x) H_block; this is the form
    /// that composes with P_X (x) I legs.
    Matrix spaceOuter() const {
        Matrix yh = Matrix::Zero(Eigen::Index(n) * s, Eigen::Index(n) * t);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < t; ++j)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        yh(Eigen::Index(a) * s + i, Eigen::Index(b) * t + j) =
                            blocks[i][j](a, b);
        return yh;
    }

    double norm() const { return opNorm(asMatrix()); }
};

}  // namespace ncpick

#endif
