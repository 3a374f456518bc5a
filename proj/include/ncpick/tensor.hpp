// Exact tensor primitives: vec, Kronecker products, the psi entry
// permutation, Choi and commutation matrices, leg permutations.
//
// All index bookkeeping is 0-based here; the 1-based conventions of the
// underlying formulas are translated exactly once, in this file.

#ifndef NCPICK_TENSOR_HPP
#define NCPICK_TENSOR_HPP

#include <cmath>
#include <numeric>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "ncpick/types.hpp"

namespace ncpick {

/// Column-stacking: column j of A occupies entries [n*j, n*(j+1)) of the
/// output.
inline Matrix vec(const Matrix& a) {
    Matrix v(a.size(), 1);
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) v(k++, 0) = a(i, j);
    return v;
}

/// Inverse of vec for rectangular shapes; unvec(vec(A), rows, cols) == A
/// bit-exactly.
inline Matrix unvec(const Matrix& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.cols() != 1 || v.rows() != rows * cols)
        throw DimensionMismatch("unvec: vector length does not match shape");
    Matrix a(rows, cols);
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = v(k++, 0);
    return a;
}

inline Matrix unvec(const Matrix& v, Eigen::Index n) { return unvec(v, n, n); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

/// Rectangular psi: for A in M_p (x) M_q (a pq x pq matrix), returns the
/// q^2 x p^2 matrix determined by C (x) D -> vec(D) vec(C)^T. A pure entry
/// permutation, no arithmetic.
inline Matrix psiRect(const Matrix& a, Eigen::Index p, Eigen::Index q) {
    if (a.rows() != p * q || a.cols() != p * q)
        throw DimensionMismatch("psiRect: input is not pq x pq");
    Matrix out(q * q, p * p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            for (Eigen::Index k = 0; k < q; ++k)
                for (Eigen::Index l = 0; l < q; ++l)
                    out(q * l + k, p * j + i) = a(q * i + k, q * j + l);
    return out;
}

inline Eigen::Index isqrtExact(Eigen::Index m, const char* what) {
    auto r = Eigen::Index(std::llround(std::sqrt(double(m))));
    if (r * r != m) throw DimensionMismatch(std::string(what) + ": size is not a perfect square");
    return r;
}

/// The psi involution on M_{n^2}: E_{ij} (x) E_{kl} -> E_{lj} (x) E_{ki}.
inline Matrix psi(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("psi: input not square");
    Eigen::Index n = isqrtExact(a.rows(), "psi");
    return psiRect(a, n, n);
}

/// Choi matrix C_n = sum_{ij} E_{ij} (x) E_{ij} = vec(I) vec(I)^T, stored
/// as exact 0/1 entries.
inline Matrix choiMatrix(Eigen::Index n) {
    Matrix c = Matrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) c(i * (n + 1), j * (n + 1)) = 1.0;
    return c;
}

/// Permutation Q_{n,s} with Q (u (x) v) = v (x) u for u in C^n, v in C^s;
/// conjugation by it swaps Kronecker factors.
inline Matrix commutationMatrix(Eigen::Index n, Eigen::Index s) {
    Matrix q = Matrix::Zero(n * s, n * s);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < s; ++j) q(n * j + i, s * i + j) = 1.0;
    return q;
}

/// Tensor-factor dimensions of a row or column space.
struct LegShape {
    std::vector<Eigen::Index> dims;

    Eigen::Index total() const {
        Eigen::Index t = 1;
        for (auto d : dims) {
            if (d <= 0) throw DimensionMismatch("LegShape: nonpositive dim");
            t *= d;
        }
        return t;
    }
};

namespace detail {
// Flat index of a multi-index under Kronecker ordering (leftmost leg
// outermost).
inline Eigen::Index flatten(const std::vector<Eigen::Index>& idx,
                            const std::vector<Eigen::Index>& dims) {
    Eigen::Index f = 0;
    for (size_t k = 0; k < dims.size(); ++k) f = f * dims[k] + idx[k];
    return f;
}

inline void unflatten(Eigen::Index f, const std::vector<Eigen::Index>& dims,
                      std::vector<Eigen::Index>& idx) {
    for (size_t k = dims.size(); k-- > 0;) {
        idx[k] = f % dims[k];
        f /= dims[k];
    }
}
}  // namespace detail

/// Conjugate A by the permutation that reorders tensor legs: leg k of the
/// output is leg perm[k] of the input, on rows and columns alike.
inline Matrix legPermute(const Matrix& a, const LegShape& rowShape,
                         const LegShape& colShape,
                         const std::vector<int>& perm) {
    if (rowShape.total() != a.rows() || colShape.total() != a.cols())
        throw DimensionMismatch("legPermute: shape products mismatch matrix dims");
    size_t L = perm.size();
    if (rowShape.dims.size() != L || colShape.dims.size() != L)
        throw DimensionMismatch("legPermute: permutation length mismatch");
    {
        std::vector<bool> seen(L, false);
        for (int p : perm) {
            if (p < 0 || size_t(p) >= L || seen[p])
                throw DimensionMismatch("legPermute: not a permutation");
            seen[p] = true;
        }
    }
    std::vector<Eigen::Index> newRowDims(L), newColDims(L);
    for (size_t k = 0; k < L; ++k) {
        newRowDims[k] = rowShape.dims[perm[k]];
        newColDims[k] = colShape.dims[perm[k]];
    }
    Matrix out(a.rows(), a.cols());
    std::vector<Eigen::Index> ri(L), ci(L), pri(L), pci(L);
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        detail::unflatten(r, rowShape.dims, ri);
        for (size_t k = 0; k < L; ++k) pri[k] = ri[perm[k]];
        Eigen::Index nr = detail::flatten(pri, newRowDims);
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            detail::unflatten(c, colShape.dims, ci);
            for (size_t k = 0; k < L; ++k) pci[k] = ci[perm[k]];
            out(nr, detail::flatten(pci, newColDims)) = a(r, c);
        }
    }
    return out;
}

}  // namespace ncpick

#endif
