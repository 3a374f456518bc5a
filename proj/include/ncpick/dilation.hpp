// Boomerang matrices and their exchange identities, the defect Delta_X,
// the isometry V_X and the mini-dilation identity for the compressed
// tuple Xtilde = P^{+1/2} (I (x) X) P^{1/2}.

#ifndef NCPICK_DILATION_HPP
#define NCPICK_DILATION_HPP

#include <cmath>
#include <vector>

#include "ncpick/pick.hpp"
#include "ncpick/tensor.hpp"
#include "ncpick/types.hpp"
#include "ncpick/word.hpp"

namespace ncpick {

/// The n^3 x n boomerang matrix B = sum_{ij} e_i (x) e_j (x) E_ij,
/// exact 0/1 entries. Satisfies B^T B = n I_n.
inline Matrix boomerang(Eigen::Index n) {
    if (n < 1) throw DimensionMismatch("boomerang: n must be >= 1");
    Matrix b = Matrix::Zero(n * n * n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            b((i * n + j) * n + i, j) = 1.0;
    return b;
}

/// The n^3 r x nr ampliated boomerang
/// B_r = (sum_{ij} e_i (x) e_j (x) I_r (x) E_ij) Q_{n,r}.
inline Matrix ampliatedBoomerang(Eigen::Index n, Eigen::Index r) {
    if (n < 1 || r < 1) throw DimensionMismatch("ampliatedBoomerang: n, r must be >= 1");
    Matrix s = Matrix::Zero(n * n * r * n, n * r);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < r; ++k)
                s(((i * n + j) * r + k) * n + i, k * n + j) = 1.0;
    return s * commutationMatrix(n, r);
}

/// B^T (A (x) CD) B, asserting the exchange rewrite
///   B^T (A (x) CD) B = B^T (((C^T (x) I) A (D^T (x) I)) (x) I) B,
/// whose failure signals a leg-ordering bug upstream.
inline Matrix boomerangSandwich(const Matrix& a, const Matrix& c, const Matrix& d) {
    Eigen::Index n = isqrtExact(a.rows(), "boomerangSandwich");
    if (a.cols() != a.rows() || c.rows() != n || c.cols() != n || d.rows() != n ||
        d.cols() != n)
        throw DimensionMismatch("boomerangSandwich: need A in M_{n^2}, C, D in M_n");
    Matrix b = boomerang(n);
    Matrix lhs = b.transpose() * kron(a, c * d) * b;
    Matrix inner = kron(c.transpose(), identity(n)) * a * kron(d.transpose(), identity(n));
    Matrix rhs = b.transpose() * kron(inner, identity(n)) * b;
    double scale = std::max(1.0, lhs.norm());
    if ((lhs - rhs).norm() > 1e-10 * scale)
        throw IdentityViolation("boomerangSandwich: exchange identity violated");
    return lhs;
}

/// The defect, the isometry V_X = (P^{1/2} (x) I_n (x) Delta^{1/2}) B_n,
/// and the compressed tuple Xtilde.
struct DilationData {
    RowTuple node;
    Matrix Delta;
    Matrix sqrtDelta;
    Matrix V;                    // n^4 x n^2 isometry
    std::vector<Matrix> Xtilde;  // n^2 x n^2 each
};

/// Builds DilationData from a bundle; enforces the isometry invariant.
/// V_X is n^4 x n^2, so n is capped (override via maxN for big runs).
inline DilationData dilationData(const PickBundle& b, int maxN = 12) {
    int n = b.n();
    if (n > maxN) throw DimensionMismatch("dilationData: n exceeds the size cap");
    DilationData d;
    d.node = b.node;
    Matrix g = Matrix::Zero(n, n);
    for (const auto& xi : b.node.mats) g += xi * xi.adjoint();
    d.Delta = identity(n) - g;
    d.Delta = (d.Delta + Matrix(d.Delta.adjoint())) / 2.0;
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(d.Delta, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw NotPSD("dilationData: defect has a negative eigenvalue");
    }
    d.sqrtDelta = detail::psdSqrt(d.Delta);
    d.V = kron(kron(b.sqrtP, identity(n)), d.sqrtDelta) * ampliatedBoomerang(n, n);
    if ((Matrix(d.V.adjoint() * d.V) - identity(Eigen::Index(n) * n)).norm() > 1e-8)
        throw IsometryFailure("dilationData: V*V differs from the identity");
    for (const auto& xi : b.node.mats)
        d.Xtilde.push_back(b.pinvSqrtP * kron(identity(n), xi) * b.sqrtP);
    return d;
}

/// Residual of the mini-dilation identity
///   V* (alpha(Xt) beta(Xt)* (x) I_{n^2}) V = alpha(X) beta(X)* (x) I_n.
/// Two intermediate identities are asserted first, to separate projection
/// failures from isometry failures: the range-projection absorption
/// Q (I (x) W) P = (I (x) W) P for W = alpha(X), and the compression rule
/// alpha(Xtilde) = P^{+1/2} (I (x) alpha(X)) P^{1/2}.
inline double miniDilationCheck(const PickBundle& b, const DilationData& d,
                                const NcPoly& alpha, const NcPoly& beta) {
    int n = b.n();
    if (alpha.letterCount != b.node.d || beta.letterCount != b.node.d)
        throw DimensionMismatch("miniDilationCheck: polynomial letter count mismatch");
    Matrix ax = evalPoly(alpha, b.node);
    Matrix bx = evalPoly(beta, b.node);
    {
        Matrix iw = kron(identity(n), ax);
        Matrix lhs = b.projQ * iw * b.P;
        Matrix rhs = iw * b.P;
        if ((lhs - rhs).norm() > 1e-9 * std::max(1.0, rhs.norm()))
            throw IdentityViolation(
                "miniDilationCheck: range projection does not absorb I (x) alpha(X)");
    }
    RowTuple xt(n * n, std::vector<Matrix>(d.Xtilde));
    Matrix axt = evalPoly(alpha, xt);
    Matrix bxt = evalPoly(beta, xt);
    {
        // the empty word contributes I to alpha(Xtilde) but Q to the
        // compression, so compare after cutting down to ran(P); the
        // difference lives on ker(P), which V's P^{1/2} leg annihilates
        Matrix expect = b.pinvSqrtP * kron(identity(n), ax) * b.sqrtP;
        Matrix cut = b.projQ * axt * b.projQ;
        if ((cut - expect).norm() > 1e-8 * std::max(1.0, expect.norm()))
            throw IdentityViolation(
                "miniDilationCheck: alpha(Xtilde) is not the compression of alpha(X)");
    }
    Matrix lhs = d.V.adjoint() *
                 kron(Matrix(axt * bxt.adjoint()), identity(Eigen::Index(n) * n)) * d.V;
    Matrix rhs = kron(Matrix(ax * bx.adjoint()), identity(n));
    return (lhs - rhs).norm();
}

}  // namespace ncpick

#endif
