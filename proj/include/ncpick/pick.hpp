// The elementary Pick matrix P_X, algebra membership, the single-matrix
// feasibility criterion and the NP norm formula.
//
// Leg convention: every n^2 s dimensional object lives on
// H_choi (x) H_space (x) H_block, in that order. Block targets are handed
// in block-outer form and re-shuffled onto H_space (x) H_block before they
// touch P_X legs (BlockTarget::spaceOuter).

#ifndef NCPICK_PICK_HPP
#define NCPICK_PICK_HPP

#include <algorithm>
#include <cmath>

#include "ncpick/tensor.hpp"
#include "ncpick/types.hpp"
#include "ncpick/word.hpp"

namespace ncpick {

/// ||sum X_i X_i*||^{1/2}; the tuple is a row contraction iff this is < 1.
inline double rowNorm(const RowTuple& x) {
    Matrix g = Matrix::Zero(x.n, x.n);
    for (const auto& m : x.mats) g += m * m.adjoint();
    g = (g + Matrix(g.adjoint())) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
    double lmax = es.eigenvalues().size() ? es.eigenvalues().maxCoeff() : 0.0;
    return std::sqrt(std::max(0.0, lmax));
}

/// Transfer matrix T = sum conj(X_i) (x) X_i.
inline Matrix transfer(const RowTuple& x) {
    Matrix t = Matrix::Zero(Eigen::Index(x.n) * x.n, Eigen::Index(x.n) * x.n);
    for (const auto& m : x.mats) t += kron(m.conjugate(), m);
    return t;
}

/// P_X together with its root, pseudoinverse root, range projection and
/// numerical rank. Immutable after construction.
struct PickBundle {
    RowTuple node;
    Matrix P;
    Matrix sqrtP;
    Matrix pinvSqrtP;
    Matrix projQ;
    int rank = 0;
    Tolerances tol;

    int n() const { return node.n; }
};

namespace detail {
struct HermEig {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;
};

inline HermEig hermEig(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((a + Matrix(a.adjoint())) / 2.0);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

/// PSD square root via eigendecomposition; negative dust is clamped.
inline Matrix psdSqrt(const Matrix& a) {
    auto e = hermEig(a);
    Eigen::VectorXd r = e.values.cwiseMax(0.0).cwiseSqrt();
    return e.vectors * r.asDiagonal() * e.vectors.adjoint();
}
}  // namespace detail

/// Builds the elementary Pick matrix P_X = psi((I - T)^{-1}) and its
/// derived quantities. Refuses nodes at or beyond the boundary.
inline PickBundle pickMatrix(const RowTuple& x, const Tolerances& tol = {}) {
    double r = rowNorm(x);
    if (!(r < 1.0 - 1e-12))
        throw SingularResolvent("pickMatrix: row norm " + std::to_string(r) +
                                " is not strictly inside the row ball");
    Eigen::Index nn = Eigen::Index(x.n) * x.n;
    Matrix resolvent =
        Matrix(identity(nn) - transfer(x)).partialPivLu().solve(Matrix(identity(nn)));
    if (!resolvent.allFinite())
        throw SingularResolvent("pickMatrix: resolvent solve produced non-finite values");
    Matrix p = psi(resolvent);

    double asym = (p - Matrix(p.adjoint())).norm();
    if (asym > 1e-10 * std::max(1.0, p.norm()))
        throw NotPSD("pickMatrix: P_X asymmetry above tolerance");
    p = (p + Matrix(p.adjoint())) / 2.0;

    auto e = detail::hermEig(p);
    double lmax = e.values.maxCoeff();
    if (e.values.minCoeff() < -tol.psdTol * lmax)
        throw NotPSD("pickMatrix: P_X has a negative eigenvalue beyond tolerance");

    double cut = tol.rankTol * lmax;
    Eigen::Index m = e.values.size();
    Eigen::VectorXd sqrtv(m), pinvv(m), projv(m);
    int rank = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
        double l = e.values(i);
        if (l > cut) {
            ++rank;
            sqrtv(i) = std::sqrt(l);
            pinvv(i) = 1.0 / std::sqrt(l);
            projv(i) = 1.0;
        } else {
            // sub-cutoff eigenvalues are numerical zeros; keeping their
            // square roots would plant O(sqrt(eps)) mass on ker(P)
            sqrtv(i) = 0.0;
            pinvv(i) = 0.0;
            projv(i) = 0.0;
        }
    }
    PickBundle b;
    b.node = x;
    b.P = p;
    b.sqrtP = e.vectors * sqrtv.asDiagonal() * e.vectors.adjoint();
    b.pinvSqrtP = e.vectors * pinvv.asDiagonal() * e.vectors.adjoint();
    b.projQ = e.vectors * projv.asDiagonal() * e.vectors.adjoint();
    b.rank = rank;
    b.tol = tol;
    return b;
}

/// Truncated series sum_{|w|<=L} vec(X^w) vec(X^w)*, accumulated word by
/// word. Independent oracle for pickMatrix: no inverse, no psi. (Note the
/// un-reshuffled resolvent series is sum conj(X)^w (x) X^w; applying the
/// involution termwise turns each summand into the rank-one vec outer
/// product, which is the form whose range is vec(alg_X).)
inline Matrix pickSeries(const RowTuple& x, int maxLen) {
    Eigen::Index nn = Eigen::Index(x.n) * x.n;
    Matrix acc = Matrix::Zero(nn, nn);
    forEachWordProduct(x, maxLen, [&](const Matrix& xw) {
        Matrix v = vec(xw);
        acc += v * v.adjoint();
    });
    return acc;
}

struct MembershipResult {
    bool member = false;
    double residual = 0.0;  // ||(I - Q_X) vec(Z)||
};

/// Z is in alg_X iff vec(Z) lies in ran(P_X), decided against the bundle's
/// range projection.
inline MembershipResult algMember(const Matrix& z, const PickBundle& b,
                                  const Tolerances& tol = {}) {
    if (z.rows() != b.n() || z.cols() != b.n())
        throw DimensionMismatch("algMember: Z size does not match the node");
    Matrix v = vec(z);
    double res = (v - b.projQ * v).norm();
    return {res <= tol.rankTol * std::max(v.norm(), 1e-300), res};
}

namespace detail {
inline std::vector<std::tuple<int, int, double>> membershipOffenders(
    const PickBundle& b, const BlockTarget& y, const Tolerances& tol) {
    std::vector<std::tuple<int, int, double>> off;
    for (int i = 0; i < y.s; ++i)
        for (int j = 0; j < y.t; ++j) {
            auto m = algMember(y.blocks[i][j], b, tol);
            if (!m.member) off.emplace_back(i, j, m.residual);
        }
    return off;
}

inline void requireMembership(const PickBundle& b, const BlockTarget& y,
                              const Tolerances& tol) {
    if (y.n != b.n())
        throw DimensionMismatch("block target inner size does not match the node");
    auto off = membershipOffenders(b, y, tol);
    if (!off.empty())
        throw NotInAlgebra("target blocks outside alg_X", std::move(off));
}
}  // namespace detail

/// The Hermitian criterion matrix
///   K = P (x) I_s - (I_n (x) Yhat)(P (x) I_t)(I_n (x) Yhat)*,
/// with Yhat the space-outer form of Y.
inline Matrix criterionMatrix(const PickBundle& b, const BlockTarget& y) {
    if (y.n != b.n())
        throw DimensionMismatch("criterionMatrix: target inner size mismatch");
    Matrix yh = y.spaceOuter();
    Matrix iy = kron(identity(b.n()), yh);
    Matrix k = kron(b.P, identity(y.s)) -
               iy * kron(b.P, identity(y.t)) * iy.adjoint();
    return (k + Matrix(k.adjoint())) / 2.0;
}

struct FeasibilityResult {
    bool feasible = false;
    double margin = 0.0;  // smallest eigenvalue of the criterion matrix
};

/// A norm-one interpolant with f(X) = Y exists iff the criterion matrix is
/// PSD. Algebra membership of every block is required first; the two
/// failure modes are reported separately.
inline FeasibilityResult feasible(const PickBundle& b, const BlockTarget& y,
                                  const Tolerances& tol = {}) {
    detail::requireMembership(b, y, tol);
    Matrix k = criterionMatrix(b, y);
    Eigen::SelfAdjointEigenSolver<Matrix> es(k, Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    return {lmin >= -tol.psdTol * scale, lmin};
}

/// The conjugated target (P^{+1/2} (x) I_s)(I_n (x) Yhat)(P^{1/2} (x) I_t).
inline Matrix conjugatedTarget(const PickBundle& b, const BlockTarget& y,
                               const Tolerances& tol = {}) {
    detail::requireMembership(b, y, tol);
    Matrix yh = y.spaceOuter();
    return kron(b.pinvSqrtP, identity(y.s)) * kron(identity(b.n()), yh) *
           kron(b.sqrtP, identity(y.t));
}

/// NP norm of Y at the bundle's node: the minimal H-infinity norm over
/// interpolants, computed as the operator norm of the conjugated target.
inline double npNorm(const PickBundle& b, const BlockTarget& y,
                     const Tolerances& tol = {}) {
    return opNorm(conjugatedTarget(b, y, tol));
}

/// Same quantity through the commutant preconditioner D: with
/// Q = (D P D)^{1/2}, the norm of (Q^+ (x) I_s)(I (x) Yhat)(Q (x) I_t).
inline double npNormPreconditioned(const PickBundle& b, const BlockTarget& y,
                                   const Matrix& d, const Tolerances& tol = {}) {
    Eigen::Index nn = Eigen::Index(b.n()) * b.n();
    if (d.rows() != nn || d.cols() != nn)
        throw DimensionMismatch("npNormPreconditioned: D is not n^2 x n^2");
    double dn = std::max(d.norm(), 1e-300);
    for (const auto& xi : b.node.mats) {
        Matrix a = kron(identity(b.n()), xi);
        if ((d * a - a * d).norm() > 1e-8 * dn)
            throw NotInCommutant("npNormPreconditioned: D does not commute with I (x) X_i");
    }
    {
        auto sv = d.jacobiSvd().singularValues();
        if (sv(sv.size() - 1) <= 1e-12 * sv(0))
            throw NotInvertible("npNormPreconditioned: D numerically singular");
    }
    detail::requireMembership(b, y, tol);
    Matrix dpd = d * b.P * d.adjoint();
    Matrix q = detail::psdSqrt(dpd);
    // pseudoinverse of the root, same relative cutoff as the bundle
    auto e = detail::hermEig(q);
    double cut = std::sqrt(tol.rankTol) * e.values.maxCoeff();
    Eigen::VectorXd inv(e.values.size());
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
        inv(i) = e.values(i) > cut ? 1.0 / e.values(i) : 0.0;
    Matrix qp = e.vectors * inv.asDiagonal() * e.vectors.adjoint();
    Matrix yh = y.spaceOuter();
    return opNorm(kron(qp, identity(y.s)) * kron(identity(b.n()), yh) *
                  kron(q, identity(y.t)));
}

}  // namespace ncpick

#endif
