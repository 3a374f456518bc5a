// Boundary behavior of the Pick matrix: Perron data of the transfer
// matrix, the asymptotic NP norm, condition numbers kappa and gamma,
// direct sums and the finite-prefix interpolating-sequence search.

#ifndef NCPICK_ASYMPTOTICS_HPP
#define NCPICK_ASYMPTOTICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "ncpick/pick.hpp"
#include "ncpick/types.hpp"
#include "ncpick/zoo.hpp"

namespace ncpick {

struct PerronData {
    Matrix W;                    // Hermitian fixed point of H -> sum X_i* H X_i
    double spectralRadius = 0.0; // of the transfer matrix T
    double gapToNext = 0.0;      // distance of the rest of spec(T) from 1
    Complex normalizationCheck;  // vec(W)* vec(I), target 1
};

/// Perron data for an irreducible row co-isometry: the left eigenvector of
/// T at 1, reshaped, Hermitian-symmetrized and trace-normalized.
inline PerronData perron(const RowTuple& x) {
    Matrix g = Matrix::Zero(x.n, x.n);
    for (const auto& m : x.mats) g += m * m.adjoint();
    if ((g - identity(x.n)).norm() > 1e-10)
        throw NotCoisometry("perron: sum X_i X_i* is not the identity");
    {
        auto b = pickMatrix(x.scaled(0.99));
        if (b.rank < x.n * x.n)
            throw NotIrreducible("perron: alg_X is a proper subalgebra of M_n");
    }
    Matrix t = transfer(x);
    Eigen::ComplexEigenSolver<Matrix> ces(t.adjoint());
    if (ces.info() != Eigen::Success) throw Error("perron: eigensolver failed");
    Eigen::VectorXcd evs = ces.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < evs.size(); ++i)
        if (std::abs(evs(i) - Complex(1)) < std::abs(evs(best) - Complex(1))) best = i;
    // the gap that matters for the boundary limit is the distance of the
    // rest of the spectrum from the point 1, not from the unit circle:
    // peripheral eigenvalues away from 1 keep the resolvent bounded
    double nearest = std::numeric_limits<double>::infinity();
    double radius = 0.0;
    for (Eigen::Index i = 0; i < evs.size(); ++i) {
        radius = std::max(radius, std::abs(evs(i)));
        if (i != best) nearest = std::min(nearest, std::abs(evs(i) - Complex(1)));
    }
    if (nearest <= 1e-8)
        throw DegenerateGap("perron: a second eigenvalue of T is too close to 1");

    Vector v = ces.eigenvectors().col(best);
    Complex inner = (Matrix(v).adjoint() * vec(identity(x.n)))(0, 0);
    if (std::abs(inner) < 1e-14) throw Error("perron: degenerate normalization");
    v *= std::conj(1.0 / inner);
    Matrix w = unvec(Matrix(v), x.n);
    w = (w + Matrix(w.adjoint())) / 2.0;
    double tr = w.trace().real();
    if (std::abs(tr) < 1e-14) throw Error("perron: zero-trace fixed point");
    w /= tr;

    PerronData pd;
    pd.W = w;
    pd.spectralRadius = radius;
    pd.gapToNext = nearest;
    pd.normalizationCheck = (vec(w).adjoint() * vec(identity(x.n)))(0, 0);
    return pd;
}

/// The limit of (1-t^2)/t^2 P_{tX} as t -> 1: conj(W) (x) I_n.
inline Matrix anpLimitMatrix(const PerronData& pd) {
    return kron(pd.W.conjugate(), identity(pd.W.rows()));
}

struct AnpTracePoint {
    double t;
    double npNorm;
};

struct AnpResult {
    double value = 0.0;       // np norm at the last grid point
    double targetNorm = 0.0;  // ||Y||
    double drift = 0.0;       // |value - targetNorm|
    std::vector<AnpTracePoint> trace;
};

/// NP norm of Y along the scaled nodes tX; for an irreducible co-isometric
/// node the t -> 1 limit is ||Y||.
inline AnpResult anpNorm(const RowTuple& x, const BlockTarget& y,
                         const std::vector<double>& tGrid,
                         const Tolerances& tol = {}) {
    if (tGrid.empty()) throw Error("anpNorm: empty t grid");
    perron(x);  // validates the irreducible co-isometry precondition
    AnpResult r;
    r.targetNorm = y.norm();
    for (double t : tGrid) {
        if (!(t > 0.0 && t < 1.0)) throw Error("anpNorm: grid point outside (0,1)");
        auto b = pickMatrix(x.scaled(t), tol);
        r.trace.push_back({t, npNorm(b, y, tol)});
    }
    r.value = r.trace.back().npNorm;
    r.drift = std::abs(r.value - r.targetNorm);
    return r;
}

struct ConditionReport {
    double kappaLower = 1.0;  // sampled lower bound on the worst NP/op ratio
    double gammaUpper = 0.0;  // effective condition number achieved
    Matrix bestD;
    int samples = 0;
};

/// Sampled lower bound on kappa(X): max of npNorm(Y)/||Y|| over random
/// alg_X-valued block targets of shapes (1,1),(1,2),(2,1),(2,2); the
/// identity target (ratio 1) is always included.
inline ConditionReport kappaLower(const RowTuple& x, int samples, uint64_t seed,
                                  const Tolerances& tol = {}) {
    auto b = pickMatrix(x, tol);
    std::mt19937_64 rng(seed);
    const std::pair<int, int> shapes[] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    ConditionReport rep;
    rep.kappaLower = 1.0;
    rep.samples = 1;
    for (int k = 0; k < samples; ++k) {
        auto [s, t] = shapes[k % 4];
        std::vector<std::vector<Matrix>> grid(s, std::vector<Matrix>(t));
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < t; ++j) {
                Matrix g = detail::complexGaussian(x.n, x.n, rng);
                grid[i][j] = unvec(Matrix(b.projQ * vec(g)), x.n);
            }
        BlockTarget y(s, t, x.n, std::move(grid));
        double yn = y.norm();
        if (yn < 1e-10) continue;
        rep.kappaLower = std::max(rep.kappaLower, npNorm(b, y, tol) / yn);
        ++rep.samples;
    }
    return rep;
}

/// Real basis of the Hermitian part of the commutant of {I_n (x) X_i},
/// found as the nullspace of the commutator equations.
inline std::vector<Matrix> commutantHermitianBasis(const RowTuple& x) {
    int nn = x.n * x.n;
    int params = nn * nn;  // real dimension of Hermitian nn x nn matrices
    std::vector<Matrix> units;
    units.reserve(size_t(params));
    for (int i = 0; i < nn; ++i) {
        Matrix e = Matrix::Zero(nn, nn);
        e(i, i) = 1.0;
        units.push_back(e);
    }
    for (int i = 0; i < nn; ++i)
        for (int j = i + 1; j < nn; ++j) {
            Matrix e = Matrix::Zero(nn, nn);
            e(i, j) = e(j, i) = 1.0 / std::sqrt(2.0);
            units.push_back(e);
            Matrix f = Matrix::Zero(nn, nn);
            f(i, j) = Complex(0, 1.0 / std::sqrt(2.0));
            f(j, i) = Complex(0, -1.0 / std::sqrt(2.0));
            units.push_back(f);
        }
    RealMatrix sys(2 * x.d * nn * nn, params);
    for (int p = 0; p < params; ++p) {
        int r = 0;
        for (const auto& xi : x.mats) {
            Matrix a = kron(identity(x.n), xi);
            Matrix c = units[size_t(p)] * a - a * units[size_t(p)];
            for (int u = 0; u < nn; ++u)
                for (int v = 0; v < nn; ++v) {
                    sys(r++, p) = c(u, v).real();
                    sys(r++, p) = c(u, v).imag();
                }
        }
    }
    Eigen::JacobiSVD<RealMatrix> svd(sys, Eigen::ComputeThinV);
    auto sv = svd.singularValues();
    double cut = 1e-8 * std::max(1.0, double(sv.size() ? sv(0) : 0.0));
    std::vector<Matrix> basis;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > cut) continue;
        Matrix h = Matrix::Zero(nn, nn);
        for (int p = 0; p < params; ++p) h += svd.matrixV()(p, k) * units[size_t(p)];
        basis.push_back(h);
    }
    return basis;
}

namespace detail {
inline double condOf(const Matrix& m) {
    auto sv = m.jacobiSvd().singularValues();
    double smin = sv(sv.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}
}  // namespace detail

/// Heuristic minimization of cond(D P_X D*) over invertible commutant D,
/// by accepted-improvement multiplicative coordinate updates along a
/// Hermitian commutant basis. Deterministic given the seed; the result is
/// never worse than the D = I value sqrt(cond(P_X)).
inline ConditionReport gammaEffective(const RowTuple& x, int budget,
                                      uint64_t seed, const Tolerances& tol = {}) {
    auto b = pickMatrix(x, tol);
    int nn = x.n * x.n;
    if (b.rank < nn) throw NotFullRank("gammaEffective: P_X is rank deficient");
    auto basis = commutantHermitianBasis(x);
    Matrix d = identity(nn);
    double best = detail::condOf(b.P);
    std::mt19937_64 rng(seed);
    const double steps[] = {0.5, 0.2, 0.05, -0.5, -0.2, -0.05};
    for (int it = 0; it < budget && !basis.empty(); ++it) {
        const Matrix& h = basis[rng() % basis.size()];
        double eps = steps[rng() % 6];
        Matrix expo = (eps / std::max(1.0, h.norm())) * h;
        Matrix trial = d * Matrix(expo.exp());
        double c = detail::condOf(trial * b.P * trial.adjoint());
        if (c < best) {
            best = c;
            d = trial;
        }
    }
    ConditionReport rep;
    rep.gammaUpper = std::sqrt(best);
    rep.bestD = d;
    rep.samples = budget;
    return rep;
}

/// Coordinatewise block-diagonal direct sum of two tuples with the same d.
inline RowTuple directSum(const RowTuple& a, const RowTuple& b) {
    if (a.d != b.d) throw DimensionMismatch("directSum: letter counts differ");
    std::vector<Matrix> mats;
    for (int i = 0; i < a.d; ++i) {
        Matrix m = Matrix::Zero(a.n + b.n, a.n + b.n);
        m.topLeftCorner(a.n, a.n) = a.mats[size_t(i)];
        m.bottomRightCorner(b.n, b.n) = b.mats[size_t(i)];
        mats.push_back(m);
    }
    return RowTuple(a.n + b.n, std::move(mats));
}

struct DirectSumLimitPoint {
    double t;
    double distance;     // || Ptilde(t) - diag(P_{X1}, I) ||
    double offGridNorm;  // mass outside the four-block pattern (should be ~0)
};

namespace detail {
// vec-coordinates of the two diagonal-block pairs inside the vec space of
// M_{n1+n2}; first block then second, column-major within each.
inline std::vector<Eigen::Index> diagPairIndices(int n1, int n2) {
    int n = n1 + n2;
    std::vector<Eigen::Index> idx;
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n1; ++i) idx.push_back(Eigen::Index(j) * n + i);
    for (int j = n1; j < n; ++j)
        for (int i = n1; i < n; ++i) idx.push_back(Eigen::Index(j) * n + i);
    return idx;
}
}  // namespace detail

/// Direct-sum boundary limit: after regrouping to the four-block layout
/// and preconditioning by diag(1, sqrt(n2 (1-t^2))), the Pick matrix of
/// X1 (+) tX2 approaches diag(P_{X1}, I) along the grid.
inline std::vector<DirectSumLimitPoint> directSumLimitCheck(
    const RowTuple& x1, const RowTuple& x2, const std::vector<double>& tGrid,
    const Tolerances& tol = {}) {
    if (!(rowNorm(x1) < 1.0 - 1e-12))
        throw Error("directSumLimitCheck: X1 must be a strict row contraction");
    perron(x2);  // validates irreducible co-isometry
    Matrix p1 = pickMatrix(x1, tol).P;
    auto idx = detail::diagPairIndices(x1.n, x2.n);
    int m1 = x1.n * x1.n, m2 = x2.n * x2.n;
    Matrix ref = Matrix::Zero(m1 + m2, m1 + m2);
    ref.topLeftCorner(m1, m1) = p1;
    ref.bottomRightCorner(m2, m2) = identity(m2);
    std::vector<DirectSumLimitPoint> out;
    for (double t : tGrid) {
        RowTuple xs = directSum(x1, x2.scaled(t));
        Matrix p = pickMatrix(xs, tol).P;
        Matrix phat(idx.size(), idx.size());
        for (size_t r = 0; r < idx.size(); ++r)
            for (size_t c = 0; c < idx.size(); ++c) phat(r, c) = p(idx[r], idx[c]);
        double total = p.norm();
        double kept = phat.norm();
        double off = std::sqrt(std::max(0.0, total * total - kept * kept));
        Eigen::VectorXd dv(idx.size());
        double w = std::sqrt(double(x2.n) * (1.0 - t * t));
        for (size_t r = 0; r < idx.size(); ++r)
            dv(Eigen::Index(r)) = r < size_t(m1) ? 1.0 : w;
        Matrix ptilde = dv.asDiagonal() * phat * dv.asDiagonal();
        out.push_back({t, opNorm(ptilde - ref), off});
    }
    return out;
}

struct PrefixCertificate {
    std::vector<double> scales;  // t_i per node
    double maxSampledNpNorm = 0.0;
    double slack = 0.0;
    std::vector<RowTuple> nodes;  // the scaled nodes t_i U^{(i)}
};

/// Finite-prefix interpolating-sequence search: pick irreducible
/// co-isometric nodes of the requested sizes, then push scales toward 1,
/// one node at a time, until every sampled block-diagonal target with
/// ||Y_i|| <= rho_i has NP norm at most 1 - tolSlack.
inline PrefixCertificate interpolatingPrefix(const std::vector<double>& rhos,
                                             const std::vector<int>& ns,
                                             double tolSlack, uint64_t seed,
                                             int budget = 64,
                                             const Tolerances& tol = {}) {
    if (rhos.size() != ns.size() || rhos.empty())
        throw DimensionMismatch("interpolatingPrefix: list sizes mismatch");
    for (double r : rhos)
        if (!(r >= 0.0 && r < 1.0))
            throw Error("interpolatingPrefix: rho outside [0,1)");
    size_t m = rhos.size();
    std::vector<RowTuple> units;
    for (int n : ns) {
        if (n >= 2) {
            units.push_back(shiftDft(n));
        } else {
            double w = 1.0 / std::sqrt(2.0);
            units.push_back(
                RowTuple(1, {Matrix::Constant(1, 1, w), Matrix::Constant(1, 1, w)}));
        }
    }
    bool allZero = true;
    for (double r : rhos) allZero = allZero && r == 0.0;

    std::vector<double> scales(m, 0.9);
    const int samplesPerRound = 16;
    std::mt19937_64 rng(seed);

    auto assemble = [&](size_t upTo) {
        RowTuple node = units[0].scaled(scales[0]);
        for (size_t i = 1; i <= upTo; ++i)
            node = directSum(node, units[i].scaled(scales[i]));
        return node;
    };

    // worst sampled NP norm over block-diagonal targets for the prefix 0..upTo
    auto worstSampled = [&](size_t upTo, uint64_t roundSeed) {
        if (allZero) return 0.0;
        RowTuple node = assemble(upTo);
        auto b = pickMatrix(node, tol);
        std::mt19937_64 local(roundSeed);
        double worst = 0.0;
        for (int s = 0; s < samplesPerRound; ++s) {
            Matrix y = Matrix::Zero(node.n, node.n);
            int off = 0;
            for (size_t i = 0; i <= upTo; ++i) {
                if (rhos[i] > 0.0) {
                    Matrix g = detail::complexGaussian(ns[i], ns[i], local);
                    double gn = opNorm(g);
                    if (gn > 1e-12) y.block(off, off, ns[i], ns[i]) = (rhos[i] / gn) * g;
                }
                off += ns[i];
            }
            if (!algMember(y, b, tol).member) continue;
            worst = std::max(worst, npNorm(b, BlockTarget::single(y), tol));
        }
        return worst;
    };

    int spent = 0;
    double finalWorst = 0.0;
    for (size_t k = 0; k < m; ++k) {
        for (;;) {
            double worst = worstSampled(k, rng());
            if (worst + tolSlack <= 1.0) {
                if (k == m - 1) finalWorst = worst;
                break;
            }
            if (++spent > budget)
                throw BudgetExhausted("interpolatingPrefix: no certifying scales found");
            scales[k] = 1.0 - (1.0 - scales[k]) / 2.0;
            if (scales[k] > 1.0 - 1e-5) scales[k] = 1.0 - 1e-5;
        }
    }

    PrefixCertificate cert;
    cert.scales = scales;
    cert.slack = tolSlack;
    cert.maxSampledNpNorm = finalWorst;
    for (size_t i = 0; i < m; ++i) cert.nodes.push_back(units[i].scaled(scales[i]));
    return cert;
}

}  // namespace ncpick

#endif
