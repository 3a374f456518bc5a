// Self-verification: randomized identity suites over the tensor
// primitives, the Pick matrix, the boomerang exchange rules, the dilation
// isometry and the scalar collapse to the classical Pick test. Each suite
// reports its worst residual against a fixed tolerance.

#ifndef NCPICK_VERIFY_HPP
#define NCPICK_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "ncpick/asymptotics.hpp"
#include "ncpick/dilation.hpp"
#include "ncpick/pick.hpp"
#include "ncpick/search.hpp"
#include "ncpick/tensor.hpp"
#include "ncpick/types.hpp"
#include "ncpick/word.hpp"
#include "ncpick/zoo.hpp"

namespace ncpick {

struct SuiteResult {
    std::string name;
    bool passed = false;
    double worstResidual = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct VerifyOptions {
    bool full = false;        // full: n up to 5, 100 trials; quick: n up to 3, 10
    uint64_t seed = 20240901;
    bool corruptPsi = false;  // negative-control hook: breaks the involution suite
};

namespace detail {

inline Matrix psiMaybeCorrupt(const Matrix& a, bool corrupt) {
    Matrix p = psi(a);
    if (corrupt && p.size() > 1) p(0, p.cols() - 1) += 0.5;
    return p;
}

inline RowTuple randomContraction(int n, int d, double target, std::mt19937_64& rng) {
    std::vector<Matrix> mats;
    for (int i = 0; i < d; ++i) mats.push_back(complexGaussian(n, n, rng));
    RowTuple x(n, std::move(mats));
    double r = rowNorm(x);
    return r > 1e-12 ? x.scaled(target / r) : x;
}

inline NcPoly randomPoly(int d, int maxDeg, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    NcPoly p(d);
    auto words = wordsUpTo(d, maxDeg);
    std::uniform_int_distribution<size_t> pick(0, words.size() - 1);
    for (int k = 0; k < 5; ++k)
        p.add(words[pick(rng)], Complex(g(rng), g(rng)));
    return p;
}

}  // namespace detail

/// Runs every identity suite; returns one result per suite. Deterministic
/// for a given (options.seed, options.full).
inline std::vector<SuiteResult> runVerify(const VerifyOptions& opt) {
    const int trials = opt.full ? 100 : 10;
    const int nMax = opt.full ? 5 : 3;
    std::vector<SuiteResult> out;

    auto runSuite = [&](const std::string& name, double tol, auto&& body) {
        SuiteResult r;
        r.name = name;
        r.tolerance = tol;
        try {
            std::mt19937_64 rng(detail::splitmix64(opt.seed) ^
                                std::hash<std::string>{}(name));
            r.worstResidual = body(rng);
            r.passed = r.worstResidual <= tol;
        } catch (const Error& e) {
            r.passed = false;
            r.worstResidual = std::numeric_limits<double>::infinity();
            r.note = e.what();
        }
        out.push_back(std::move(r));
    };

    // psi applied twice returns the input bit-exactly (pure permutation)
    runSuite("psi-involution", 0.0, [&](std::mt19937_64& rng) {
        double worst = 0.0;
        for (int k = 0; k < trials; ++k) {
            int n = 2 + int(rng() % uint64_t(std::max(1, (opt.full ? 6 : 3) - 1)));
            Matrix a = detail::complexGaussian(n * n, n * n, rng);
            Matrix twice =
                detail::psiMaybeCorrupt(detail::psiMaybeCorrupt(a, opt.corruptPsi),
                                        opt.corruptPsi);
            double res = 0.0;
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                for (Eigen::Index j = 0; j < a.cols(); ++j)
                    if (twice(i, j) != a(i, j)) res = std::max(res, std::abs(twice(i, j) - a(i, j)));
            worst = std::max(worst, res);
        }
        return worst;
    });

    // [(A (x) B) U (C (x) D)]^psi = (D^T (x) B) U^psi (C (x) A^T)
    runSuite("psi-modularity", 1e-10, [&](std::mt19937_64& rng) {
        double worst = 0.0;
        for (int k = 0; k < trials; ++k) {
            int n = 2 + int(rng() % uint64_t(std::min(nMax, 4) - 1));
            Matrix a = detail::complexGaussian(n, n, rng), b = detail::complexGaussian(n, n, rng);
            Matrix c = detail::complexGaussian(n, n, rng), d = detail::complexGaussian(n, n, rng);
            Matrix u = detail::complexGaussian(n * n, n * n, rng);
            Matrix lhs = detail::psiMaybeCorrupt(kron(a, b) * u * kron(c, d), opt.corruptPsi);
            Matrix rhs = kron(d.transpose(), b) *
                         detail::psiMaybeCorrupt(u, opt.corruptPsi) * kron(c, a.transpose());
            worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
        }
        return worst;
    });

    // vec(AXB) = (B^T (x) A)vec(X); (C (x) D)^psi = vec(D)vec(C)^T;
    // Q_{n,s}(U (x) V)Q_{n,s}^T = V (x) U
    runSuite("vec-kron", 1e-12, [&](std::mt19937_64& rng) {
        double worst = 0.0;
        for (int k = 0; k < trials; ++k) {
            int n = 2 + int(rng() % uint64_t(nMax - 1));
            int s = 2 + int(rng() % uint64_t(nMax - 1));
            Matrix a = detail::complexGaussian(n, n, rng), b = detail::complexGaussian(n, n, rng);
            Matrix x = detail::complexGaussian(n, n, rng);
            worst = std::max(worst,
                             (vec(Matrix(a * x * b)) -
                              Matrix(kron(b.transpose(), a) * vec(x))).norm());
            Matrix c = detail::complexGaussian(n, n, rng), d = detail::complexGaussian(n, n, rng);
            worst = std::max(
                worst, (psi(kron(c, d)) - Matrix(vec(d) * vec(c).transpose())).norm());
            Matrix u = detail::complexGaussian(n, n, rng), v = detail::complexGaussian(s, s, rng);
            Matrix q = commutationMatrix(n, s);
            worst = std::max(worst,
                             (q * kron(u, v) * q.transpose() - kron(v, u)).norm());
        }
        return worst;
    });

    // truncated word series approaches P_X within the geometric tail bound
    runSuite("series-closed-form", 1.0, [&](std::mt19937_64& rng) {
        double worstRel = 0.0;  // residual / tail bound, must stay <= 1
        const int L = 12;
        for (int k = 0; k < trials; ++k) {
            int n = 2 + int(rng() % uint64_t(std::min(nMax, 4) - 1));
            int d = 1 + int(rng() % 2);
            RowTuple x = detail::randomContraction(n, d, 0.5 + 0.3 * double(rng() % 100) / 100.0, rng);
            double r = rowNorm(x) * rowNorm(x);
            double bound = double(n) * std::pow(r, L + 1) / (1.0 - r);
            double res = (pickSeries(x, L) - pickMatrix(x).P).norm();
            worstRel = std::max(worstRel, res / std::max(bound, 1e-300));
        }
        return worstRel;
    });

    // P_X - sum (X_i^T (x) I) P_X (conj(X_i) (x) I) equals the Choi matrix
    runSuite("choi-difference", 1e-9, [&](std::mt19937_64& rng) {
        double worst = 0.0;
        for (int k = 0; k < trials; ++k) {
            int n = 2 + int(rng() % uint64_t(std::min(nMax, 4) - 1));
            int d = 1 + int(rng() % 3);
            RowTuple x = detail::randomContraction(n, d, 0.3 + 0.6 * double(rng() % 100) / 100.0, rng);
            Matrix p = pickMatrix(x).P;
            Matrix acc = p;
            for (const auto& xi : x.mats)
                acc -= kron(xi.transpose(), identity(n)) * p * kron(xi.conjugate(), identity(n));
            worst = std::max(worst, (acc - choiMatrix(n)).norm() / std::max(1.0, p.norm()));
        }
        return worst;
    });

    // B^T (P (x) (H - sum X_i H X_i*)) B recovers H
    runSuite("h-recovery", 1e-9, [&](std::mt19937_64& rng) {
        double worst = 0.0;
        for (int k = 0; k < trials; ++k) {
            int n = 2 + int(rng() % uint64_t(std::min(nMax, 3) - 1));
            int d = 1 + int(rng() % 3);
            RowTuple x = detail::randomContraction(n, d, 0.3 + 0.6 * double(rng() % 100) / 100.0, rng);
            Matrix p = pickMatrix(x).P;
            Matrix h = detail::complexGaussian(n, n, rng);
            h = (h + Matrix(h.adjoint())) / 2.0;
            Matrix stencil = h;
            for (const auto& xi : x.mats) stencil -= xi * h * xi.adjoint();
            Matrix b = boomerang(n);
            Matrix got = b.transpose() * kron(p, stencil) * b;
            worst = std::max(worst, (got - h).norm() / std::max(1.0, h.norm()));
        }
        return worst;
    });

    // boomerang exchange rules, plain and ampliated
    runSuite("boomerang-exchange", 1e-10, [&](std::mt19937_64& rng) {
        double worst = 0.0;
        for (int k = 0; k < trials; ++k) {
            int n = 2 + int(rng() % uint64_t(nMax - 1));
            Matrix b = boomerang(n);
            Matrix c = detail::complexGaussian(n, n, rng);
            worst = std::max(worst, (kron(kron(c, identity(n)), identity(n)) * b -
                                     kron(kron(identity(n), identity(n)), Matrix(c.transpose())) * b)
                                        .norm());
            Matrix a = detail::complexGaussian(n * n, n * n, rng);
            Matrix d = detail::complexGaussian(n, n, rng);
            boomerangSandwich(a, c, d);  // throws on violation

            int s = 1 + int(rng() % 2), t = 1 + int(rng() % 2);
            Matrix bs = ampliatedBoomerang(n, s), bt = ampliatedBoomerang(n, t);
            Matrix z = detail::complexGaussian(n * t, n * s, rng);
            Matrix lhs = kron(Matrix(kron(a, identity(t)) * kron(identity(n), z)), c) * bs;
            Matrix rhs = kron(kron(a, identity(t)), c) * bt * z;
            worst = std::max(worst, (lhs - rhs).norm());
            Matrix w = detail::complexGaussian(n * s, n * t, rng);
            Matrix l2 = bs.transpose() * kron(Matrix(kron(identity(n), w) * kron(a, identity(t))), c);
            Matrix r2 = w * bt.transpose() * kron(kron(a, identity(t)), c);
            worst = std::max(worst, (l2 - r2).norm());
            Matrix j = detail::complexGaussian(n * s, n * s, rng);
            Matrix kk = detail::complexGaussian(n * s, n * s, rng);
            Matrix l3 = bs.transpose() *
                        kron(Matrix(kron(identity(n), j) * kron(a, identity(s)) *
                                    kron(identity(n), kk)),
                             c) *
                        bs;
            Matrix r3 = j * Matrix(bs.transpose() * kron(kron(a, identity(s)), c) * bs) * kk;
            worst = std::max(worst, (l3 - r3).norm());
        }
        return worst;
    });

    // ampliated recovery B_s^T (P (x) I_s (x) stencil(H)) B_s = H (x) I_s
    runSuite("ampliated-recovery", 1e-9, [&](std::mt19937_64& rng) {
        double worst = 0.0;
        for (int k = 0; k < trials; ++k) {
            int n = 2 + int(rng() % uint64_t(std::min(nMax, 3) - 1));
            int s = 1 + int(rng() % 2);
            RowTuple x = detail::randomContraction(n, 2, 0.3 + 0.6 * double(rng() % 100) / 100.0, rng);
            Matrix p = pickMatrix(x).P;
            Matrix h = detail::complexGaussian(n, n, rng);
            Matrix stencil = h;
            for (const auto& xi : x.mats) stencil -= xi * h * xi.adjoint();
            Matrix bs = ampliatedBoomerang(n, s);
            Matrix got = bs.transpose() * kron(kron(p, identity(s)), stencil) * bs;
            worst = std::max(worst, (got - kron(h, identity(s))).norm() / std::max(1.0, h.norm()));
        }
        return worst;
    });

    // V_X is an isometry for random strict row contractions
    runSuite("dilation-isometry", 1e-9, [&](std::mt19937_64& rng) {
        double worst = 0.0;
        for (int k = 0; k < trials; ++k) {
            int n = 2 + int(rng() % uint64_t(std::min(nMax, 3) - 1));
            int d = 1 + int(rng() % 3);
            RowTuple x = detail::randomContraction(n, d, 0.2 + 0.7 * double(rng() % 100) / 100.0, rng);
            auto b = pickMatrix(x);
            auto dd = dilationData(b);
            worst = std::max(
                worst,
                (Matrix(dd.V.adjoint() * dd.V) - identity(Eigen::Index(n) * n)).norm());
        }
        return worst;
    });

    // V* (alpha(Xt) beta(Xt)* (x) I) V = alpha(X) beta(X)* (x) I
    runSuite("mini-dilation", 1e-7, [&](std::mt19937_64& rng) {
        double worst = 0.0;
        for (int k = 0; k < trials; ++k) {
            int n = 2 + int(rng() % uint64_t(std::min(nMax, 3) - 1));
            int d = 1 + int(rng() % 3);
            RowTuple x = detail::randomContraction(n, d, 0.2 + 0.7 * double(rng() % 100) / 100.0, rng);
            auto b = pickMatrix(x);
            auto dd = dilationData(b);
            NcPoly alpha = detail::randomPoly(d, 3, rng);
            NcPoly beta = detail::randomPoly(d, 3, rng);
            worst = std::max(worst, miniDilationCheck(b, dd, alpha, beta));
        }
        return worst;
    });

    // multi-point scalar problems: verdict agrees with the classical Pick
    // matrix PSD test (margins within 1e-8 of zero excused)
    runSuite("scalar-collapse", 0.0, [&](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> ur(-0.9, 0.9);
        int disagreements = 0;
        for (int k = 0; k < trials * 10; ++k) {
            int pts = 2 + int(rng() % 3);
            std::vector<Complex> xs, ys;
            for (int i = 0; i < pts; ++i) {
                xs.emplace_back(ur(rng) * 0.7, ur(rng) * 0.7);
                ys.emplace_back(ur(rng) * 1.5, ur(rng) * 1.5);
            }
            Matrix xd = Matrix::Zero(pts, pts), yd = Matrix::Zero(pts, pts);
            for (int i = 0; i < pts; ++i) {
                xd(i, i) = xs[size_t(i)];
                yd(i, i) = ys[size_t(i)];
            }
            Matrix classical(pts, pts);
            for (int i = 0; i < pts; ++i)
                for (int j = 0; j < pts; ++j)
                    classical(i, j) = (1.0 - ys[size_t(i)] * std::conj(ys[size_t(j)])) /
                                      (1.0 - xs[size_t(i)] * std::conj(xs[size_t(j)]));
            Eigen::SelfAdjointEigenSolver<Matrix> es(
                (classical + Matrix(classical.adjoint())) / 2.0, Eigen::EigenvaluesOnly);
            double classicalMargin = es.eigenvalues().minCoeff();
            auto b = pickMatrix(RowTuple(pts, {xd}));
            auto f = feasible(b, BlockTarget::single(yd));
            bool classicalOk = classicalMargin >= 0.0;
            if (f.feasible != classicalOk &&
                std::min(std::abs(classicalMargin), std::abs(f.margin)) > 1e-8)
                ++disagreements;
        }
        return double(disagreements);
    });

    return out;
}

}  // namespace ncpick

#endif
