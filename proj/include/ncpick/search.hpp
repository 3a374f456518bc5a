// Column-row experiments: the deterministic shift/DFT construction whose
// row/column NP-norm ratio approaches sqrt(n), and the randomized search
// loop over normalized Gaussian nodes with eigenvector-selected targets.

#ifndef NCPICK_SEARCH_HPP
#define NCPICK_SEARCH_HPP

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "ncpick/pick.hpp"
#include "ncpick/types.hpp"
#include "ncpick/zoo.hpp"

namespace ncpick {

struct SearchConfig {
    int n = 2;
    int m = 2;
    int d = 2;
    double gamma = 1.3;        // success cutoff, must be < sqrt(m)
    double epsilonMin = 0.0;   // per-trial epsilon drawn in (epsilonMin, epsilonMax]
    double epsilonMax = 1e-2;
    bool fixedEpsilon = false; // use epsilonMax for every trial instead
    bool ablation = false;     // raw i.i.d. tuples scaled to row norm 0.9
    long maxTrials = 100000;
    uint64_t seed = 0;
    int jobs = 1;
    bool timing = false;       // record wall time per trial (off: elapsedMs = 0)
};

struct SearchRecord {
    long trialIndex = 0;
    uint64_t seed = 0;
    double epsilon = 0.0;
    RowTuple X;
    std::vector<Matrix> Ys;
    double rowNormNP = 0.0;
    double colNormNP = 0.0;
    double ratio = 0.0;
    double elapsedMs = 0.0;
    bool valid = false;
};

struct SearchResult {
    bool success = false;  // gamma reached
    SearchRecord best;
    long trialsRun = 0;
    double maxRatio = 0.0;
};

namespace detail {
inline uint64_t splitmix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline uint64_t trialSeed(uint64_t master, long trial) {
    return splitmix64(splitmix64(master) ^ splitmix64(uint64_t(trial) + 1));
}
}  // namespace detail

/// The m eigenvectors of P_X with the smallest eigenvalues above the rank
/// cutoff, reshaped row-major into matrices. Each vector is
/// phase-normalized (first entry of modulus above 1e-8 made real positive)
/// and near-degenerate pairs are ordered lexicographically, so the
/// selection is stable across eigensolver backends.
///
/// The row-major reshape matters: near the boundary the small-eigenvalue
/// vectors factor as conj(u) (x) e_a, and this orientation turns them into
/// targets sharing a common column space, whose row/column NP ratio grows
/// toward sqrt(m). The column-major reshape yields the transposed targets,
/// whose ratio provably tends to 1/sqrt(m) instead, and the search loop
/// would never terminate.
inline std::vector<Matrix> eigenTargetSelect(const PickBundle& b, int m) {
    if (m < 1) throw DimensionMismatch("eigenTargetSelect: m must be >= 1");
    if (b.rank < m) throw RankTooSmall("eigenTargetSelect: rank(P_X) below m");
    auto e = detail::hermEig(b.P);
    double lmax = e.values.maxCoeff();
    double cut = b.tol.rankTol * lmax;
    struct Cand {
        double value;
        Vector vec;
    };
    std::vector<Cand> cands;
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
        if (e.values(i) <= cut) continue;
        Vector v = e.vectors.col(i);
        for (Eigen::Index k = 0; k < v.size(); ++k)
            if (std::abs(v(k)) > 1e-8) {
                v *= std::conj(v(k) / std::abs(v(k)));
                break;
            }
        cands.push_back({e.values(i), std::move(v)});
    }
    auto lexLess = [](const Vector& a, const Vector& b) {
        for (Eigen::Index k = 0; k < a.size(); ++k) {
            if (a(k).real() != b(k).real()) return a(k).real() < b(k).real();
            if (a(k).imag() != b(k).imag()) return a(k).imag() < b(k).imag();
        }
        return false;
    };
    double degTol = 1e-12 * std::max(1.0, lmax);
    std::stable_sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& c) {
        if (std::abs(a.value - c.value) > degTol) return a.value < c.value;
        return lexLess(a.vec, c.vec);
    });
    std::vector<Matrix> ys;
    for (int i = 0; i < m; ++i)
        ys.push_back(unvec(Matrix(cands[size_t(i)].vec), b.n()).transpose());
    return ys;
}

namespace detail {
inline void fillNorms(const PickBundle& b, SearchRecord& r, const Tolerances& tol) {
    r.rowNormNP = npNorm(b, BlockTarget::row(r.Ys), tol);
    r.colNormNP = npNorm(b, BlockTarget::column(r.Ys), tol);
    if (r.colNormNP < 1e-12) throw Error("search: vanishing column NP norm");
    r.ratio = r.rowNormNP / r.colNormNP;
    double cap = std::sqrt(double(r.Ys.size()));
    if (r.ratio > cap + 1e-6)
        throw Error("search: ratio exceeds the sqrt(m) bound, numerical breakdown");
    r.valid = true;
}
}  // namespace detail

/// The explicit construction: X = t * shiftDft(n), Y_i = E_{1i}. The
/// row/column ratio tends to sqrt(n) as t -> 1.
inline SearchRecord deterministicColrow(int n, double t, const Tolerances& tol = {}) {
    if (!(t > 0.0 && t < 1.0)) throw Error("deterministicColrow: t outside (0,1)");
    SearchRecord r;
    r.X = shiftDft(n).scaled(t);
    for (int i = 0; i < n; ++i) {
        Matrix e = Matrix::Zero(n, n);
        e(0, i) = 1.0;
        r.Ys.push_back(e);
    }
    auto b = pickMatrix(r.X, tol);
    detail::fillNorms(b, r, tol);
    return r;
}

namespace detail {
inline SearchRecord runTrial(const SearchConfig& cfg, long idx, const Tolerances& tol) {
    SearchRecord r;
    r.trialIndex = idx;
    r.seed = trialSeed(cfg.seed, idx);
    auto t0 = std::chrono::steady_clock::now();
    try {
        std::mt19937_64 rng(r.seed);
        if (cfg.ablation) {
            r.epsilon = 0.1;  // row norm fixed at 0.9
            std::vector<Matrix> z;
            for (int i = 0; i < cfg.d; ++i)
                z.push_back(complexGaussian(cfg.n, cfg.n, rng));
            double rn = rowNorm(RowTuple(cfg.n, z));
            if (rn < 1e-12) throw Error("search: degenerate raw draw");
            for (auto& zi : z) zi *= 0.9 / rn;
            r.X = RowTuple(cfg.n, std::move(z));
        } else {
            if (cfg.fixedEpsilon) {
                r.epsilon = cfg.epsilonMax;
            } else {
                std::uniform_real_distribution<double> de(cfg.epsilonMin, cfg.epsilonMax);
                do {
                    r.epsilon = de(rng);
                } while (r.epsilon <= 0.0);
            }
            r.X = randomNormalized(cfg.n, cfg.d, r.epsilon, splitmix64(r.seed));
        }
        auto b = pickMatrix(r.X, tol);
        r.Ys = eigenTargetSelect(b, cfg.m);
        fillNorms(b, r, tol);
    } catch (const Error&) {
        r.valid = false;  // logged and skipped by the caller
    }
    if (cfg.timing) {
        r.elapsedMs = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    }
    return r;
}
}  // namespace detail

/// The randomized loop: per-trial seeds are derived from (master seed,
/// trial index), so the emitted record stream is identical for any job
/// count; trials are computed in parallel batches and scanned in order.
/// Stops at the first ratio >= gamma or when maxTrials is exhausted.
inline SearchResult randomSearch(const SearchConfig& cfg,
                                 const std::function<void(const SearchRecord&)>& emit = {},
                                 const Tolerances& tol = {}) {
    if (!(cfg.n >= 1 && cfg.m >= 1 && cfg.d >= 1 && cfg.maxTrials >= 1))
        throw Error("randomSearch: bad sizes");
    if (!(cfg.gamma > 0.0 && cfg.gamma < std::sqrt(double(cfg.m)) + 1e-12))
        throw Error("randomSearch: gamma must lie in (0, sqrt(m))");
    if (!cfg.ablation &&
        !(cfg.epsilonMax > 0.0 && cfg.epsilonMax < 1.0 && cfg.epsilonMin >= 0.0 &&
          cfg.epsilonMin < cfg.epsilonMax))
        throw Error("randomSearch: bad epsilon range");

    int jobs = std::max(1, cfg.jobs);
    long batch = std::max<long>(jobs, 1) * 8;
    SearchResult res;
    for (long base = 0; base < cfg.maxTrials && !res.success; base += batch) {
        long count = std::min(batch, cfg.maxTrials - base);
        std::vector<SearchRecord> recs{size_t(count)};
        if (jobs == 1) {
            for (long k = 0; k < count; ++k)
                recs[size_t(k)] = detail::runTrial(cfg, base + k, tol);
        } else {
            std::atomic<long> next(0);
            std::vector<std::thread> pool;
            for (int w = 0; w < jobs; ++w)
                pool.emplace_back([&] {
                    for (long k; (k = next.fetch_add(1)) < count;)
                        recs[size_t(k)] = detail::runTrial(cfg, base + k, tol);
                });
            for (auto& th : pool) th.join();
        }
        for (long k = 0; k < count; ++k) {
            const SearchRecord& r = recs[size_t(k)];
            ++res.trialsRun;
            if (!r.valid) continue;
            if (emit) emit(r);
            if (r.ratio > res.maxRatio) {
                res.maxRatio = r.ratio;
                res.best = r;
            }
            if (r.ratio >= cfg.gamma) {
                res.success = true;
                break;
            }
        }
    }
    return res;
}

}  // namespace ncpick

#endif
