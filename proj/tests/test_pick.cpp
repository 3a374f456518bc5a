#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ncpick/pick.hpp"
#include "ncpick/tensor.hpp"
#include "ncpick/word.hpp"
#include "ncpick/zoo.hpp"

using namespace ncpick;

namespace {
RowTuple randContraction(int n, int d, double target, std::mt19937_64& rng) {
    std::vector<Matrix> ms;
    for (int i = 0; i < d; ++i) ms.push_back(detail::complexGaussian(n, n, rng));
    RowTuple x(n, std::move(ms));
    return x.scaled(target / rowNorm(x));
}

RowTuple scalarNode(Complex x) { return RowTuple(1, {Matrix::Constant(1, 1, x)}); }

BlockTarget scalarTarget(Complex y) {
    return BlockTarget::single(Matrix::Constant(1, 1, y));
}
}  // namespace

TEST_CASE("rowNorm") {
    RowTuple zeros(3, {Matrix::Zero(3, 3), Matrix::Zero(3, 3)});
    REQUIRE(rowNorm(zeros) == 0.0);
    REQUIRE(std::abs(rowNorm(shiftDft(3)) - 1.0) < 1e-14);
    std::mt19937_64 rng(21);
    RowTuple x = randContraction(3, 2, 0.7, rng);
    REQUIRE(std::abs(rowNorm(x.scaled(0.37)) - 0.37 * rowNorm(x)) < 1e-12);
}

TEST_CASE("transfer matrix") {
    REQUIRE(std::abs(transfer(scalarNode(Complex(0.5, 0.25)))(0, 0) -
                     Complex(std::norm(Complex(0.5, 0.25)))) < 1e-15);
    Matrix t3 = transfer(shiftDft(3));
    REQUIRE((t3 * vec(identity(3)) - vec(identity(3))).norm() < 1e-12);
    Matrix tc = transfer(choiPoint(2));
    REQUIRE((tc - choiMatrix(2) / 2.0).norm() < 1e-13);
    REQUIRE((tc * tc - tc).norm() < 1e-12);
}

TEST_CASE("pickMatrix scalar and Choi closed forms") {
    auto b = pickMatrix(scalarNode(0.5));
    REQUIRE(std::abs(b.P(0, 0).real() - 4.0 / 3.0) < 1e-14);
    REQUIRE(std::abs(b.P(0, 0).imag()) < 1e-16);

    auto bc = pickMatrix(choiPoint(2).scaled(0.8));
    Matrix closed = choiMatrix(2) + (8.0 / 9.0) * identity(4);
    REQUIRE((bc.P - closed).norm() < 1e-10 * closed.norm());

    REQUIRE_THROWS_AS(pickMatrix(shiftDft(2)), SingularResolvent);
}

TEST_CASE("pickSeries oracle") {
    // the empty-word term is vec(I)vec(I)* = C_n, which is also P at X = 0
    REQUIRE((pickSeries(RowTuple(2, {Matrix::Zero(2, 2)}), 0) - choiMatrix(2)).norm() == 0.0);
    REQUIRE(std::abs(pickSeries(scalarNode(0.5), 3)(0, 0).real() - 85.0 / 64.0) < 1e-14);

    std::mt19937_64 rng(22);
    const int L = 12;
    for (int k = 0; k < 10; ++k) {
        RowTuple x = randContraction(3, 2, 0.55 + 0.04 * k, rng);
        double r = rowNorm(x) * rowNorm(x);
        double bound = double(x.n) * std::pow(r, L + 1) / (1.0 - r);
        REQUIRE((pickSeries(x, L) - pickMatrix(x).P).norm() <= bound + 1e-12);
    }
}

TEST_CASE("truncated conjugation form of the series") {
    // sum_{|w|<=L} (I kron X)^w C_n (I kron X)^{w*} equals the word series
    std::mt19937_64 rng(23);
    RowTuple x = randContraction(2, 2, 0.7, rng);
    const int L = 8;
    Matrix acc = Matrix::Zero(4, 4);
    for (const auto& w : wordsUpTo(2, L)) {
        Matrix m = identity(4);
        for (int letter : w) m = m * kron(identity(2), x.mats[size_t(letter) - 1]);
        acc += m * choiMatrix(2) * m.adjoint();
    }
    REQUIRE((acc - pickSeries(x, L)).norm() < 1e-10 * acc.norm());
}

TEST_CASE("bundle internal consistency") {
    std::mt19937_64 rng(24);
    RowTuple x = randContraction(3, 2, 0.8, rng);
    auto b = pickMatrix(x);
    REQUIRE((b.P - Matrix(b.P.adjoint())).norm() < 1e-12 * b.P.norm());
    REQUIRE((b.sqrtP * b.sqrtP - b.P).norm() < 1e-10 * b.P.norm());
    REQUIRE((b.pinvSqrtP * b.sqrtP - b.projQ).norm() < 1e-10);
    REQUIRE((b.sqrtP * b.pinvSqrtP - b.projQ).norm() < 1e-10);
    REQUIRE((b.projQ * b.projQ - b.projQ).norm() < 1e-10);
    REQUIRE((b.projQ - Matrix(b.projQ.adjoint())).norm() < 1e-10);
}

TEST_CASE("choi difference identity") {
    std::mt19937_64 rng(25);
    for (int k = 0; k < 10; ++k) {
        int n = 2 + int(rng() % 3);
        int d = 1 + int(rng() % 3);
        RowTuple x = randContraction(n, d, 0.3 + 0.06 * k, rng);
        Matrix p = pickMatrix(x).P;
        Matrix acc = p;
        for (const auto& xi : x.mats)
            acc -= kron(xi.transpose(), identity(n)) * p * kron(xi.conjugate(), identity(n));
        REQUIRE((acc - choiMatrix(n)).norm() < 1e-9 * std::max(1.0, p.norm()));
    }
}

TEST_CASE("algebra membership") {
    Matrix diag = Matrix::Zero(2, 2);
    diag(1, 1) = 0.5;
    auto b = pickMatrix(RowTuple(2, {diag}));
    REQUIRE(b.rank == 2);
    REQUIRE(algMember(identity(2), b).member);
    Matrix e11 = Matrix::Zero(2, 2), e12 = Matrix::Zero(2, 2);
    e11(0, 0) = 1.0;
    e12(0, 1) = 1.0;
    REQUIRE(algMember(e11, b).member);
    REQUIRE_FALSE(algMember(e12, b).member);

    auto bs = pickMatrix(shiftDft(2).scaled(0.9));
    REQUIRE(bs.rank == 4);
    std::mt19937_64 rng(26);
    REQUIRE(algMember(detail::complexGaussian(2, 2, rng), bs).member);
}

TEST_CASE("criterion matrix scalar cases and word oracle") {
    {
        auto b = pickMatrix(scalarNode(0.0));
        Matrix k = criterionMatrix(b, scalarTarget(Complex(0.6)));
        REQUIRE(std::abs(k(0, 0).real() - (1.0 - 0.36)) < 1e-14);
    }
    {
        auto b = pickMatrix(scalarNode(Complex(0.3, 0.2)));
        Complex x(0.3, 0.2), y(0.4, -0.1);
        Matrix k = criterionMatrix(b, scalarTarget(y));
        double expect = (1.0 - std::norm(y)) / (1.0 - std::norm(x));
        REQUIRE(std::abs(k(0, 0).real() - expect) < 1e-12);
    }
    // brute-force Choi oracle for the completely positive map
    //   Phi(H) = sum_w (X^w H X^{w*}) kron I_s - Yhat (...t) Yhat*:
    // K must equal sum_ij E_ij kron Phi(E_ij), truncated with a
    // geometric tail
    std::mt19937_64 rng(27);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 2;
        RowTuple x = randContraction(n, 2, 0.55, rng);
        auto b = pickMatrix(x);
        int s = 1 + int(rng() % 2), t = 1 + int(rng() % 2);
        std::vector<std::vector<Matrix>> grid(static_cast<size_t>(s));
        for (auto& row : grid)
            for (int j = 0; j < t; ++j) {
                Matrix g = detail::complexGaussian(n, n, rng);
                row.push_back(unvec(Matrix(b.projQ * vec(g)), n));
            }
        BlockTarget y(s, t, n, grid);
        Matrix yh = y.spaceOuter();
        const int L = 18;
        // sij = sum_{|w|<=L} X^w E_ij X^{w*}
        std::vector<Matrix> sij(size_t(n) * n, Matrix::Zero(n, n));
        forEachWordProduct(x, L, [&](const Matrix& xw) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    sij[size_t(i) * n + j] += xw.col(i) * xw.col(j).adjoint();
        });
        Matrix acc = Matrix::Zero(Eigen::Index(n) * n * s, Eigen::Index(n) * n * s);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Matrix e = Matrix::Zero(n, n);
                e(i, j) = 1.0;
                const Matrix& w = sij[size_t(i) * n + j];
                Matrix phi = kron(w, identity(s)) -
                             yh * kron(w, identity(t)) * yh.adjoint();
                acc += kron(e, phi);
            }
        Matrix k = criterionMatrix(b, y);
        double r = rowNorm(x) * rowNorm(x);
        double tail = 4.0 * double(n) * n * (1.0 + yh.squaredNorm()) *
                      std::pow(r, L + 1) / (1.0 - r);
        REQUIRE((acc - k).norm() <= tail + 1e-9);
    }
}

TEST_CASE("feasibility verdicts") {
    auto b0 = pickMatrix(scalarNode(0.0));
    auto f1 = feasible(b0, scalarTarget(0.9));
    REQUIRE(f1.feasible);
    REQUIRE(std::abs(f1.margin - 0.19) < 1e-12);
    auto f2 = feasible(b0, scalarTarget(1.1));
    REQUIRE_FALSE(f2.feasible);
    REQUIRE(std::abs(f2.margin + 0.21) < 1e-12);
    auto f3 = feasible(b0, scalarTarget(0.5));
    REQUIRE(f3.feasible);
    REQUIRE(std::abs(f3.margin - 0.75) < 1e-12);
    auto f4 = feasible(b0, scalarTarget(2.0));
    REQUIRE_FALSE(f4.feasible);

    Matrix xd = Matrix::Zero(2, 2), yd = Matrix::Zero(2, 2);
    xd(1, 1) = 0.5;
    yd(1, 1) = 0.5;
    auto bd = pickMatrix(RowTuple(2, {xd}));
    auto fd = feasible(bd, BlockTarget::single(yd));
    REQUIRE(fd.feasible);
    REQUIRE(std::abs(fd.margin) < 1e-9);  // classical 2-point matrix is singular PSD

    Matrix e12 = Matrix::Zero(2, 2);
    e12(0, 1) = 1.0;
    REQUIRE_THROWS_AS(feasible(bd, BlockTarget::single(e12)), NotInAlgebra);
}

TEST_CASE("conjugated target and NP norm") {
    auto b0 = pickMatrix(scalarNode(0.0));
    REQUIRE(std::abs(conjugatedTarget(b0, scalarTarget(Complex(0.3, 0.4)))(0, 0) -
                     Complex(0.3, 0.4)) < 1e-14);
    REQUIRE(std::abs(npNorm(b0, scalarTarget(Complex(0.3, 0.4))) - 0.5) < 1e-12);

    // Y = I collapses to the range projection
    std::mt19937_64 rng(28);
    RowTuple x = randContraction(2, 2, 0.7, rng);
    auto b = pickMatrix(x);
    REQUIRE((conjugatedTarget(b, BlockTarget::single(identity(2))) - b.projQ).norm() < 1e-9);

    // two-point diagonal: minimal norm exactly 1
    Matrix xd = Matrix::Zero(2, 2), yd = Matrix::Zero(2, 2);
    xd(1, 1) = 0.5;
    yd(1, 1) = 0.5;
    auto bd = pickMatrix(RowTuple(2, {xd}));
    REQUIRE(std::abs(npNorm(bd, BlockTarget::single(yd)) - 1.0) < 1e-8);
}

TEST_CASE("feasibility and NP norm duality over a c grid") {
    std::mt19937_64 rng(29);
    RowTuple x = shiftDft(2).scaled(0.9);
    auto b = pickMatrix(x);
    for (int k = 0; k < 5; ++k) {
        Matrix y = detail::complexGaussian(2, 2, rng);
        double v = npNorm(b, BlockTarget::single(y));
        for (double c : {0.5 * v, 0.9 * v, 0.999 * v, 1.001 * v, 1.1 * v, 2.0 * v}) {
            bool ok = feasible(b, BlockTarget::single(Matrix(y / c))).feasible;
            bool predict = v <= c * (1.0 + 1e-7);
            if (std::abs(v - c) > 1e-6 * v) REQUIRE(ok == predict);
        }
    }
}

TEST_CASE("NP norm floor and unitary invariance") {
    std::mt19937_64 rng(30);
    for (int k = 0; k < 5; ++k) {
        RowTuple x = shiftDft(2).scaled(0.8);
        auto b = pickMatrix(x);
        Matrix y = detail::complexGaussian(2, 2, rng);
        BlockTarget yt = BlockTarget::single(y);
        double v = npNorm(b, yt);
        REQUIRE(v >= yt.norm() - 1e-8);

        // random unitary from QR of a Gaussian
        Eigen::HouseholderQR<Matrix> qr(detail::complexGaussian(2, 2, rng));
        Matrix u = qr.householderQ();
        std::vector<Matrix> cm;
        for (const auto& xi : x.mats) cm.push_back(u.adjoint() * xi * u);
        auto bu = pickMatrix(RowTuple(2, std::move(cm)));
        double vu = npNorm(bu, BlockTarget::single(Matrix(u.adjoint() * y * u)));
        REQUIRE(std::abs(v - vu) < 1e-8 * std::max(1.0, v));
    }
}

TEST_CASE("preconditioned NP norm") {
    std::mt19937_64 rng(31);
    RowTuple x = shiftDft(2).scaled(0.9);
    auto b = pickMatrix(x);
    Matrix y = detail::complexGaussian(2, 2, rng);
    BlockTarget yt = BlockTarget::single(y);
    double v = npNorm(b, yt);
    REQUIRE(std::abs(npNormPreconditioned(b, yt, identity(4)) - v) < 1e-9 * v);
    REQUIRE(std::abs(npNormPreconditioned(b, yt, Matrix(2.0 * identity(4))) - v) < 1e-8 * v);
    // D outside the commutant is rejected
    Matrix bad = identity(4);
    bad(0, 0) = 2.0;
    REQUIRE_THROWS_AS(npNormPreconditioned(b, yt, bad), NotInCommutant);
    REQUIRE_THROWS_AS(npNormPreconditioned(b, yt, Matrix(Matrix::Zero(4, 4))),
                      NotInvertible);
}
