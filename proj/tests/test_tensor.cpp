#include <catch_amalgamated.hpp>

#include <random>

#include "ncpick/tensor.hpp"
#include "ncpick/zoo.hpp"

using namespace ncpick;

namespace {
Matrix gauss(int r, int c, std::mt19937_64& rng) { return detail::complexGaussian(r, c, rng); }

Matrix unit(int n, int i, int j) {
    Matrix e = Matrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}
}  // namespace

TEST_CASE("vec stacks columns") {
    Matrix a(2, 2);
    a << 1, 2, 3, 4;
    Matrix v = vec(a);
    REQUIRE(v(0, 0) == Complex(1));
    REQUIRE(v(1, 0) == Complex(3));
    REQUIRE(v(2, 0) == Complex(2));
    REQUIRE(v(3, 0) == Complex(4));
    REQUIRE(vec(unit(2, 0, 1))(2, 0) == Complex(1));

    std::mt19937_64 rng(1);
    Matrix b = gauss(5, 5, rng);
    REQUIRE((unvec(vec(b), 5) - b).norm() == 0.0);  // bit-exact round trip
    REQUIRE(unvec(Matrix(Matrix::Zero(4, 1)), 2).norm() == 0.0);
    REQUIRE_THROWS_AS(unvec(Matrix(Matrix::Zero(5, 1)), 2), DimensionMismatch);
}

TEST_CASE("vec identity vec(AXB) = (B^T kron A) vec(X)") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 20; ++k) {
        Matrix a = gauss(3, 3, rng), x = gauss(3, 3, rng), b = gauss(3, 3, rng);
        Matrix lhs = vec(Matrix(a * x * b));
        Matrix rhs = kron(b.transpose(), a) * vec(x);
        REQUIRE((lhs - rhs).norm() < 1e-12 * rhs.norm());
    }
}

TEST_CASE("kron basics") {
    Matrix e = kron(unit(2, 0, 0), unit(2, 1, 1));
    REQUIRE(e(1, 1) == Complex(1));
    REQUIRE(e.cwiseAbs().sum() == 1.0);
    REQUIRE((kron(identity(2), identity(3)) - identity(6)).norm() == 0.0);
    std::mt19937_64 rng(3);
    Matrix a = gauss(2, 2, rng), b = gauss(3, 3, rng), c = gauss(2, 2, rng), d = gauss(3, 3, rng);
    REQUIRE((kron(a, b) * kron(c, d) - kron(Matrix(a * c), Matrix(b * d))).norm() < 1e-12);
}

TEST_CASE("psi on matrix units and identity") {
    // E_11 kron E_22 -> E_21 kron E_21 (1-based indices)
    Matrix got = psi(kron(unit(2, 0, 0), unit(2, 1, 1)));
    REQUIRE((got - kron(unit(2, 1, 0), unit(2, 1, 0))).norm() == 0.0);
    for (int n = 1; n <= 5; ++n)
        REQUIRE((psi(identity(Eigen::Index(n) * n)) - choiMatrix(n)).norm() == 0.0);
}

TEST_CASE("psi is a bit-exact involution") {
    std::mt19937_64 rng(4);
    for (int n = 2; n <= 6; ++n) {
        Matrix a = gauss(n * n, n * n, rng);
        Matrix back = psi(psi(a));
        bool same = true;
        for (Eigen::Index i = 0; i < a.rows() && same; ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                if (back(i, j) != a(i, j)) {
                    same = false;
                    break;
                }
        REQUIRE(same);
    }
}

TEST_CASE("psi rank-one rule and modularity") {
    std::mt19937_64 rng(5);
    for (int n = 2; n <= 4; ++n) {
        Matrix c = gauss(n, n, rng), d = gauss(n, n, rng);
        REQUIRE((psi(kron(c, d)) - Matrix(vec(d) * vec(c).transpose())).norm() < 1e-13);
        Matrix a = gauss(n, n, rng), b = gauss(n, n, rng), u = gauss(n * n, n * n, rng);
        Matrix lhs = psi(kron(a, b) * u * kron(c, d));
        Matrix rhs = kron(d.transpose(), b) * psi(u) * kron(c, a.transpose());
        REQUIRE((lhs - rhs).norm() < 1e-10 * rhs.norm());
    }
}

TEST_CASE("choi matrix structure") {
    REQUIRE(choiMatrix(1)(0, 0) == Complex(1));
    Matrix c2 = choiMatrix(2);
    REQUIRE(c2(0, 0) == Complex(1));
    REQUIRE(c2(0, 3) == Complex(1));
    REQUIRE(c2(3, 0) == Complex(1));
    REQUIRE(c2(3, 3) == Complex(1));
    REQUIRE(c2.cwiseAbs().sum() == 4.0);
    for (int n = 2; n <= 4; ++n) {
        Matrix c = choiMatrix(n);
        REQUIRE((c - Matrix(vec(identity(n)) * vec(identity(n)).transpose())).norm() == 0.0);
        REQUIRE(std::abs(c.trace().real() - double(n)) < 1e-14);
        REQUIRE(c.fullPivLu().rank() == 1);
    }
}

TEST_CASE("commutation matrix swaps kronecker factors") {
    REQUIRE((commutationMatrix(1, 4) - identity(4)).norm() == 0.0);
    std::mt19937_64 rng(6);
    Matrix u = gauss(2, 2, rng), v = gauss(3, 3, rng);
    Matrix q = commutationMatrix(2, 3);
    REQUIRE((q * kron(u, v) * q.transpose() - kron(v, u)).norm() < 1e-12);
    REQUIRE((q * q.transpose() - identity(6)).norm() == 0.0);
    // rectangular form Q_{n,t}(W kron Z)Q_{m,s}^T = Z kron W
    Matrix w = gauss(2, 4, rng), z = gauss(3, 5, rng);
    REQUIRE((commutationMatrix(2, 3) * kron(w, z) * commutationMatrix(4, 5).transpose() -
             kron(z, w))
                .norm() < 1e-12);
}

TEST_CASE("leg permutation") {
    std::mt19937_64 rng(7);
    Matrix a = gauss(2, 2, rng), b = gauss(3, 3, rng);
    Matrix ab = kron(a, b);
    LegShape rs{{2, 3}}, cs{{2, 3}};
    REQUIRE((legPermute(ab, rs, cs, {0, 1}) - ab).norm() == 0.0);
    REQUIRE((legPermute(ab, rs, cs, {1, 0}) - kron(b, a)).norm() == 0.0);
    // two-leg case matches commutation-matrix conjugation
    Matrix m = gauss(6, 6, rng);
    Matrix q = commutationMatrix(2, 3);
    REQUIRE((legPermute(m, rs, cs, {1, 0}) - Matrix(q * m * q.transpose())).norm() < 1e-14);
    // three legs: rotating kron(a,b,c)
    Matrix c = gauss(2, 2, rng);
    Matrix abc = kron(kron(a, b), c);
    LegShape s3{{2, 3, 2}};
    // not bit-exact: the reference kron multiplies the three factors in a
    // different association order
    REQUIRE((legPermute(abc, s3, s3, {2, 0, 1}) - kron(kron(c, a), b)).norm() < 1e-14);
}

TEST_CASE("rectangular psi on kron factors") {
    std::mt19937_64 rng(8);
    int p = 2, q = 3;
    Matrix c = gauss(p, p, rng), d = gauss(q, q, rng);
    Matrix got = psiRect(kron(c, d), p, q);
    REQUIRE((got - Matrix(vec(d) * vec(c).transpose())).norm() < 1e-13);
}
