#include <catch2/catch_amalgamated.hpp>

#include "homma/linalg.hpp"
#include "homma/sampling.hpp"

using namespace homma;
using Catch::Approx;

namespace {

SymMatrix make2(double a, double b, double c) {
    SymMatrix m(2);
    m.at(0, 0) = a;
    m.at(0, 1) = b;
    m.at(1, 1) = c;
    return m;
}

SymMatrix random_sym(int n, Rng& rng) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.at(i, j) = rng.uniform(-2.0, 2.0);
    return m;
}

} // namespace

TEST_CASE("determinants of small symmetric matrices") {
    CHECK(determinant(make2(0, 1, 0)) == -1.0);
    CHECK(determinant(make2(2, 0, 2)) == 4.0);
    // Hessian of x^2 y at (1,1): [[2,2],[2,0]]
    CHECK(determinant(make2(2, 2, 0)) == -4.0);
    CHECK(determinant(SymMatrix::identity(3)) == 1.0);

    SymMatrix m4(4);
    for (int i = 0; i < 4; ++i) m4.at(i, i) = i + 1.0;
    CHECK(determinant(m4) == Approx(24.0));

    // LU path agrees with the closed forms on random matrices
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        SymMatrix a = random_sym(3, rng);
        const auto dense = a.to_dense();
        const double direct = dense[0] * (dense[4] * dense[8] - dense[5] * dense[7]) -
                              dense[1] * (dense[3] * dense[8] - dense[5] * dense[6]) +
                              dense[2] * (dense[3] * dense[7] - dense[4] * dense[6]);
        CHECK(determinant(a) == Approx(direct).margin(1e-12));
    }
}

TEST_CASE("cofactor matrices") {
    // diagonal
    const SymMatrix d = make2(2, 0, 2);
    const SymMatrix cd = cofactor_matrix(d);
    CHECK(cd(0, 0) == 2.0);
    CHECK(cd(0, 1) == 0.0);
    CHECK(cd(1, 1) == 2.0);

    // [[a,b],[b,c]] -> [[c,-b],[-b,a]]
    const SymMatrix m = make2(1, 2, 5);
    const SymMatrix cm = cofactor_matrix(m);
    CHECK(cm(0, 0) == 5.0);
    CHECK(cm(0, 1) == -2.0);
    CHECK(cm(1, 1) == 1.0);

    const SymMatrix id3 = cofactor_matrix(SymMatrix::identity(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(id3(i, j) == (i == j ? 1.0 : 0.0));

    REQUIRE_THROWS_AS(cofactor_matrix(SymMatrix(1)), OrderError);
}

TEST_CASE("cofactor_matrix(m) * m = det(m) I") {
    Rng rng(23);
    for (const int n : {2, 3, 4}) {
        for (int t = 0; t < 30; ++t) {
            const SymMatrix m = random_sym(n, rng);
            const SymMatrix h = cofactor_matrix(m);
            const double det = determinant(m);
            const double scale = std::max({std::abs(det), std::pow(m.frobenius_norm(), n), 1e-12});
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < n; ++k) s += h(i, k) * m(k, j);
                    const double expect = i == j ? det : 0.0;
                    REQUIRE(std::abs(s - expect) / scale <= 1e-10);
                }
        }
    }
}

TEST_CASE("adjugate quadratic form") {
    // m = 2I, v = (2,2): v' adj(m) v = 16
    const std::vector<double> v{2.0, 2.0};
    CHECK(adjugate_quadratic_form(make2(2, 0, 2), v) == 16.0);

    const std::vector<double> zero{0.0, 0.0};
    CHECK(adjugate_quadratic_form(make2(1, 2, 3), zero) == 0.0);

    // singular matrix with v in its column space: result 0
    const std::vector<double> ones{1.0, 1.0};
    CHECK(adjugate_quadratic_form(make2(1, 1, 1), ones) == 0.0);

    const std::vector<double> wrong{1.0, 2.0, 3.0};
    REQUIRE_THROWS_AS(adjugate_quadratic_form(make2(1, 0, 1), wrong), DimensionError);
}

TEST_CASE("matrix determinant lemma at jet level") {
    // det(s m + c v v') = s^n det(m) + c s^{n-1} v' adj(m) v
    Rng rng(37);
    for (const int n : {2, 3, 4}) {
        for (int t = 0; t < 60; ++t) {
            const SymMatrix m = random_sym(n, rng);
            std::vector<double> v(static_cast<std::size_t>(n));
            for (auto& vi : v) vi = rng.uniform(-2.0, 2.0);
            const double s = rng.uniform_away(-2.0, 2.0, 0.2);
            const double c = rng.uniform(-2.0, 2.0);

            SymMatrix lhs_m(n);
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    lhs_m.at(i, j) = s * m(i, j) + c * v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
            const double lhs = determinant(lhs_m);
            const double rhs = std::pow(s, n) * determinant(m) +
                               c * std::pow(s, n - 1) * adjugate_quadratic_form(m, v);
            const double scale = std::max({std::abs(lhs), std::abs(rhs),
                                           std::pow(std::abs(s) * m.frobenius_norm() + c * 4.0, n), 1e-12});
            REQUIRE(std::abs(lhs - rhs) / scale <= 1e-9);
        }
    }
}

TEST_CASE("packed symmetric storage is exactly symmetric") {
    SymMatrix m(4);
    m.at(2, 1) = 7.5;
    CHECK(m(1, 2) == 7.5);
    CHECK(m(2, 1) == 7.5);
    m.at(0, 3) = -1.0;
    CHECK(m(3, 0) == -1.0);
}
