#include <catch2/catch_amalgamated.hpp>

#include "homma/battery.hpp"
#include "homma/homogeneity.hpp"
#include "homma/parse.hpp"

using namespace homma;
using Catch::Approx;

TEST_CASE("euler_residual hand values") {
    const VarSpec xy({"x", "y"});
    const std::vector<double> p12{1.0, 2.0};
    const std::vector<double> p11{1.0, 1.0};
    CHECK(euler_residual(parse("x^2*y", xy), p12, 3.0) == Approx(0.0).margin(1e-14));
    CHECK(euler_residual(parse("x + y^2", xy), p11, 1.0) == Approx(0.5));
    CHECK(euler_residual(parse("2*x + 3*y", xy), std::vector<double>{0.7, 1.9}, 1.0) ==
          Approx(0.0).margin(1e-15));
}

TEST_CASE("estimate_degree on monomials and non-homogeneous functions") {
    const VarSpec xy({"x", "y"});

    const auto cd = estimate_degree(parse("x^0.3 * y^0.7", xy), 2, 20);
    CHECK(cd.degree == Approx(1.0).margin(1e-12));
    CHECK(cd.spread <= 1e-12);
    CHECK(cd.homogeneous());

    const auto sq = estimate_degree(parse("x^2 + y^2", xy), 2, 20);
    CHECK(sq.degree == Approx(2.0).margin(1e-10));
    CHECK(sq.homogeneous());

    const auto bad = estimate_degree(parse("x + y^2", xy), 2, 20);
    CHECK(bad.spread > 1e-7);
    CHECK_FALSE(bad.homogeneous());

    REQUIRE_THROWS_AS(estimate_degree(parse("x - y", xy),
                                      std::vector<std::vector<double>>{{1.0, 1.0}}),
                      ZeroValue);
}

TEST_CASE("second_euler_residual hand values") {
    const VarSpec xy({"x", "y"});
    const std::vector<double> p{1.0, 1.0};
    CHECK(second_euler_residual(parse("x^2 + y^2", xy), p, 2.0) == Approx(0.0).margin(1e-14));
    CHECK(second_euler_residual(parse("2*x + 3*y", xy), p, 1.0) == Approx(0.0).margin(1e-14));
    CHECK(second_euler_residual(parse("x^2*y", xy), p, 3.0) == Approx(0.0).margin(1e-14));
}

TEST_CASE("mrs hand values") {
    const VarSpec xy({"x", "y"});
    const std::vector<double> p{1.0, 1.0};
    CHECK(mrs(parse("x^0.3 * y^0.7", xy), p, 0, 1) == Approx(0.3 / 0.7).epsilon(1e-12));
    CHECK(mrs(parse("2*x + 3*y", xy), std::vector<double>{1.7, 0.4}, 0, 1) == Approx(2.0 / 3.0));
    CHECK(mrs(parse("ln(x) + y", xy), p, 1, 1) == 1.0); // i = j
    REQUIRE_THROWS_AS(mrs(parse("x^2", xy), std::vector<double>{1.0, 1.0}, 0, 1), ZeroDerivative);
}

TEST_CASE("mrs degree-zero residual separates homothetic from non-homothetic") {
    const VarSpec xy({"x", "y"});
    const std::vector<double> p{1.0, 1.0};
    // (x^0.3 y^0.7)^3 is homothetic
    CHECK(mrs_degree_zero_residual(parse("(x^0.3 * y^0.7)^3", xy), p, 2.0) <= 1e-10);
    // perfect substitutes have constant MRS
    CHECK(mrs_degree_zero_residual(parse("2*x + 3*y", xy), p, 7.0) == Approx(0.0).margin(1e-15));
    // x + y^2: MRS at (1,1) is 1/2, at (2,2) is 1/4 -> residual 0.5
    CHECK(mrs_degree_zero_residual(parse("x + y^2", xy), p, 2.0) == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("homothetic battery has degree-zero MRS") {
    Rng rng(808);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + rng.index(3);
        const Expr h = battery::lin_hom(n, t, rng);
        const OuterFamily outer = battery::random_outer(rng);
        const Expr f = compose(outer, h);
        const auto p = rng.point(n);
        for (const double scale : {0.5, 2.0, 10.0}) {
            INFO("t=" << t << " n=" << n << " outer " << outer.describe());
            REQUIRE(mrs_degree_zero_residual(f, p, scale) <= 1e-9);
        }
    }
}

TEST_CASE("radial affinity accepts alpha*(linearly homogeneous)+beta and rejects others") {
    const VarSpec xy({"x", "y"});
    const std::vector<double> p{1.0, 1.0};

    CHECK(radial_affinity_residual(parse("5 + 2*x + 3*y", xy), p) <= 1e-12);
    CHECK(radial_affinity_residual(parse("3*sqrt(x*y) + 1", xy), p) <= 1e-10);

    const std::vector<double> ts{1.0, 2.0, 3.0};
    CHECK(radial_affinity_residual(parse("x^2 + y^2", xy), p, ts) > 1e-3);
    CHECK(radial_affinity_residual(parse("x + y^2", xy), p, ts) > 1e-3);

    REQUIRE_THROWS_AS(radial_affinity_residual(parse("x + y", xy), p, std::vector<double>{1.0, 2.0}),
                      Error);

    // battery sweep: members stay below 1e-8, non-members above 1e-3
    Rng rng(55);
    for (int t = 0; t < 15; ++t) {
        const int n = 2 + rng.index(2);
        const Expr h = battery::lin_hom(n, t, rng);
        const Expr f = Expr::constant(rng.uniform_away(-2.0, 2.0, 0.3)) * h +
                       Expr::constant(rng.uniform(-3.0, 3.0));
        REQUIRE(radial_affinity_residual(f, rng.point(n)) <= 1e-8);
    }
    const VarSpec xyz({"x", "y", "z"});
    for (const char* bad : {"x^2 + y^2", "exp(x + y)", "ln(x*y)", "(2*x + 3*y)^2"}) {
        REQUIRE(radial_affinity_residual(parse(bad, xy), p) >= 1e-3);
    }
    REQUIRE(radial_affinity_residual(parse("x*y*z + x", xyz), std::vector<double>{1.0, 1.0, 1.0}) >= 1e-3);
}

TEST_CASE("euler residual battery across degrees") {
    Rng rng(606);
    for (const auto& item : battery::homogeneous_battery()) {
        for (int t = 0; t < 8; ++t) {
            const auto p = rng.point(item.arity);
            INFO(item.name);
            REQUIRE(euler_residual(item.expr, p, item.degree) <= 1e-9);
        }
    }
}
