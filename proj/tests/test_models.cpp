#include <catch2/catch_amalgamated.hpp>

#include "homma/models.hpp"
#include "homma/verify.hpp"

using namespace homma;
using Catch::Approx;

TEST_CASE("to_expr closed forms") {
    const PerfectSubstitute ps{{2.0, 3.0}};
    CHECK(eval_scalar(to_expr(ps), {1.0, 1.0}) == 5.0);
    CHECK(eval_scalar(to_expr(ps), {2.0, 0.5}) == 5.5);

    const CobbDouglas cd{1.0, {0.3, 0.7}};
    CHECK(eval_scalar(to_expr(cd), {1.0, 1.0}) == Approx(1.0));
    CHECK(eval_scalar(to_expr(cd), {8.0, 1.0}) == Approx(std::pow(8.0, 0.3)));

    const Acms ces{1.0, {1.0, 1.0}, 2.0, 1.0};
    CHECK(eval_scalar(to_expr(ces), {3.0, 4.0}) == Approx(5.0)); // (9+16)^{1/2}

    CHECK(Acms{1.0, {1.0, 1.0}, 2.0, 1.0}.elasticity() == Approx(-1.0)); // s = 1/(1-rho)

    // two-input form b L^k C^{1-k}
    const CobbDouglas two = CobbDouglas::two_input(2.0, 0.3);
    CHECK(two.exponents == std::vector<double>{0.3, 0.7});
    CHECK(two.degree() == Approx(1.0));
    CHECK(eval_scalar(to_expr(two), {1.0, 1.0}) == Approx(2.0));
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(to_expr(PerfectSubstitute{{2.0, 0.0}}), InvalidSpec);
    CHECK_THROWS_AS(to_expr(CobbDouglas{-1.0, {0.3, 0.7}}), InvalidSpec);
    CHECK_THROWS_AS(to_expr(CobbDouglas{1.0, {0.0, 0.7}}), InvalidSpec);
    CHECK_THROWS_AS(to_expr(Acms{1.0, {1.0, 1.0}, 0.0, 1.0}), InvalidSpec);
    CHECK_THROWS_AS(to_expr(Acms{1.0, {-1.0, 1.0}, 0.5, 1.0}), InvalidSpec);
    // negative shares are fine for integer rho
    CHECK_NOTHROW(to_expr(Acms{1.0, {-1.0, 1.0}, 2.0, 1.0}));
}

TEST_CASE("models scale with their declared degree") {
    Rng rng(99);
    const std::vector<Model> models = {
        PerfectSubstitute{{2.0, 3.0}},
        CobbDouglas{1.5, {0.3, 0.7}},
        CobbDouglas{1.0, {2.0, 1.0}},
        Acms{1.0, {1.0, 2.0}, 2.0, 3.0},
        Acms{2.0, {1.0, 1.0, 0.5}, 0.5, 0.5},
    };
    for (const auto& m : models) {
        const Expr e = to_expr(m);
        const double d = degree(m);
        for (int trial = 0; trial < 20; ++trial) {
            const auto p = rng.point(arity(m));
            const double t = rng.uniform(0.5, 3.0);
            std::vector<double> tp = p;
            for (auto& c : tp) c *= t;
            const double lhs = eval_scalar(e, tp);
            const double rhs = std::pow(t, d) * eval_scalar(e, p);
            INFO(describe(m));
            REQUIRE(std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12) <= 1e-10);
        }
    }
}

TEST_CASE("analytic flatness hand cases") {
    CHECK(analytic_flatness(CobbDouglas{1.0, {0.3, 0.7}}, OuterFamily::identity()).flat);
    CHECK_FALSE(analytic_flatness(CobbDouglas{1.0, {2.0, 1.0}}, OuterFamily::identity()).flat);
    CHECK(analytic_flatness(Acms{1.0, {1.0, 1.0}, 1.0, 3.0}, OuterFamily::identity()).flat);
    // power outer undoing the Cobb-Douglas degree
    CHECK(analytic_flatness(CobbDouglas{1.0, {1.0, 1.0}}, OuterFamily::power(1, 0.5, 0)).flat);
    // square of a linearly homogeneous Cobb-Douglas is not flat
    CHECK_FALSE(analytic_flatness(CobbDouglas{1.0, {0.5, 0.5}}, OuterFamily::power(1, 2, 0)).flat);
    // perfect substitutes are flat under any outer
    CHECK(analytic_flatness(PerfectSubstitute{{2.0, 3.0}}, OuterFamily::exp(1, 0)).flat);
    CHECK_THROWS_AS(analytic_flatness(CobbDouglas{1.0, {0.5, 0.5}},
                                      OuterFamily::from_expr(parse("u^2", VarSpec({"u"})))),
                    UnsupportedOuter);
}

TEST_CASE("cross_check: xy via squared Cobb-Douglas is not flat") {
    const auto rep = cross_check(CobbDouglas{1.0, {0.5, 0.5}}, OuterFamily::power(1, 2, 0),
                                 sample_box(2, 32, 42));
    CHECK_FALSE(rep.expected_flat);
    CHECK(rep.numerical == Flatness::NotFlat);
    CHECK(rep.agree);
    // f = xy: raw determinant is exactly -1 everywhere
    const Expr f = compose(OuterFamily::power(1, 2, 0), to_expr(CobbDouglas{1.0, {0.5, 0.5}}));
    for (const auto& p : sample_box(2, 16, 1)) {
        CHECK(ma_residual(f, p).raw == Approx(-1.0).margin(1e-12));
    }
}

TEST_CASE("corollary 5.3 grid: flat exactly at p*sum(alpha)=1") {
    const auto check = run_cor53(42);
    CHECK(check.pass);
    CHECK(check.trials >= 40);
    // residual on the expected-flat cells stays tiny
    CHECK(check.max_relerr <= 1e-8);

    // the headline sweep: sum(alpha) in {0.7, 1.0, 1.3}, F = id
    for (const double s : {0.7, 1.0, 1.3}) {
        const CobbDouglas cd{1.0, {0.4 * s, 0.6 * s}};
        const auto fl = analytic_flatness(cd, OuterFamily::identity());
        CHECK(fl.flat == (s == 1.0));
        const auto rep = cross_check(cd, OuterFamily::identity(), sample_box(2, 32, 5));
        CHECK(rep.agree);
    }
}

TEST_CASE("corollary 5.4 grid: flat exactly on rho=1 or p*d=1") {
    const auto check = run_cor54(42);
    CHECK(check.pass);
    CHECK(check.max_relerr <= 1e-8);

    // F = id: flat iff rho = 1 or d = 1
    for (const double rho : {0.5, 1.0, 2.0})
        for (const double d : {0.5, 1.0, 2.0}) {
            const Acms q{1.0, {1.0, 1.0}, rho, d};
            const auto fl = analytic_flatness(q, OuterFamily::identity());
            INFO("rho=" << rho << " d=" << d);
            CHECK(fl.flat == (rho == 1.0 || d == 1.0));
        }
}

TEST_CASE("model literals parse and round trip") {
    const Model cd = parse_model("cobb-douglas:gamma=1,alpha=0.3:0.7");
    REQUIRE(std::holds_alternative<CobbDouglas>(cd));
    CHECK(std::get<CobbDouglas>(cd).exponents == std::vector<double>{0.3, 0.7});
    CHECK(describe(cd) == "cobb-douglas:gamma=1,alpha=0.3:0.7");

    const Model ps = parse_model("perfsub:a=2:3");
    REQUIRE(std::holds_alternative<PerfectSubstitute>(ps));
    CHECK(describe(ps) == "perfsub:a=2:3");

    const Model ces = parse_model("acms:gamma=1,a=1:1,rho=2,d=1");
    REQUIRE(std::holds_alternative<Acms>(ces));
    CHECK(std::get<Acms>(ces).rho == 2.0);
    CHECK(describe(ces) == "acms:gamma=1,a=1:1,rho=2,d=1");

    CHECK_THROWS_AS(parse_model("leontief:a=1"), UsageError);
    CHECK_THROWS_AS(parse_model("acms:gamma=1,a=1:1,d=1"), UsageError); // rho missing
    CHECK_THROWS_AS(parse_model("perfsub:a="), UsageError);
}

TEST_CASE("MRS of model composites is degree-zero homogeneous") {
    Rng rng(31);
    const std::vector<Model> models = {
        PerfectSubstitute{{1.5, 2.5}},
        CobbDouglas{2.0, {0.4, 0.6}},
        CobbDouglas{1.0, {1.0, 2.0}},
        Acms{1.0, {1.0, 1.0}, 2.0, 1.0},
        Acms{1.0, {0.5, 1.5}, -1.0, 2.0},
    };
    for (const auto& m : models) {
        for (int t = 0; t < 4; ++t) {
            OuterFamily outer = battery::random_outer(rng);
            // keep exp outers in range along the t=10 ray
            while (outer.kind() == OuterFamily::Kind::Exp && degree(m) > 1.0)
                outer = battery::random_outer(rng);
            const Expr f = compose(outer, to_expr(m));
            const auto p = rng.point(arity(m));
            for (const double scale : {0.5, 2.0, 10.0}) {
                INFO(describe(m) << " outer " << outer.describe());
                REQUIRE(mrs_degree_zero_residual(f, p, scale) <= 1e-9);
            }
        }
    }
}
