#include <catch2/catch_amalgamated.hpp>

#include "homma/verify.hpp"

using namespace homma;
using Catch::Approx;

namespace {
const VarSpec kXY({"x", "y"});
const std::vector<double> kP11{1.0, 1.0};
} // namespace

TEST_CASE("composite Hessian identity: hand oracle F=u^2, h=x^2+y^2") {
    const HomotheticSpec spec{OuterFamily::power(1, 2, 0), parse("x^2 + y^2", kXY), 2.0, 2};
    spec.validate();
    const auto r = composite_hessian_identity(spec, kP11);
    CHECK(r.lhs == 192.0);
    CHECK(r.rhs_corrected == 192.0);
    CHECK(r.rhs_paper == 768.0);
    CHECK(r.relerr <= 1e-12);
    // the printed exponent is off by exactly F'(u) = 4
    CHECK(r.rhs_paper / r.lhs == Approx(4.0).epsilon(1e-12));
}

TEST_CASE("composite Hessian identity: affine and identity outers") {
    // F(u) = 2u, h = xy: det(f_ij) = det([[0,2],[2,0]]) = -4 = 2^2 * (-1)
    const HomotheticSpec spec{OuterFamily::affine(2, 0), parse("x*y", kXY), 2.0, 2};
    const auto r = composite_hessian_identity(spec, kP11);
    CHECK(r.lhs == -4.0);
    CHECK(r.rhs_corrected == -4.0);
    CHECK(r.relerr <= 1e-13);

    // identity outer: lhs = rhs_corrected = rhs_paper = det(h_ij)
    const HomotheticSpec id{OuterFamily::identity(), parse("x*y", kXY), 2.0, 2};
    const auto ri = composite_hessian_identity(id, kP11);
    CHECK(ri.lhs == -1.0);
    CHECK(ri.rhs_corrected == -1.0);
    CHECK(ri.rhs_paper == -1.0);
}

TEST_CASE("factorization identity: hand oracle and consistency cases") {
    const HomotheticSpec spec{OuterFamily::power(1, 2, 0), parse("x^2 + y^2", kXY), 2.0, 2};
    const auto r = factorization_identity(spec, kP11);
    CHECK(r.lhs == 192.0);
    CHECK(r.rhs == 192.0);
    CHECK(r.relerr <= 1e-12);

    // affine outer: bracket reduces to (d-1)F', rhs = det(h_ij) (F')^n
    const HomotheticSpec aff{OuterFamily::affine(3, 1), parse("x*y", kXY), 2.0, 2};
    const auto ra = factorization_identity(aff, kP11);
    const auto ca = composite_hessian_identity(aff, kP11);
    CHECK(ra.rhs == Approx(ca.rhs_corrected).epsilon(1e-12));
    CHECK(ra.relerr <= 1e-12);

    // flat inner: both sides vanish for every F; h=(2x+3y)^2, F=exp.
    // Scored in Monge-Ampere-normalized form because 0-vs-0 has no
    // meaningful relative error.
    const Expr flat_inner = parse("(2*x + 3*y)^2", kXY);
    const HomotheticSpec fl{OuterFamily::exp(1, 0), flat_inner, 2.0, 2};
    const auto rf = factorization_identity(fl, kP11);
    const Expr f = compose(fl.outer, fl.inner);
    const Jet2 jf = jet_eval(f, kP11);
    const double scale = std::pow(jf.hessian().frobenius_norm(), 2);
    CHECK(std::abs(rf.lhs) / scale <= 1e-9);
    const Jet2 jh = jet_eval(flat_inner, kP11);
    CHECK(std::abs(determinant(jh.hessian())) /
              std::max(std::pow(jh.hessian().frobenius_norm(), 2), 1e-300) <=
          1e-12);

    REQUIRE_THROWS_AS(factorization_identity(
                          HomotheticSpec{OuterFamily::identity(), parse("2*x + 3*y", kXY), 1.0, 2}, kP11),
                      DegreeOne);
}

TEST_CASE("outer families expose consistent closed-form derivatives") {
    const std::vector<double> us = {0.5, 1.0, 1.7, 2.0};
    const OuterFamily families[] = {
        OuterFamily::affine(2, 1),        OuterFamily::power(1.5, 2, 0.5),
        OuterFamily::power(1, 0.5, 0),    OuterFamily::power(2, -1, 1),
        OuterFamily::log(1.5, -1),        OuterFamily::exp(0.5, 2),
        OuterFamily::from_expr(parse("u^2 + 1", VarSpec({"u"}))),
    };
    for (const auto& f : families) {
        INFO(f.describe());
        REQUIRE_NOTHROW(f.validate(us));
    }
    // F' = 0 everywhere
    REQUIRE_THROWS_AS(OuterFamily::affine(0, 3).validate(us), ZeroFPrime);
    // expr-defined outer with a critical point inside the sample range
    REQUIRE_THROWS_AS(OuterFamily::from_expr(parse("(u - 1)^2", VarSpec({"u"}))).validate(us),
                      ZeroFPrime);
    REQUIRE_THROWS_AS(OuterFamily::from_expr(parse("x*y", VarSpec({"x", "y"}))), ArityError);

    // expr-defined outers differentiate through the jet algebra
    const OuterFamily g = parse_outer("expr:u^3+u");
    CHECK(g.value(2.0) == 10.0);
    CHECK(g.d1(2.0) == 13.0);
    CHECK(g.d2(2.0) == 12.0);

    const OuterFamily p = parse_outer("power:alpha=1,p=3,beta=0");
    CHECK(p.value(2.0) == 8.0);
    CHECK(parse_outer("id").value(3.5) == 3.5);
    REQUIRE_THROWS_AS(parse_outer("power:alpha=1"), UsageError);
    REQUIRE_THROWS_AS(parse_outer("cubic:p=3"), UsageError);
}

TEST_CASE("separating ODE residual") {
    // F = u^{1/2}, d=2 at u=1: 2*1*(-1/4) + 1*(1/2) = 0
    CHECK(ode_residual(OuterFamily::power(1, 0.5, 0), 2.0, 1.0) == 0.0);
    // power solutions for several degrees vanish on a u-grid
    for (const double d : {3.0, -1.0, 0.5}) {
        for (double u = 0.5; u <= 2.0; u += 0.1) {
            INFO("d=" << d << " u=" << u);
            REQUIRE(ode_residual(OuterFamily::power(1.7, 1.0 / d, 0.3), d, u) <= 1e-12);
        }
    }
    // F = u^2, d=2, u=1: |4 + 2| / 4 = 1.5
    CHECK(ode_residual(OuterFamily::power(1, 2, 0), 2.0, 1.0) == Approx(1.5));
    // every non-solution battery outer exceeds 1e-2 somewhere on [0.5,2]
    const OuterFamily nonsolutions[] = {
        OuterFamily::affine(2, 1), OuterFamily::power(1, 2, 0), OuterFamily::power(1.5, -1, 0),
        OuterFamily::log(1, 0), OuterFamily::exp(1, 0)};
    for (const auto& outer : nonsolutions) {
        for (const double d : {2.0, 3.0, -1.0, 0.5}) {
            if (outer.kind() == OuterFamily::Kind::Power &&
                std::abs(outer.exponent() - 1.0 / d) < 1e-9)
                continue;
            double worst = 0.0;
            for (double u = 0.5; u <= 2.0; u += 0.05)
                worst = std::max(worst, ode_residual(outer, d, u));
            INFO(outer.describe() << " d=" << d);
            REQUIRE(worst >= 1e-2);
        }
    }
}

TEST_CASE("bracket2 hand values") {
    CHECK(bracket2(parse("2*x + 3*y", kXY), std::vector<double>{1.4, 0.7}) == 0.0);
    CHECK(bracket2(parse("x^2 + y^2", kXY), kP11) == Approx(16.0));
    CHECK(bracket2(parse("sqrt(x*y)", kXY), kP11) == Approx(-0.25));
    REQUIRE_THROWS_AS(bracket2(parse("x", VarSpec({"x"})), std::vector<double>{1.0}), ArityError);
}

TEST_CASE("two-input bracket chain on the linearly homogeneous battery") {
    const auto check = run_eq33(200, 42);
    CHECK(check.pass);
    CHECK(check.max_relerr <= 1e-9);
}

TEST_CASE("profile identity: hand oracle F=u^2, phi=v^2 at (1,2)") {
    const auto r = profile_identity(OuterFamily::power(1, 2, 0), parse("v^2", VarSpec({"v"})),
                                    std::vector<double>{1.0, 2.0});
    CHECK(r.lhs == Approx(512.0).epsilon(1e-12));
    CHECK(r.rhs == Approx(512.0).epsilon(1e-12));
    CHECK(r.relerr <= 1e-10);
}

TEST_CASE("profile identity degenerate rows vanish on both sides") {
    const VarSpec uv({"u1", "u2"});
    const auto samples = sample_box(3, 16, 9);
    // affine outer: F'' = 0 forces rhs = 0; the composite is linearly
    // homogeneous plus a constant, so its det vanishes in the
    // Monge-Ampere-normalized sense (lhs-vs-0 has no relative error)
    for (const auto& p : samples) {
        const auto r = profile_identity(OuterFamily::affine(2, 1), parse("u1^2 + u2", uv), p);
        CHECK(r.rhs == 0.0);
        const Expr f = compose(OuterFamily::affine(2, 1), profile_to_inner(parse("u1^2 + u2", uv), 3));
        CHECK(ma_residual(f, p).normalized <= 1e-9);
    }
    // linear profile: det(phi_ij) = 0 forces rhs = 0 for any F
    for (const auto& p : samples) {
        const auto r = profile_identity(OuterFamily::exp(1, 0), parse("2 + u1 + 3*u2", uv), p);
        CHECK(r.rhs == 0.0);
        const Expr f = compose(OuterFamily::exp(1, 0), profile_to_inner(parse("2 + u1 + 3*u2", uv), 3));
        CHECK(ma_residual(f, p).normalized <= 1e-9);
    }
}

TEST_CASE("identity batteries stay within tolerance") {
    const auto eq25 = run_eq25(150, 42);
    CHECK(eq25.pass);
    CHECK(eq25.max_relerr <= 1e-9);

    const auto eq28 = run_eq28(150, 42);
    CHECK(eq28.pass);
    CHECK(eq28.max_relerr <= 1e-9);

    const auto eq29 = run_eq29(100, 42);
    CHECK(eq29.pass);
    CHECK(eq29.max_relerr <= 1e-12);

    const auto eq44 = run_eq44(100, 42);
    CHECK(eq44.pass);
    CHECK(eq44.max_relerr <= 1e-9);
}

TEST_CASE("printed exponent battery reports the systematic F' ratio") {
    const auto paper = run_eq25_paper_exponent(60, 42);
    CHECK_FALSE(paper.pass); // fails by design against the printed form
    int checked = 0;
    for (const auto& row : paper.rows) {
        if (!row.contains("ratio_paper_over_lhs")) continue;
        const double ratio = row["ratio_paper_over_lhs"].get<double>();
        const double fprime = row["fprime"].get<double>();
        REQUIRE(std::abs(ratio - fprime) / std::max(std::abs(fprime), 1e-12) <= 1e-9);
        ++checked;
    }
    REQUIRE(checked >= 50);
}

TEST_CASE("theorem closure: flat inner stays flat under every outer") {
    Rng rng(777);
    for (int t = 0; t < 25; ++t) {
        const int n = 2 + rng.index(3);
        const double degrees[] = {2.0, 3.0, -1.0, 0.5};
        const double d = degrees[rng.index(4)];
        const Expr h = battery::flat_homogeneous(n, d, rng);
        // confirm the inner is flat first
        const auto hv = flatness(h, n, 32, 11);
        INFO("n=" << n << " d=" << d);
        REQUIRE(hv.verdict == Flatness::Flat);
        double hmax = 0.0;
        for (const auto& p : sample_box(n, 32, 11)) hmax = std::max(hmax, eval_scalar(h, p));
        OuterFamily outer = battery::random_outer(rng, d);
        while (outer.kind() == OuterFamily::Kind::Exp && hmax > 20.0)
            outer = battery::random_outer(rng, d);
        const Expr f = compose(outer, h);
        INFO("outer " << outer.describe());
        REQUIRE(flatness(f, n, 32, 11).verdict == Flatness::Flat);
    }
}
