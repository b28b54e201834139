// Deterministic random batteries behind `verify` and the test suites:
// homogeneous inner functions of prescribed degree, outer families, smooth
// non-homogeneous expressions, and flat profiles for the corollary checks.
//
// Identity sweeps need non-degenerate instances: inners with well-conditioned
// Hessian determinants and (outer, inner) pairs whose composite is not flat,
// otherwise both identity sides are pure float noise and a relative error is
// meaningless. The flat combinations are exercised separately in
// Monge-Ampere-normalized form.
#pragma once

#include <string>
#include <vector>

#include "homma/models.hpp"

namespace homma {
namespace battery {

// -- homogeneous inner functions ------------------------------------------------

// Linearly homogeneous, positive on [0.5,2]^n. kind cycles through
// perfect substitutes, Cobb-Douglas (sum alpha = 1), ACMS (d=1), and
// x1 * phi(x2/x1,...) with a random smooth strictly-convex-in-pieces phi.
inline Expr lin_hom(int n, int kind, Rng& rng) {
    switch (kind % 4) {
    case 0: {
        PerfectSubstitute m;
        for (int i = 0; i < n; ++i) m.coefficients.push_back(rng.uniform(0.5, 2.5));
        return to_expr(m);
    }
    case 1: {
        CobbDouglas m;
        m.gamma = rng.uniform(0.5, 2.0);
        double sum = 0.0;
        std::vector<double> w(static_cast<std::size_t>(n));
        for (auto& wi : w) {
            wi = rng.uniform(0.2, 1.0);
            sum += wi;
        }
        for (const double wi : w) m.exponents.push_back(wi / sum);
        return to_expr(m);
    }
    case 2: {
        Acms m;
        m.gamma = rng.uniform(0.5, 2.0);
        for (int i = 0; i < n; ++i) m.shares.push_back(rng.uniform(0.5, 2.0));
        const double rhos[] = {2.0, 0.5, -1.0, 3.0};
        m.rho = rhos[rng.index(4)];
        m.degree_d = 1.0;
        return to_expr(m);
    }
    default: {
        // x1 * phi(u2,...,un): phi = c0 + sum_k (a_k u_k + b_k g_k(u_k)),
        // g strictly convex so the Hessian scale stays well above float noise.
        const int m = n - 1;
        Expr phi = Expr::constant(rng.uniform(0.5, 1.5));
        for (int k = 0; k < m; ++k) {
            const Expr u = Expr::variable(k);
            const double a = rng.uniform(0.2, 1.0);
            const double b = rng.uniform(0.3, 1.0);
            Expr convex;
            switch (rng.index(3)) {
            case 0: convex = u * u; break;
            case 1: convex = exp(u * Expr::constant(0.5)); break;
            default: convex = Expr::constant(1.0) / u; break;
            }
            phi = phi + Expr::constant(a) * u + Expr::constant(b) * convex;
        }
        return profile_to_inner(phi, n);
    }
    }
}

// d-homogeneous with well-conditioned det(h_ij) (degree d != 1 expected):
// Cobb-Douglas with sum alpha = d, ACMS with rho != 1, or a sum of pure
// d-th powers.
inline Expr nondegenerate_homogeneous(int n, double d, Rng& rng) {
    switch (rng.index(3)) {
    case 0: {
        CobbDouglas m;
        m.gamma = rng.uniform(0.5, 2.0);
        double sum = 0.0;
        std::vector<double> w(static_cast<std::size_t>(n));
        for (auto& wi : w) {
            wi = rng.uniform(0.3, 1.0);
            sum += wi;
        }
        for (const double wi : w) m.exponents.push_back(d * wi / sum);
        return to_expr(m);
    }
    case 1: {
        Acms m;
        m.gamma = rng.uniform(0.5, 2.0);
        for (int i = 0; i < n; ++i) m.shares.push_back(rng.uniform(0.5, 2.0));
        m.rho = rng.index(2) == 0 ? 2.0 : -1.0;
        m.degree_d = d;
        return to_expr(m);
    }
    default: {
        Expr e = Expr::constant(rng.uniform(0.5, 2.0)) * pow(Expr::variable(0), Expr::constant(d));
        for (int i = 1; i < n; ++i)
            e = e + Expr::constant(rng.uniform(0.5, 2.0)) * pow(Expr::variable(i), Expr::constant(d));
        return e;
    }
    }
}

// Flat inner of degree d: (sum a_i x_i)^d, or for n >= 3 optionally
// (x1 phi_flat)^d with a singular-Hessian profile.
inline Expr flat_homogeneous(int n, double d, Rng& rng) {
    if (n >= 3 && rng.index(2) == 1) {
        // ridge profile phi(u) = c + g(a.u): Hessian is rank one
        Expr s = Expr::constant(rng.uniform(0.3, 1.0)) * Expr::variable(0);
        for (int k = 1; k < n - 1; ++k)
            s = s + Expr::constant(rng.uniform(0.3, 1.0)) * Expr::variable(k);
        const Expr phi = Expr::constant(rng.uniform(0.5, 1.5)) + exp(s * Expr::constant(0.4));
        const Expr base = profile_to_inner(phi, n);
        return d == 1.0 ? base : pow(base, Expr::constant(d));
    }
    Expr s = Expr::constant(rng.uniform(0.5, 2.0)) * Expr::variable(0);
    for (int i = 1; i < n; ++i)
        s = s + Expr::constant(rng.uniform(0.5, 2.0)) * Expr::variable(i);
    return d == 1.0 ? s : pow(s, Expr::constant(d));
}

// -- outer families ----------------------------------------------------------------

// Closed-form outers with F' != 0 on u > 0. When `degree` is given, power
// exponents p with p*d = 1 are excluded (those make the composite flat).
inline OuterFamily random_outer(Rng& rng, double degree = 0.0, bool require_f2 = false) {
    for (;;) {
        OuterFamily outer = OuterFamily::identity();
        switch (rng.index(require_f2 ? 3 : 4)) {
        case 0: {
            const double ps[] = {2.0, 3.0, 0.5, -1.0};
            outer = OuterFamily::power(rng.uniform_away(-2.0, 2.0, 0.3), ps[rng.index(4)],
                                       rng.uniform(-1.0, 1.0));
            break;
        }
        case 1:
            outer = OuterFamily::log(rng.uniform_away(-2.0, 2.0, 0.3), rng.uniform(-1.0, 1.0));
            break;
        case 2:
            outer = OuterFamily::exp(rng.uniform_away(-2.0, 2.0, 0.3), rng.uniform(-1.0, 1.0));
            break;
        default:
            outer = OuterFamily::affine(rng.uniform_away(-2.0, 2.0, 0.3), rng.uniform(-1.0, 1.0));
            break;
        }
        if (degree != 0.0 && outer.kind() == OuterFamily::Kind::Power &&
            std::abs(outer.exponent() * degree - 1.0) < 1e-9)
            continue;
        if (degree != 0.0 && outer.kind() == OuterFamily::Kind::Affine && std::abs(degree - 1.0) < 1e-9)
            continue;
        return outer;
    }
}

// -- smooth expressions for the differentiation battery -----------------------------

struct Smooth {
    Expr expr;
    int arity;
    std::string name;
};

// Nonlinear smooth functions on [0.5,2]^n; Hessians stay well-scaled so the
// finite-difference comparison is meaningful.
inline std::vector<Smooth> smooth_battery() {
    std::vector<Smooth> out;
    auto add = [&](const char* text, int n) {
        const VarSpec vars = VarSpec::numbered(n);
        out.push_back({parse(text, vars), n, text});
    };
    add("x1^2 + x2^2", 2);
    add("x1^2 * x2", 2);
    add("x1 * x2", 2);
    add("x1^0.3 * x2^0.7", 2);
    add("x1^0.5 * x2^0.5", 2);
    add("sqrt(x1 * x2)", 2);
    add("ln(x1^2 + x2^2)", 2);
    add("exp(x1 + x2) - x1 * x2", 2);
    add("x1 + x2^2", 2);
    add("(2*x1 + 3*x2)^3", 2);
    add("x1 / x2 + x2 / x1", 2);
    add("(x1^2 + x2^2)^0.5", 2);
    add("1 / (x1 * x2)", 2);
    add("x1^3 - 2*x1*x2 + x2^3", 2);
    add("exp(x2 / x1) * x1", 2);
    add("ln(2*x1 + 3*x2)", 2);
    add("x1 * exp(x2 / x1) + x3", 3);
    add("x1^0.2 * x2^0.3 * x3^0.5", 3);
    add("sqrt(x1 * x2) + x3^2", 3);
    add("(x1^2 + x2^2 + x3^2)^0.5", 3);
    add("x1 + sqrt(x2 * x3)", 3);
    add("(x1 + x2) * ln(x3 + 1)", 3);
    add("x1^2 + x2^2 + x3^2 + x4^2", 4);
    add("x1^0.1 * x2^0.2 * x3^0.3 * x4^0.4", 4);
    add("sqrt(x1*x2) + sqrt(x3*x4)", 4);
    return out;
}

// -- identity sweep instances -------------------------------------------------------

struct IdentityInstance {
    OuterFamily outer;
    Expr inner;
    double degree = 0.0;
    int arity = 0;
    std::vector<double> point;
};

// Well-conditioned draw for the composite-Hessian sweeps (Eqs 2.5 / 2.8):
// the inner determinant must be resolvable against the Hessian scale, the
// identity bracket must not cancel catastrophically, and exp outers are kept
// away from overflow territory.
inline IdentityInstance draw_identity_instance(Rng& rng) {
    const double degrees[] = {2.0, 3.0, -1.0, 0.5};
    for (;;) {
        IdentityInstance inst{OuterFamily::identity(), Expr::constant(1.0), 0.0, 0, {}};
        inst.arity = 2 + rng.index(3);
        inst.degree = degrees[rng.index(4)];
        inst.inner = nondegenerate_homogeneous(inst.arity, inst.degree, rng);
        inst.outer = random_outer(rng, inst.degree);
        inst.point = rng.point(inst.arity);

        const Jet2 h = jet_eval(inst.inner, inst.point);
        const double u = h.value();
        if (inst.outer.kind() == OuterFamily::Kind::Exp && std::abs(u) > 20.0) continue;
        const double det_h = determinant(h.hessian());
        const double scale = std::pow(h.hessian().frobenius_norm(), h.dim());
        if (std::abs(det_h) < 2e-4 * scale) continue; // inner too close to flat
        const double fp = inst.outer.d1(u);
        const double fpp = inst.outer.d2(u);
        const double t1 = fp * det_h;
        const double t2 = fpp * adjugate_quadratic_form(h.hessian(), h.gradient());
        if (std::abs(t1 + t2) < 1e-3 * (std::abs(t1) + std::abs(t2))) continue;
        return inst;
    }
}

struct ProfileInstance {
    OuterFamily outer;
    Expr profile;
    int arity = 0; // of the composite, = profile inputs + 1
    std::vector<double> point;
};

// Draw for the profile-determinant battery: additive strictly-convex
// profiles (diagonal Hessian with
// entries bounded away from zero) and outers with F'' != 0.
inline ProfileInstance draw_profile_instance(Rng& rng) {
    for (;;) {
        ProfileInstance inst{OuterFamily::identity(), Expr::constant(1.0), 0, {}};
        inst.arity = 2 + rng.index(3);
        const int m = inst.arity - 1;
        Expr phi = Expr::constant(rng.uniform(0.5, 1.5));
        for (int k = 0; k < m; ++k) {
            const Expr u = Expr::variable(k);
            const double b = rng.uniform(0.5, 1.5);
            Expr convex;
            switch (rng.index(3)) {
            case 0: convex = u * u; break;
            case 1: convex = exp(u * Expr::constant(0.5)); break;
            default: convex = Expr::constant(1.0) / u; break;
            }
            phi = phi + Expr::constant(rng.uniform(0.2, 1.0)) * u + Expr::constant(b) * convex;
        }
        inst.profile = phi;
        inst.outer = random_outer(rng, 0.0, /*require_f2=*/true);
        inst.point = rng.point(inst.arity);

        std::vector<double> ratios(static_cast<std::size_t>(m));
        for (int k = 1; k < inst.arity; ++k)
            ratios[static_cast<std::size_t>(k - 1)] = inst.point[static_cast<std::size_t>(k)] / inst.point[0];
        const Jet2 phi_jet = jet_eval(inst.profile, ratios);
        const double u = inst.point[0] * phi_jet.value();
        if (inst.outer.kind() == OuterFamily::Kind::Exp && std::abs(u) > 20.0) continue;
        const double det_phi = determinant(phi_jet.hessian());
        const double scale = std::pow(phi_jet.hessian().frobenius_norm(), m);
        if (std::abs(det_phi) < 2e-4 * scale) continue;
        if (std::abs(inst.outer.d2(u)) < 1e-8) continue;
        return inst;
    }
}

// Homogeneous instances with known degree for the Euler batteries.
struct Homogeneous {
    Expr expr;
    int arity;
    double degree;
    std::string name;
};

inline std::vector<Homogeneous> homogeneous_battery(std::uint64_t seed = 2024) {
    Rng rng(seed);
    std::vector<Homogeneous> out;
    const double degrees[] = {-1.0, 0.5, 1.0, 2.0, 3.0};
    for (const int n : {2, 3, 4}) {
        for (int k = 0; k < 4; ++k)
            out.push_back({lin_hom(n, k, rng), n, 1.0, "lin_hom n=" + std::to_string(n)});
        for (const double d : degrees) {
            if (d != 1.0)
                out.push_back({nondegenerate_homogeneous(n, d, rng), n, d,
                               "homog d=" + format_double(d) + " n=" + std::to_string(n)});
            out.push_back({flat_homogeneous(n, d, rng), n, d,
                           "flat d=" + format_double(d) + " n=" + std::to_string(n)});
        }
    }
    return out;
}

} // namespace battery
} // namespace homma
