// Numerical verification of the displayed Hessian-determinant identities for
// homothetic functions f = F(h), h homogeneous of degree d.
//
// The composite-Hessian identity is implemented with leading factor (F')^{n-1}
// (the matrix determinant lemma applied to f_ij = F' h_ij + F'' h_i h_j); the
// printed (F')^n variant is evaluated alongside and reported, never hidden.
#pragma once

#include <cmath>
#include <span>
#include <string>

#include "homma/geometry.hpp"
#include "homma/homogeneity.hpp"
#include "homma/outer.hpp"

namespace homma {

struct HomotheticSpec {
    OuterFamily outer;
    Expr inner;
    double degree;
    int arity;

    // inner must be d-homogeneous (estimated spread <= 1e-7, median within
    // 1e-6 of the claimed degree) with d != 0.
    void validate(std::uint64_t seed = 42) const {
        if (std::abs(degree) < 1e-12) throw InvalidSpec("homothetic degree d must be nonzero");
        if (inner.arity() > arity)
            throw InvalidSpec("inner expression uses more variables than the declared arity");
        const DegreeEstimate est = estimate_degree(inner, arity, 16, seed);
        if (!est.homogeneous())
            throw InvalidSpec("inner function is not homogeneous (degree spread " +
                              format_double(est.spread) + ")");
        if (std::abs(est.degree - degree) > 1e-6)
            throw InvalidSpec("inner function has degree " + format_double(est.degree) +
                              ", not the claimed " + format_double(degree));
    }
};

// f = F(h) as a single expression tree.
inline Expr compose(const OuterFamily& outer, const Expr& inner) {
    return substitute(outer.expr(), {{0, inner}});
}

struct CompositeHessianIdentity {
    double lhs = 0.0;           // det of the jet Hessian of F(h)
    double rhs_corrected = 0.0; // (F')^{n-1} { F' det(h_ij) + F'' sum h_i h_j H_ij }
    double rhs_paper = 0.0;     // same bracket with leading (F')^n
    double relerr = 0.0;        // lhs vs rhs_corrected
};

inline CompositeHessianIdentity composite_hessian_identity(const HomotheticSpec& spec,
                                                           std::span<const double> point) {
    const Jet2 h = jet_eval(spec.inner, point);
    const double u = h.value();
    const double fp = spec.outer.d1(u);
    const double fpp = spec.outer.d2(u);
    if (fp == 0.0) throw ZeroFPrime("composite_hessian_identity: F'(u)=0 at u=" + format_double(u));

    const int n = h.dim();
    const double det_h = determinant(h.hessian());
    const double adj_form = adjugate_quadratic_form(h.hessian(), h.gradient());
    const double bracket = fp * det_h + fpp * adj_form;

    CompositeHessianIdentity out;
    out.rhs_corrected = std::pow(fp, n - 1) * bracket;
    out.rhs_paper = std::pow(fp, n) * bracket;
    out.lhs = determinant(jet_eval(compose(spec.outer, spec.inner), point).hessian());
    out.relerr = identity_relerr(out.lhs, out.rhs_corrected);
    return out;
}

struct FactorizationIdentity {
    double lhs = 0.0;
    double rhs = 0.0; // det(h_ij) (F')^{n-1} / (d-1) { (d-1) F' + d h F'' }
    double relerr = 0.0;
};

inline FactorizationIdentity factorization_identity(const HomotheticSpec& spec,
                                                    std::span<const double> point) {
    const double d = spec.degree;
    if (std::abs(d - 1.0) < 1e-12)
        throw DegreeOne("factorization_identity requires degree d != 1; use "
                        "composite_hessian_identity instead");
    const Jet2 h = jet_eval(spec.inner, point);
    const double u = h.value();
    const double fp = spec.outer.d1(u);
    const double fpp = spec.outer.d2(u);
    if (fp == 0.0) throw ZeroFPrime("factorization_identity: F'(u)=0 at u=" + format_double(u));

    const int n = h.dim();
    FactorizationIdentity out;
    out.rhs = determinant(h.hessian()) * std::pow(fp, n - 1) / (d - 1.0) *
              ((d - 1.0) * fp + d * u * fpp);
    out.lhs = determinant(jet_eval(compose(spec.outer, spec.inner), point).hessian());
    out.relerr = identity_relerr(out.lhs, out.rhs);
    return out;
}

// |d u F'' + (d-1) F'| normalized; zero iff F solves the separating ODE whose
// solutions are F(u) = alpha u^{1/d} + beta.
inline double ode_residual(const OuterFamily& outer, double d, double u) {
    const double t1 = d * u * outer.d2(u);
    const double t2 = (d - 1.0) * outer.d1(u);
    return std::abs(t1 + t2) / std::max({std::abs(t1), std::abs(t2), 1e-12});
}

// h1^2 h22 + h2^2 h11 - 2 h1 h2 h12 for two-input h.
inline double bracket2(const Expr& h, std::span<const double> point) {
    if (point.size() != 2 || h.arity() > 2)
        throw ArityError("bracket2 is defined for two-input functions");
    const Jet2 j = jet_eval(h, point);
    const double h1 = j.gradient()[0], h2 = j.gradient()[1];
    const auto& hh = j.hessian();
    return h1 * h1 * hh(1, 1) + h2 * h2 * hh(0, 0) - 2.0 * h1 * h2 * hh(0, 1);
}

struct ProfileIdentity {
    double lhs = 0.0; // x1^{n-1} det(f_ij) for f = F(x1 phi(x2/x1,...))
    double rhs = 0.0; // phi^2 (F')^{n-1} F'' det(phi_ij)   (verifies as printed)
    double relerr = 0.0;
};

// Builds h = x1 * phi(x2/x1, ..., xn/x1) from an (n-1)-input profile.
inline Expr profile_to_inner(const Expr& profile, int arity) {
    if (profile.arity() > arity - 1)
        throw ArityError("profile uses more than arity-1 variables");
    std::map<int, Expr> bindings;
    for (int k = 0; k < arity - 1; ++k)
        bindings.emplace(k, Expr::variable(k + 1) / Expr::variable(0));
    return Expr::variable(0) * substitute(profile, bindings);
}

inline ProfileIdentity profile_identity(const OuterFamily& outer, const Expr& profile,
                                        std::span<const double> point) {
    const int n = static_cast<int>(point.size());
    const double x1 = point[0];
    if (!(x1 > 0.0)) throw DomainError("profile_identity requires x1 > 0", "x1", x1);

    std::vector<double> ratios(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k) ratios[static_cast<std::size_t>(k - 1)] = point[static_cast<std::size_t>(k)] / x1;
    const Jet2 phi = jet_eval(profile, ratios);
    const double u = x1 * phi.value();
    const double fp = outer.d1(u);
    const double fpp = outer.d2(u);

    ProfileIdentity out;
    out.rhs = phi.value() * phi.value() * std::pow(fp, n - 1) * fpp * determinant(phi.hessian());
    const Expr f = compose(outer, profile_to_inner(profile, n));
    out.lhs = std::pow(x1, n - 1) * determinant(jet_eval(f, point).hessian());
    out.relerr = identity_relerr(out.lhs, out.rhs);
    return out;
}

} // namespace homma
