// Classification of homothetic solutions of det(f_ij)=0: the two-input
// dichotomy (inner perfect-substitute power vs linearly homogeneous up to
// constants) and the n-input version with the profile representation
// h = x1 phi(x2/x1, ..., xn/x1).
#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "homma/identities.hpp"

namespace homma {

inline constexpr double kHhatHessianTol = 1e-7;   // case (1): second derivatives of h^{1/d}
inline constexpr double kCoefficientDriftTol = 1e-7;
inline constexpr double kProfileFlatTol = 1e-6;   // normalized |det(phi_ij)|

// ---------------------------------------------------------------------------

// phi(u2,...,un) = h(1, u2, ..., un) as an expression in n-1 variables.
// Requires h linearly homogeneous; the reconstruction x1 phi(x2/x1,...) is
// verified against h at sample points.
inline Expr profile_of(const Expr& h, int arity = -1, std::uint64_t seed = 42) {
    const int n = arity > 0 ? arity : h.arity();
    if (n < 2) throw ArityError("profile_of needs at least two variables");
    const DegreeEstimate est = estimate_degree(h, n, 16, seed);
    if (!est.homogeneous() || std::abs(est.degree - 1.0) > 1e-6)
        throw NotLinearlyHomogeneous("profile_of: function is not linearly homogeneous (degree " +
                                     format_double(est.degree) + ", spread " +
                                     format_double(est.spread) + ")");
    std::map<int, Expr> bindings;
    bindings.emplace(0, Expr::constant(1.0));
    for (int k = 1; k < n; ++k) bindings.emplace(k, Expr::variable(k - 1));
    const Expr profile = substitute(h, bindings);

    const Expr recon = profile_to_inner(profile, n);
    for (const auto& p : sample_box(n, 16, seed)) {
        const double a = eval_scalar(h, p);
        const double b = eval_scalar(recon, p);
        if (std::abs(a - b) / std::max(std::abs(a), 1e-12) > 1e-10)
            throw NotLinearlyHomogeneous("profile_of: reconstruction mismatch at a sample point");
    }
    return profile;
}

struct ConstructedProfile {
    Expr f;                          // F(x1 phi(x2/x1, ..., xn/x1))
    bool profile_flat = false;       // det(phi_ij) vanished at all checked points
    double max_profile_residual = 0; // max normalized |det(phi_ij)|
};

// Any profile with singular Hessian yields a solution
// of det(f_ij)=0 for every outer F with F' != 0. When the profile is not
// flat the composition is still returned, flagged.
inline ConstructedProfile construct_from_profile(const OuterFamily& outer, const Expr& profile,
                                                 std::uint64_t seed = 42) {
    const int m = std::max(profile.arity(), 1); // profile inputs
    ConstructedProfile out{compose(outer, profile_to_inner(profile, m + 1)), true, 0.0};
    for (const auto& u : sample_box(m, 32, seed, 0.25, 4.0)) {
        const MaResidual r = ma_residual(profile, u);
        out.max_profile_residual = std::max(out.max_profile_residual, r.normalized);
    }
    out.profile_flat = out.max_profile_residual <= kProfileFlatTol;
    return out;
}

// ---------------------------------------------------------------------------

enum class TwoInputCase { InnerPerfectSubstitutePower, LinearHomogeneousUpToConstants, NotFlat };
enum class NInputCase { LinearHomogeneousUpToConstants, ProfileFlat, NotFlat };

inline const char* to_string(TwoInputCase c) {
    switch (c) {
    case TwoInputCase::InnerPerfectSubstitutePower: return "inner_perfect_substitute_power";
    case TwoInputCase::LinearHomogeneousUpToConstants: return "linearly_homogeneous_up_to_constants";
    case TwoInputCase::NotFlat: return "not_flat";
    }
    return "?";
}

inline const char* to_string(NInputCase c) {
    switch (c) {
    case NInputCase::LinearHomogeneousUpToConstants: return "linearly_homogeneous_up_to_constants";
    case NInputCase::ProfileFlat: return "profile_flat";
    case NInputCase::NotFlat: return "not_flat";
    }
    return "?";
}

struct ClassificationEvidence {
    FlatnessVerdict flatness;
    std::optional<double> hhat_hessian_residual; // case (1) probe
    std::optional<double> coefficient_drift;     // case (1) probe
    std::optional<double> radial_affinity;       // case (2) probe
    std::optional<double> profile_det_residual;  // n-input case (2) probe
};

struct Classification2 {
    TwoInputCase result = TwoInputCase::NotFlat;
    double a = 0.0, b = 0.0; // hhat gradient components for case (1)
    bool both_cases = false; // case (2) also verified; case (1) reported (more specific)
    ClassificationEvidence evidence;
};

struct ClassificationN {
    NInputCase result = NInputCase::NotFlat;
    std::optional<Expr> profile;
    ClassificationEvidence evidence;
};

namespace detail {

inline Expr hhat_of(const HomotheticSpec& spec) {
    if (std::abs(spec.degree - 1.0) < 1e-12) return spec.inner;
    return pow(spec.inner, Expr::constant(1.0 / spec.degree));
}

// Scale-invariant size of the Hessian of hhat relative to its gradient:
// ||H||_max ||x||_inf / ||grad||_inf. Vanishes iff hhat is affine.
inline double hhat_hessian_residual(const Expr& hhat, std::span<const std::vector<double>> samples) {
    double worst = 0.0;
    for (const auto& p : samples) {
        const Jet2 j = jet_eval(hhat, p);
        double xmax = 0.0, gmax = 0.0;
        for (int i = 0; i < j.dim(); ++i) {
            xmax = std::max(xmax, std::abs(p[static_cast<std::size_t>(i)]));
            gmax = std::max(gmax, std::abs(j.gradient()[static_cast<std::size_t>(i)]));
        }
        worst = std::max(worst, j.hessian().max_abs() * xmax / std::max(gmax, 1e-12));
    }
    return worst;
}

inline double coefficient_drift(const Expr& hhat, std::span<const std::vector<double>> samples,
                                std::vector<double>& first_gradient) {
    first_gradient = jet_eval(hhat, samples[0]).gradient();
    double scale = 1e-12;
    for (const double g : first_gradient) scale = std::max(scale, std::abs(g));
    double worst = 0.0;
    for (const auto& p : samples) {
        const auto g = jet_eval(hhat, p).gradient();
        for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(g[i] - first_gradient[i]) / scale);
    }
    return worst;
}

inline std::string evidence_json(const ClassificationEvidence& ev) {
    std::string s = "{\"max_ma_residual\":" + format_double(ev.flatness.max_normalized_residual);
    if (ev.hhat_hessian_residual)
        s += ",\"hhat_hessian_residual\":" + format_double(*ev.hhat_hessian_residual);
    if (ev.coefficient_drift) s += ",\"coefficient_drift\":" + format_double(*ev.coefficient_drift);
    if (ev.radial_affinity) s += ",\"radial_affinity\":" + format_double(*ev.radial_affinity);
    if (ev.profile_det_residual)
        s += ",\"profile_det_residual\":" + format_double(*ev.profile_det_residual);
    return s + "}";
}

} // namespace detail

// Two-input dichotomy. NotFlat short-circuits; otherwise case (1)
// is probed via vanishing second derivatives of hhat = h^{1/d} (with constant
// gradient coefficients a, b), case (2) via radial affinity. Flat-but-neither
// raises Inconsistent rather than guessing.
inline Classification2 classify_two_input(const HomotheticSpec& spec,
                                          std::span<const std::vector<double>> samples,
                                          double flat_tol = kFlatTol,
                                          double reject_tol = kRejectTol) {
    if (spec.arity != 2) throw ArityError("classify_two_input requires arity 2");
    spec.validate();
    const Expr f = compose(spec.outer, spec.inner);

    Classification2 out;
    out.evidence.flatness = flatness(f, samples, flat_tol, reject_tol);
    if (out.evidence.flatness.verdict == Flatness::NotFlat) {
        out.result = TwoInputCase::NotFlat;
        return out;
    }

    const Expr hhat = detail::hhat_of(spec);
    const double hres = detail::hhat_hessian_residual(hhat, samples);
    out.evidence.hhat_hessian_residual = hres;
    std::vector<double> coeffs;
    const double drift = detail::coefficient_drift(hhat, samples, coeffs);
    out.evidence.coefficient_drift = drift;
    const bool case1 = hres <= kHhatHessianTol && drift <= kCoefficientDriftTol;

    // The ray probe can leave the composite's numeric range (e.g. exp outers);
    // an unevaluable ray is certainly not affine.
    bool case2 = false;
    try {
        const double affinity = radial_affinity_residual(f, samples[0]);
        out.evidence.radial_affinity = affinity;
        case2 = affinity <= kRadialAffinityTol;
    } catch (const Error&) {
    }

    if (case1) {
        out.result = TwoInputCase::InnerPerfectSubstitutePower;
        out.a = coeffs[0];
        out.b = coeffs[1];
        out.both_cases = case2;
        return out;
    }
    if (case2) {
        out.result = TwoInputCase::LinearHomogeneousUpToConstants;
        return out;
    }
    throw Inconsistent("classify_two_input: surface is flat but neither theorem case verifies",
                       detail::evidence_json(out.evidence));
}

// n-input classification (n >= 3): NotFlat, or linearly homogeneous up to
// constants, or the profile form with det(phi_ij) = 0.
inline ClassificationN classify_n_input(const HomotheticSpec& spec,
                                        std::span<const std::vector<double>> samples,
                                        double flat_tol = kFlatTol,
                                        double reject_tol = kRejectTol) {
    if (spec.arity < 3) throw ArityError("classify_n_input requires arity >= 3");
    spec.validate();
    const Expr f = compose(spec.outer, spec.inner);

    ClassificationN out;
    out.evidence.flatness = flatness(f, samples, flat_tol, reject_tol);
    if (out.evidence.flatness.verdict == Flatness::NotFlat) {
        out.result = NInputCase::NotFlat;
        return out;
    }

    try {
        const double affinity = radial_affinity_residual(f, samples[0]);
        out.evidence.radial_affinity = affinity;
        if (affinity <= kRadialAffinityTol) {
            out.result = NInputCase::LinearHomogeneousUpToConstants;
            return out;
        }
    } catch (const Error&) {
        // ray leaves the numeric range: not affine along rays
    }

    const Expr profile = profile_of(detail::hhat_of(spec), spec.arity);
    double worst = 0.0;
    for (const auto& p : samples) {
        std::vector<double> ratios(p.size() - 1);
        for (std::size_t k = 1; k < p.size(); ++k) ratios[k - 1] = p[k] / p[0];
        worst = std::max(worst, ma_residual(profile, ratios).normalized);
    }
    out.evidence.profile_det_residual = worst;
    if (worst <= kProfileFlatTol) {
        out.result = NInputCase::ProfileFlat;
        out.profile = profile;
        return out;
    }
    throw Inconsistent("classify_n_input: surface is flat but neither theorem case verifies",
                       detail::evidence_json(out.evidence));
}

} // namespace homma
