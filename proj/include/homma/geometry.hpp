// Monge-Ampere residual det(f_ij), Gauss-Kronecker curvature of the graph
// hypersurface, and the two-threshold flatness verdict.
#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homma/jet.hpp"
#include "homma/sampling.hpp"

namespace homma {

inline constexpr double kFlatTol = 1e-6;   // Flat when max residual below this
inline constexpr double kRejectTol = 1e-3; // NotFlat when above this
inline constexpr int kDefaultFlatnessSamples = 64;

struct GraphPoint {
    std::vector<double> base;
    double height; // f(base); the graph point is (base..., height)
};

inline GraphPoint graph_point(const Expr& e, std::span<const double> x) {
    return GraphPoint{std::vector<double>(x.begin(), x.end()), eval_scalar(e, x)};
}

struct MaResidual {
    double raw = 0.0;        // det of the jet Hessian
    double normalized = 0.0; // |det| / max(||Hess||_F^n, 1e-300), scale-free
};

// A Hessian whose entries sit this far below the evaluation scale of f is
// indistinguishable from zero in binary64: its determinant is zero at float
// resolution. Without this guard, a function whose true Hessian vanishes
// (e.g. ((a x + b y)^{1/2})^2, exactly linear) leaves ||Hess|| at pure
// rounding noise and |det|/||Hess||^n becomes meaningless.
inline constexpr double kHessianResolutionTol = 1e-12;

inline MaResidual ma_residual(const Expr& e, std::span<const double> point) {
    const Jet2 j = jet_eval(e, point);
    MaResidual r;
    r.raw = determinant(j.hessian());

    double xbar = 1.0, gmax = 0.0;
    for (int i = 0; i < j.dim(); ++i) {
        xbar = std::max(xbar, std::abs(point[static_cast<std::size_t>(i)]));
        gmax = std::max(gmax, std::abs(j.gradient()[static_cast<std::size_t>(i)]));
    }
    const double hscale = j.hessian().max_abs() * xbar * xbar;
    const double fscale = std::max({std::abs(j.value()), gmax * xbar, hscale});
    if (hscale <= kHessianResolutionTol * std::max(fscale, 1e-300)) {
        r.normalized = 0.0;
        return r;
    }
    const double scale = std::pow(j.hessian().frobenius_norm(), j.dim());
    r.normalized = std::abs(r.raw) / std::max(scale, 1e-300);
    return r;
}

// K = det(Hess f) / (1 + |grad f|^2)^{(n+2)/2}, upward unit normal. Same sign
// and zero set as the raw Monge-Ampere residual: the denominator is positive.
inline double gauss_kronecker(const Expr& e, std::span<const double> point) {
    const Jet2 j = jet_eval(e, point);
    double g2 = 0.0;
    for (const double gi : j.gradient()) g2 += gi * gi;
    const double n = static_cast<double>(j.dim());
    return determinant(j.hessian()) / std::pow(1.0 + g2, 0.5 * (n + 2.0));
}

enum class Flatness { Flat, NotFlat, Indeterminate };

inline const char* to_string(Flatness v) {
    switch (v) {
    case Flatness::Flat: return "flat";
    case Flatness::NotFlat: return "not_flat";
    case Flatness::Indeterminate: return "indeterminate";
    }
    return "?";
}

struct FlatnessVerdict {
    Flatness verdict = Flatness::Indeterminate;
    double max_normalized_residual = 0.0;
    double max_raw_residual = 0.0;                // at the same argmax point
    std::optional<std::vector<double>> witness;   // present iff NotFlat
};

// Max normalized residual over the samples; the witness is the argmax point
// (lowest sample index wins ties).
inline FlatnessVerdict flatness(const Expr& e, std::span<const std::vector<double>> samples,
                                double flat_tol = kFlatTol, double reject_tol = kRejectTol) {
    if (samples.empty()) throw Error("flatness: need at least one sample");
    FlatnessVerdict out;
    std::size_t argmax = 0;
    bool first = true;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const MaResidual r = ma_residual(e, samples[k]);
        if (first || r.normalized > out.max_normalized_residual) {
            out.max_normalized_residual = r.normalized;
            out.max_raw_residual = r.raw;
            argmax = k;
            first = false;
        }
    }
    if (out.max_normalized_residual < flat_tol) {
        out.verdict = Flatness::Flat;
    } else if (out.max_normalized_residual > reject_tol) {
        out.verdict = Flatness::NotFlat;
        out.witness = samples[argmax];
    } else {
        out.verdict = Flatness::Indeterminate;
    }
    return out;
}

inline FlatnessVerdict flatness(const Expr& e, int arity, int samples = kDefaultFlatnessSamples,
                                std::uint64_t seed = 42, double flat_tol = kFlatTol,
                                double reject_tol = kRejectTol) {
    const auto pts = sample_box(arity, samples, seed);
    return flatness(e, pts, flat_tol, reject_tol);
}

} // namespace homma
