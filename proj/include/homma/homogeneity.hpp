// Homogeneity diagnostics: Euler relations, degree estimation, marginal rates
// of substitution and the "linearly homogeneous up to constants" probe used by
// the classification theorems.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "homma/jet.hpp"
#include "homma/sampling.hpp"

namespace homma {

// spread <= kHomogeneitySpreadTol accepts a function as homogeneous;
// radial affinity <= kRadialAffinityTol accepts "linearly homogeneous up to
// constants". Two orders of margin above observed float noise on the battery.
inline constexpr double kHomogeneitySpreadTol = 1e-7;
inline constexpr double kRadialAffinityTol = 1e-6;

struct DegreeEstimate {
    double degree = 0.0; // median of pointwise estimates
    double spread = 0.0; // max - min
    int points_used = 0;

    bool homogeneous(double tol = kHomogeneitySpreadTol) const { return spread <= tol; }
};

// |x . grad e - d e| / max(|d e|, |e|, 1e-12). Zero iff the Euler relation
// holds at the point; the |e| floor keeps the d=0 probe bounded.
inline double euler_residual(const Expr& e, std::span<const double> point, double degree) {
    const Jet2 j = jet_eval(e, point);
    double dot = 0.0;
    for (int i = 0; i < j.dim(); ++i) dot += point[static_cast<std::size_t>(i)] * j.gradient()[static_cast<std::size_t>(i)];
    const double rhs = degree * j.value();
    const double denom = std::max({std::abs(rhs), std::abs(j.value()), 1e-12});
    return std::abs(dot - rhs) / denom;
}

// Pointwise d = (x . grad e) / e, median over the points.
inline DegreeEstimate estimate_degree(const Expr& e, std::span<const std::vector<double>> points) {
    std::vector<double> ds;
    ds.reserve(points.size());
    for (const auto& p : points) {
        const Jet2 j = jet_eval(e, p);
        if (j.value() == 0.0)
            throw ZeroValue("estimate_degree: expression vanishes at a sample point");
        double dot = 0.0;
        for (int i = 0; i < j.dim(); ++i) dot += p[static_cast<std::size_t>(i)] * j.gradient()[static_cast<std::size_t>(i)];
        ds.push_back(dot / j.value());
    }
    std::sort(ds.begin(), ds.end());
    DegreeEstimate out;
    out.points_used = static_cast<int>(ds.size());
    const std::size_t m = ds.size();
    out.degree = (m % 2 == 1) ? ds[m / 2] : 0.5 * (ds[m / 2 - 1] + ds[m / 2]);
    out.spread = ds.back() - ds.front();
    return out;
}

inline DegreeEstimate estimate_degree(const Expr& e, int arity, int samples = 20,
                                      std::uint64_t seed = 42) {
    const auto pts = sample_box(arity, samples, seed);
    return estimate_degree(e, pts);
}

// ||Hess(e) x - (d-1) grad e||_inf normalized by
// max(||(d-1) grad e||_inf, ||Hess||_max ||x||_inf, 1e-12). The Hessian-scale
// floor keeps the d=1 case meaningful under float noise.
inline double second_euler_residual(const Expr& e, std::span<const double> point, double degree) {
    const Jet2 j = jet_eval(e, point);
    const auto hx = j.hessian().apply(point);
    double num = 0.0, rhs_norm = 0.0, xmax = 0.0;
    for (int i = 0; i < j.dim(); ++i) {
        const double rhs = (degree - 1.0) * j.gradient()[static_cast<std::size_t>(i)];
        num = std::max(num, std::abs(hx[static_cast<std::size_t>(i)] - rhs));
        rhs_norm = std::max(rhs_norm, std::abs(rhs));
        xmax = std::max(xmax, std::abs(point[static_cast<std::size_t>(i)]));
    }
    const double denom = std::max({rhs_norm, j.hessian().max_abs() * xmax, 1e-12});
    return num / denom;
}

// Marginal rate of substitution (e_i / e_j); the isoquant slope.
inline double mrs(const Expr& e, std::span<const double> point, int i, int j) {
    if (i == j) return 1.0;
    const Jet2 jet = jet_eval(e, point);
    if (i < 0 || j < 0 || i >= jet.dim() || j >= jet.dim())
        throw DimensionError("mrs: variable index out of range");
    const double denom = jet.gradient()[static_cast<std::size_t>(j)];
    if (denom == 0.0) throw ZeroDerivative("mrs: derivative with respect to x" + std::to_string(j + 1) + " vanishes");
    return jet.gradient()[static_cast<std::size_t>(i)] / denom;
}

// Homothetic functions have MRS homogeneous of degree zero: the slopes of the
// isoquants are constant along rays. Max over variable pairs i < j of the
// relative MRS drift between x and t x.
inline double mrs_degree_zero_residual(const Expr& e, std::span<const double> point, double t) {
    if (!(t > 0.0)) throw Error("mrs_degree_zero_residual: t must be positive");
    const int n = static_cast<int>(point.size());
    std::vector<double> scaled(point.begin(), point.end());
    for (auto& c : scaled) c *= t;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double base = mrs(e, point, i, j);
            const double moved = mrs(e, scaled, i, j);
            worst = std::max(worst, std::abs(moved - base) / std::max(std::abs(base), 1e-12));
        }
    return worst;
}

namespace detail {

struct AffineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // max |y - fit| / max(max|y|, 1e-12)
};

inline AffineFit fit_affine(std::span<const double> ts, std::span<const double> ys) {
    const std::size_t m = ts.size();
    double tbar = 0.0, ybar = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        tbar += ts[k];
        ybar += ys[k];
    }
    tbar /= static_cast<double>(m);
    ybar /= static_cast<double>(m);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        num += (ts[k] - tbar) * (ys[k] - ybar);
        den += (ts[k] - tbar) * (ts[k] - tbar);
    }
    AffineFit fit;
    fit.slope = num / den;
    fit.intercept = ybar - fit.slope * tbar;
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        worst = std::max(worst, std::abs(ys[k] - (fit.slope * ts[k] + fit.intercept)));
        scale = std::max(scale, std::abs(ys[k]));
    }
    fit.residual = worst / std::max(scale, 1e-12);
    return fit;
}

} // namespace detail

inline const std::vector<double>& default_ray_scales() {
    static const std::vector<double> ts = {0.5, 1.0, 1.5, 2.0, 3.0};
    return ts;
}

// f is linearly homogeneous up to an additive constant iff t -> f(t x) is
// affine in t with an x-independent intercept. Returns the max of the affine
// fit residual at `point` and the intercept variation over a fixed probe set.
inline double radial_affinity_residual(const Expr& e, std::span<const double> point,
                                       std::span<const double> ts) {
    if (ts.size() < 3) throw Error("radial_affinity_residual: need at least 3 scales");
    const int n = static_cast<int>(point.size());

    auto values_along_ray = [&](std::span<const double> base) {
        std::vector<double> ys;
        ys.reserve(ts.size());
        std::vector<double> p(base.begin(), base.end());
        for (const double t : ts) {
            for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = t * base[static_cast<std::size_t>(i)];
            ys.push_back(eval_scalar(e, p));
        }
        return ys;
    };

    const auto ys = values_along_ray(point);
    const auto fit = detail::fit_affine(ts, ys);
    double worst = fit.residual;

    double bmin = fit.intercept, bmax = fit.intercept, bscale = std::abs(fit.intercept);
    double yscale = 0.0;
    for (const double y : ys) yscale = std::max(yscale, std::abs(y));
    for (const auto& base : probe_points(n)) {
        const auto probe_ys = values_along_ray(base);
        const auto probe_fit = detail::fit_affine(ts, probe_ys);
        worst = std::max(worst, probe_fit.residual);
        bmin = std::min(bmin, probe_fit.intercept);
        bmax = std::max(bmax, probe_fit.intercept);
        bscale = std::max(bscale, std::abs(probe_fit.intercept));
        for (const double y : probe_ys) yscale = std::max(yscale, std::abs(y));
    }
    worst = std::max(worst, (bmax - bmin) / std::max({bscale, yscale, 1e-12}));
    return worst;
}

inline double radial_affinity_residual(const Expr& e, std::span<const double> point) {
    return radial_affinity_residual(e, point, default_ray_scales());
}

} // namespace homma
