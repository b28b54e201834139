// Second-order forward-mode jets: value, gradient and full (packed) Hessian
// propagated in one pass. For a unary g applied to a jet a:
//
//   value    g(a)
//   gradient g'(a) * grad a
//   hessian  g'(a) * Hess a + g''(a) * (grad a)(grad a)^T
//
// Products use the Leibniz rule, quotients multiply by the reciprocal jet.
// Also hosts the independent central-difference Hessian oracle.
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "homma/expr.hpp"
#include "homma/linalg.hpp"

namespace homma {

class Jet2 {
public:
    Jet2(double value, int dim) : v_(value), g_(static_cast<std::size_t>(dim), 0.0), h_(dim) {}

    static Jet2 variable(int index, double value, int dim) {
        Jet2 j(value, dim);
        j.g_[static_cast<std::size_t>(index)] = 1.0;
        return j;
    }

    int dim() const { return static_cast<int>(g_.size()); }
    double value() const { return v_; }
    const std::vector<double>& gradient() const { return g_; }
    const SymMatrix& hessian() const { return h_; }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r = a;
        r.v_ += b.v_;
        for (std::size_t i = 0; i < r.g_.size(); ++i) r.g_[i] += b.g_[i];
        for (int i = 0; i < r.dim(); ++i)
            for (int j = i; j < r.dim(); ++j) r.h_.at(i, j) += b.h_(i, j);
        return r;
    }

    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        Jet2 r = a;
        r.v_ -= b.v_;
        for (std::size_t i = 0; i < r.g_.size(); ++i) r.g_[i] -= b.g_[i];
        for (int i = 0; i < r.dim(); ++i)
            for (int j = i; j < r.dim(); ++j) r.h_.at(i, j) -= b.h_(i, j);
        return r;
    }

    friend Jet2 operator-(const Jet2& a) {
        Jet2 r = a;
        r.v_ = -r.v_;
        for (auto& gi : r.g_) gi = -gi;
        for (int i = 0; i < r.dim(); ++i)
            for (int j = i; j < r.dim(); ++j) r.h_.at(i, j) = -r.h_(i, j);
        return r;
    }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        const int n = a.dim();
        Jet2 r(a.v_ * b.v_, n);
        for (int i = 0; i < n; ++i)
            r.g_[static_cast<std::size_t>(i)] = a.v_ * b.g_[static_cast<std::size_t>(i)] +
                                                b.v_ * a.g_[static_cast<std::size_t>(i)];
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                r.h_.at(i, j) = a.v_ * b.h_(i, j) + b.v_ * a.h_(i, j) +
                                a.g_[static_cast<std::size_t>(i)] * b.g_[static_cast<std::size_t>(j)] +
                                a.g_[static_cast<std::size_t>(j)] * b.g_[static_cast<std::size_t>(i)];
        return r;
    }

    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        const double v = b.v_;
        return a * apply_unary(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
    }

    // Chain rule for a unary map given g(v), g'(v), g''(v).
    static Jet2 apply_unary(const Jet2& a, double g, double dg, double d2g) {
        const int n = a.dim();
        Jet2 r(g, n);
        for (int i = 0; i < n; ++i)
            r.g_[static_cast<std::size_t>(i)] = dg * a.g_[static_cast<std::size_t>(i)];
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                r.h_.at(i, j) = dg * a.h_(i, j) + d2g * a.g_[static_cast<std::size_t>(i)] *
                                                      a.g_[static_cast<std::size_t>(j)];
        return r;
    }

private:
    double v_;
    std::vector<double> g_;
    SymMatrix h_;
};

inline Jet2 log(const Jet2& a) {
    const double v = a.value();
    return Jet2::apply_unary(a, std::log(v), 1.0 / v, -1.0 / (v * v));
}

inline Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.value());
    return Jet2::apply_unary(a, e, e, e);
}

inline Jet2 sqrt(const Jet2& a) {
    const double s = std::sqrt(a.value());
    return Jet2::apply_unary(a, s, 0.5 / s, -0.25 / (s * a.value()));
}

// hooks for the generic evaluator
inline double scalar_value(const Jet2& j) { return j.value(); }
inline Jet2 constant_like(double c, const Jet2& proto) { return Jet2(c, proto.dim()); }
template <>
inline constexpr bool carries_derivatives_v<Jet2> = true;

inline Jet2 jet_eval(const Expr& e, std::span<const double> point) {
    const int n = static_cast<int>(point.size());
    std::vector<Jet2> seeds;
    seeds.reserve(point.size());
    for (int i = 0; i < n; ++i) seeds.push_back(Jet2::variable(i, point[static_cast<std::size_t>(i)], n));
    Jet2 r = eval_over<Jet2>(e, seeds);
    if (!std::isfinite(r.value()))
        throw DomainError("expression evaluated to a non-finite value", detail::describe(e), r.value());
    return r;
}

inline Jet2 jet_eval(const Expr& e, std::initializer_list<double> point) {
    return jet_eval(e, std::span<const double>(point.begin(), point.size()));
}

// Central-difference Hessian oracle, independent of the jet path. Steps are
// scaled per coordinate: h_i = step * max(1, |x_i|).
inline SymMatrix fd_hessian(const Expr& e, std::span<const double> point, double step = 1e-4) {
    if (step <= 0.0) throw Error("fd_hessian: step must be positive");
    const int n = static_cast<int>(point.size());
    std::vector<double> x(point.begin(), point.end());
    std::vector<double> h(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        h[static_cast<std::size_t>(i)] = step * std::max(1.0, std::abs(x[static_cast<std::size_t>(i)]));

    auto f = [&](const std::vector<double>& p) { return eval_scalar(e, p); };

    SymMatrix out(n);
    const double f0 = f(x);
    for (int i = 0; i < n; ++i) {
        const double hi = h[static_cast<std::size_t>(i)];
        auto p = x;
        p[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + hi;
        const double fp = f(p);
        p[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] - hi;
        const double fm = f(p);
        out.at(i, i) = (fp - 2.0 * f0 + fm) / (hi * hi);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double hi = h[static_cast<std::size_t>(i)];
            const double hj = h[static_cast<std::size_t>(j)];
            auto p = x;
            auto at = [&](double di, double dj) {
                p[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] + di;
                p[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + dj;
                return f(p);
            };
            // 4-point stencil, symmetric in (i,j) by construction
            out.at(i, j) = (at(hi, hj) - at(hi, -hj) - at(-hi, hj) + at(-hi, -hj)) / (4.0 * hi * hj);
        }
    return out;
}

// Max-norm relative difference between two Hessians, used against the oracle.
inline double hessian_rel_diff(const SymMatrix& a, const SymMatrix& b) {
    if (a.order() != b.order()) throw DimensionError("hessian_rel_diff: order mismatch");
    double num = 0.0;
    for (int i = 0; i < a.order(); ++i)
        for (int j = i; j < a.order(); ++j) num = std::max(num, std::abs(a(i, j) - b(i, j)));
    const double denom = std::max({a.max_abs(), b.max_abs(), 1e-12});
    return num / denom;
}

} // namespace homma
