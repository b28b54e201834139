// Immutable expression trees for multivariate real functions, evaluable over
// any scalar-like algebra (plain double, second-order jets, ...).
//
// Construction goes through smart builders that fold literal-only subtrees;
// no other simplification is performed, so differentiation behavior stays
// predictable. `x ^ y` with a non-integer literal exponent is defined for
// x > 0 only and evaluates as exp(y * ln x); literal integer exponents use
// repeated multiplication and are valid for any x.
#pragma once

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "homma/errors.hpp"

namespace homma {

enum class ExprKind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Ln, Exp, Sqrt };

class Expr;
namespace detail {
Expr fold_or_build(ExprKind kind, std::vector<Expr> children);
}

class Expr {
public:
    Expr() = default; // empty handle; only assignment is valid afterwards

    static Expr constant(double value) {
        if (!std::isfinite(value)) throw Error("Expr constants must be finite");
        Expr e;
        e.node_ = std::make_shared<Node>(Node{ExprKind::Constant, value, -1, {}});
        return e;
    }

    static Expr variable(int index) {
        if (index < 0) throw ArityError("variable index must be non-negative");
        Expr e;
        e.node_ = std::make_shared<Node>(Node{ExprKind::Variable, 0.0, index, {}});
        return e;
    }

    bool valid() const { return node_ != nullptr; }
    ExprKind kind() const { return node_->kind; }
    double constant_value() const {
        assert(kind() == ExprKind::Constant);
        return node_->constant;
    }
    int var_index() const {
        assert(kind() == ExprKind::Variable);
        return node_->var;
    }
    std::size_t child_count() const { return node_->children.size(); }
    const Expr& child(std::size_t i) const { return node_->children[i]; }

    // Smallest arity this expression is evaluable at: max variable index + 1.
    int arity() const {
        int a = 0;
        visit_arity(*this, a);
        return a;
    }

private:
    struct Node {
        ExprKind kind;
        double constant;
        int var;
        std::vector<Expr> children;
    };

    static void visit_arity(const Expr& e, int& a) {
        if (e.kind() == ExprKind::Variable) {
            a = std::max(a, e.var_index() + 1);
            return;
        }
        for (std::size_t i = 0; i < e.child_count(); ++i) visit_arity(e.child(i), a);
    }

    friend Expr detail::fold_or_build(ExprKind, std::vector<Expr>);

    std::shared_ptr<const Node> node_;
};

// -- scalar evaluation core ---------------------------------------------------
//
// The generic evaluator needs three hooks per algebra T:
//   scalar_value(T)      -> the underlying point value (for domain checks)
//   constant_like(c, T&) -> a constant of the algebra matching T's shape
//   carries_derivatives<T> -> whether sqrt(0) must fail (derivative blows up)
// plus the usual operators and log/exp/sqrt via ADL.

inline double scalar_value(double x) { return x; }
inline double constant_like(double c, const double&) { return c; }

template <class T>
inline constexpr bool carries_derivatives_v = false;

namespace detail {

inline std::string describe(const Expr& e); // forward; defined after printer

template <class T>
T pow_by_squaring(const T& base, long long k) {
    // k >= 1
    T acc = base;
    long long have = 1;
    std::optional<T> result;
    while (true) {
        if (k & have) {
            result = result ? (*result) * acc : acc;
            k &= ~have;
            if (k == 0) break;
        }
        acc = acc * acc;
        have <<= 1;
    }
    return *result;
}

inline std::optional<long long> literal_integer_exponent(const Expr& exponent) {
    if (exponent.kind() != ExprKind::Constant) return std::nullopt;
    const double c = exponent.constant_value();
    if (std::rint(c) != c || std::abs(c) > 1e15) return std::nullopt;
    return static_cast<long long>(c);
}

template <class T>
T eval_impl(const Expr& e, std::span<const T> point) {
    using std::exp;
    using std::log;
    using std::sqrt;
    switch (e.kind()) {
    case ExprKind::Constant:
        return constant_like(e.constant_value(), point[0]);
    case ExprKind::Variable: {
        const int i = e.var_index();
        if (i >= static_cast<int>(point.size()))
            throw ArityMismatch("expression references variable #" + std::to_string(i + 1) +
                                " but the point has only " + std::to_string(point.size()) +
                                " coordinates");
        return point[static_cast<std::size_t>(i)];
    }
    case ExprKind::Add:
        return eval_impl(e.child(0), point) + eval_impl(e.child(1), point);
    case ExprKind::Sub:
        return eval_impl(e.child(0), point) - eval_impl(e.child(1), point);
    case ExprKind::Mul:
        return eval_impl(e.child(0), point) * eval_impl(e.child(1), point);
    case ExprKind::Div: {
        T num = eval_impl(e.child(0), point);
        T den = eval_impl(e.child(1), point);
        if (scalar_value(den) == 0.0)
            throw DomainError("division by zero in " + describe(e), describe(e.child(1)), 0.0);
        return num / den;
    }
    case ExprKind::Neg:
        return -eval_impl(e.child(0), point);
    case ExprKind::Ln: {
        T a = eval_impl(e.child(0), point);
        const double v = scalar_value(a);
        if (!(v > 0.0))
            throw DomainError("ln requires a positive argument in " + describe(e),
                              describe(e.child(0)), v);
        return log(a);
    }
    case ExprKind::Exp:
        return exp(eval_impl(e.child(0), point));
    case ExprKind::Sqrt: {
        T a = eval_impl(e.child(0), point);
        const double v = scalar_value(a);
        if (v < 0.0)
            throw DomainError("sqrt requires a non-negative argument in " + describe(e),
                              describe(e.child(0)), v);
        if (v == 0.0 && carries_derivatives_v<T>)
            throw DerivativeSingularity("sqrt has a derivative singularity at 0 in " + describe(e),
                                        describe(e.child(0)), v);
        return sqrt(a);
    }
    case ExprKind::Pow: {
        T base = eval_impl(e.child(0), point);
        if (auto k = literal_integer_exponent(e.child(1))) {
            if (*k == 0) return constant_like(1.0, point[0]);
            if (*k > 0) return pow_by_squaring(base, *k);
            if (scalar_value(base) == 0.0)
                throw DomainError("zero base with negative exponent in " + describe(e),
                                  describe(e.child(0)), 0.0);
            return constant_like(1.0, point[0]) / pow_by_squaring(base, -*k);
        }
        // general exponent: base^y = exp(y * ln base), base > 0 only
        const double bv = scalar_value(base);
        if (!(bv > 0.0))
            throw DomainError("non-integer power requires a positive base in " + describe(e),
                              describe(e.child(0)), bv);
        T y = eval_impl(e.child(1), point);
        return exp(y * log(base));
    }
    }
    throw Error("corrupt expression node");
}

} // namespace detail

// Evaluate over any scalar-like algebra. `point` must be non-empty even for
// constant expressions (it fixes the algebra's shape).
template <class T>
T eval_over(const Expr& e, std::span<const T> point) {
    if (point.empty()) throw ArityMismatch("evaluation point must have at least one coordinate");
    return detail::eval_impl(e, point);
}

inline double eval_scalar(const Expr& e, std::span<const double> point) {
    const double v = eval_over<double>(e, point);
    if (!std::isfinite(v))
        throw DomainError("expression evaluated to a non-finite value", detail::describe(e), v);
    return v;
}

inline double eval_scalar(const Expr& e, std::initializer_list<double> point) {
    return eval_scalar(e, std::span<const double>(point.begin(), point.size()));
}

// -- builders -----------------------------------------------------------------

namespace detail {

inline Expr fold_or_build(ExprKind kind, std::vector<Expr> children) {
    bool all_literal = true;
    for (const Expr& c : children)
        if (c.kind() != ExprKind::Constant) {
            all_literal = false;
            break;
        }
    if (all_literal && !children.empty()) {
        Expr raw;
        raw.node_ = std::make_shared<Expr::Node>(Expr::Node{kind, 0.0, -1, children});
        // Fold only when the literal subtree evaluates cleanly to a finite
        // value; otherwise keep the node and let evaluation report the error.
        try {
            const double dummy = 0.0;
            const double v = eval_over<double>(raw, std::span<const double>(&dummy, 1));
            if (std::isfinite(v)) return Expr::constant(v);
        } catch (const Error&) {
        }
        return raw;
    }
    Expr e;
    e.node_ = std::make_shared<Expr::Node>(Expr::Node{kind, 0.0, -1, std::move(children)});
    return e;
}

} // namespace detail

inline Expr operator+(Expr a, Expr b) {
    return detail::fold_or_build(ExprKind::Add, {std::move(a), std::move(b)});
}
inline Expr operator-(Expr a, Expr b) {
    return detail::fold_or_build(ExprKind::Sub, {std::move(a), std::move(b)});
}
inline Expr operator*(Expr a, Expr b) {
    return detail::fold_or_build(ExprKind::Mul, {std::move(a), std::move(b)});
}
inline Expr operator/(Expr a, Expr b) {
    return detail::fold_or_build(ExprKind::Div, {std::move(a), std::move(b)});
}
inline Expr operator-(Expr a) { return detail::fold_or_build(ExprKind::Neg, {std::move(a)}); }
inline Expr ln(Expr a) { return detail::fold_or_build(ExprKind::Ln, {std::move(a)}); }
inline Expr exp(Expr a) { return detail::fold_or_build(ExprKind::Exp, {std::move(a)}); }
inline Expr sqrt(Expr a) { return detail::fold_or_build(ExprKind::Sqrt, {std::move(a)}); }
inline Expr pow(Expr base, Expr exponent) {
    return detail::fold_or_build(ExprKind::Pow, {std::move(base), std::move(exponent)});
}
inline Expr pow(Expr base, double exponent) {
    return pow(std::move(base), Expr::constant(exponent));
}

// -- variable specifications ----------------------------------------------------

class VarSpec {
public:
    explicit VarSpec(std::vector<std::string> names) : names_(std::move(names)) {
        if (names_.empty()) throw ArityError("VarSpec needs at least one variable");
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j])
                    throw ArityError("duplicate variable name '" + names_[i] + "'");
    }

    static VarSpec numbered(int n, const std::string& prefix = "x") {
        std::vector<std::string> names;
        names.reserve(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
        return VarSpec(std::move(names));
    }

    int arity() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<int> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return std::nullopt;
    }

private:
    std::vector<std::string> names_;
};

// -- printer --------------------------------------------------------------------

// Shortest round-trip decimal form, '.' decimal point, locale-free.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Fully parenthesized form; parse(print(e)) is structurally equal to e.
inline std::string print(const Expr& e, const VarSpec& vars) {
    switch (e.kind()) {
    case ExprKind::Constant:
        return format_double(e.constant_value());
    case ExprKind::Variable: {
        const int i = e.var_index();
        if (i >= vars.arity())
            throw ArityMismatch("expression references variable #" + std::to_string(i + 1) +
                                " beyond the declared arity");
        return vars.name(i);
    }
    case ExprKind::Add:
        return "(" + print(e.child(0), vars) + " + " + print(e.child(1), vars) + ")";
    case ExprKind::Sub:
        return "(" + print(e.child(0), vars) + " - " + print(e.child(1), vars) + ")";
    case ExprKind::Mul:
        return "(" + print(e.child(0), vars) + " * " + print(e.child(1), vars) + ")";
    case ExprKind::Div:
        return "(" + print(e.child(0), vars) + " / " + print(e.child(1), vars) + ")";
    case ExprKind::Neg:
        return "(-" + print(e.child(0), vars) + ")";
    case ExprKind::Pow:
        return "(" + print(e.child(0), vars) + " ^ " + print(e.child(1), vars) + ")";
    case ExprKind::Ln:
        return "ln(" + print(e.child(0), vars) + ")";
    case ExprKind::Exp:
        return "exp(" + print(e.child(0), vars) + ")";
    case ExprKind::Sqrt:
        return "sqrt(" + print(e.child(0), vars) + ")";
    }
    throw Error("corrupt expression node");
}

namespace detail {
// Anonymous-variable rendering for error messages, where no VarSpec is at hand.
inline std::string describe(const Expr& e) {
    int n = e.arity();
    try {
        return print(e, VarSpec::numbered(std::max(n, 1)));
    } catch (const Error&) {
        return "<expr>";
    }
}
} // namespace detail

// -- structural equality ----------------------------------------------------------

inline bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case ExprKind::Constant:
        return a.constant_value() == b.constant_value();
    case ExprKind::Variable:
        return a.var_index() == b.var_index();
    default:
        if (a.child_count() != b.child_count()) return false;
        for (std::size_t i = 0; i < a.child_count(); ++i)
            if (!structurally_equal(a.child(i), b.child(i))) return false;
        return true;
    }
}

// -- substitution ------------------------------------------------------------------

// Replace variables by expressions. Unbound variables are kept. Rebuilding
// goes through the smart builders, so literal-only subtrees fold.
inline Expr substitute(const Expr& e, const std::map<int, Expr>& bindings) {
    switch (e.kind()) {
    case ExprKind::Constant:
        return e;
    case ExprKind::Variable: {
        const auto it = bindings.find(e.var_index());
        return it == bindings.end() ? e : it->second;
    }
    default: {
        std::vector<Expr> children;
        children.reserve(e.child_count());
        for (std::size_t i = 0; i < e.child_count(); ++i)
            children.push_back(substitute(e.child(i), bindings));
        return detail::fold_or_build(e.kind(), std::move(children));
    }
    }
}

} // namespace homma
