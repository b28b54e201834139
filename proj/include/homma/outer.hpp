// The outer transform F of a homothetic function f = F(h), with closed-form
// F, F', F''. Families: affine, power, log, exp, plus expression-defined
// outers differentiated through the jet algebra.
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "homma/jet.hpp"
#include "homma/parse.hpp"

namespace homma {

class OuterFamily {
public:
    enum class Kind { Affine, Power, Log, Exp, ExprDefined };

    // F(u) = alpha * u + beta
    static OuterFamily affine(double alpha, double beta) {
        return OuterFamily(Kind::Affine, alpha, 0.0, beta, {});
    }
    // F(u) = alpha * u^p + beta
    static OuterFamily power(double alpha, double p, double beta) {
        return OuterFamily(Kind::Power, alpha, p, beta, {});
    }
    // F(u) = alpha * ln(u) + beta
    static OuterFamily log(double alpha, double beta) {
        return OuterFamily(Kind::Log, alpha, 0.0, beta, {});
    }
    // F(u) = alpha * exp(u) + beta
    static OuterFamily exp(double alpha, double beta) {
        return OuterFamily(Kind::Exp, alpha, 0.0, beta, {});
    }
    static OuterFamily identity() { return affine(1.0, 0.0); }

    static OuterFamily from_expr(Expr e) {
        if (e.arity() > 1) throw ArityError("an expression-defined outer must use a single variable");
        OuterFamily f(Kind::ExprDefined, 0.0, 0.0, 0.0, std::move(e));
        return f;
    }

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double exponent() const { return p_; }
    double beta() const { return beta_; }

    double value(double u) const {
        switch (kind_) {
        case Kind::Affine: return alpha_ * u + beta_;
        case Kind::Power: return alpha_ * power_value(u) + beta_;
        case Kind::Log: return alpha_ * std::log(check_positive(u)) + beta_;
        case Kind::Exp: return alpha_ * std::exp(u) + beta_;
        case Kind::ExprDefined: return jet1(u).value();
        }
        throw Error("corrupt outer family");
    }

    double d1(double u) const {
        switch (kind_) {
        case Kind::Affine: return alpha_;
        case Kind::Power: return alpha_ * p_ * power_value(u, p_ - 1.0);
        case Kind::Log: return alpha_ / check_positive(u);
        case Kind::Exp: return alpha_ * std::exp(u);
        case Kind::ExprDefined: return jet1(u).gradient()[0];
        }
        throw Error("corrupt outer family");
    }

    double d2(double u) const {
        switch (kind_) {
        case Kind::Affine: return 0.0;
        case Kind::Power: return alpha_ * p_ * (p_ - 1.0) * power_value(u, p_ - 2.0);
        case Kind::Log: {
            const double v = check_positive(u);
            return -alpha_ / (v * v);
        }
        case Kind::Exp: return alpha_ * std::exp(u);
        case Kind::ExprDefined: return jet1(u).hessian()(0, 0);
        }
        throw Error("corrupt outer family");
    }

    // F as a one-variable expression; substituting h for the variable yields
    // the composite f = F(h).
    Expr expr() const {
        const Expr u = Expr::variable(0);
        switch (kind_) {
        case Kind::Affine: return Expr::constant(alpha_) * u + Expr::constant(beta_);
        case Kind::Power:
            return Expr::constant(alpha_) * pow(u, Expr::constant(p_)) + Expr::constant(beta_);
        case Kind::Log: return Expr::constant(alpha_) * homma::ln(u) + Expr::constant(beta_);
        case Kind::Exp: return Expr::constant(alpha_) * homma::exp(u) + Expr::constant(beta_);
        case Kind::ExprDefined: return *expr_;
        }
        throw Error("corrupt outer family");
    }

    std::string describe() const {
        switch (kind_) {
        case Kind::Affine:
            return "affine(alpha=" + format_double(alpha_) + ",beta=" + format_double(beta_) + ")";
        case Kind::Power:
            return "power(alpha=" + format_double(alpha_) + ",p=" + format_double(p_) +
                   ",beta=" + format_double(beta_) + ")";
        case Kind::Log:
            return "log(alpha=" + format_double(alpha_) + ",beta=" + format_double(beta_) + ")";
        case Kind::Exp:
            return "exp(alpha=" + format_double(alpha_) + ",beta=" + format_double(beta_) + ")";
        case Kind::ExprDefined:
            return "expr(" + print(*expr_, VarSpec({"u"})) + ")";
        }
        return "?";
    }

    // Checks F' != 0 at the sample u's and that the closed-form derivatives
    // agree with central differences to 1e-6.
    void validate(std::span<const double> us) const {
        for (const double u : us) {
            const double fp = d1(u);
            if (fp == 0.0)
                throw ZeroFPrime("outer family has vanishing F' at u=" + format_double(u));
            // separate steps: the second difference loses ~eps/h^2 to rounding
            const double h1 = 1e-6 * std::max(1.0, std::abs(u));
            const double h2 = 1e-4 * std::max(1.0, std::abs(u));
            const double fd1 = (value(u + h1) - value(u - h1)) / (2.0 * h1);
            const double fd2 = (value(u + h2) - 2.0 * value(u) + value(u - h2)) / (h2 * h2);
            const double scale1 = std::max({std::abs(fp), std::abs(fd1), 1.0});
            const double scale2 = std::max({std::abs(d2(u)), std::abs(fd2), 1.0});
            if (std::abs(fp - fd1) / scale1 > 1e-6 || std::abs(d2(u) - fd2) / scale2 > 1e-6)
                throw Error("outer family derivative evaluators disagree with finite differences at u=" +
                            format_double(u));
        }
    }

private:
    OuterFamily(Kind k, double alpha, double p, double beta, std::optional<Expr> e)
        : kind_(k), alpha_(alpha), p_(p), beta_(beta), expr_(std::move(e)) {}

    static double check_positive(double u) {
        if (!(u > 0.0))
            throw DomainError("outer family requires a positive argument", "u", u);
        return u;
    }

    double power_value(double u, double p) const {
        if (std::rint(p) == p && std::abs(p) <= 64.0) {
            double r = 1.0;
            const bool invert = p < 0.0;
            for (long long k = 0; k < std::llabs(static_cast<long long>(p)); ++k) r *= u;
            if (invert && r == 0.0) throw DomainError("outer power at zero base", "u", u);
            return invert ? 1.0 / r : r;
        }
        return std::pow(check_positive(u), p);
    }
    double power_value(double u) const { return power_value(u, p_); }

    Jet2 jet1(double u) const {
        const double point[1] = {u};
        return jet_eval(*expr_, std::span<const double>(point, 1));
    }

    Kind kind_;
    double alpha_, p_, beta_;
    std::optional<Expr> expr_;
};

// CLI literal grammar: kind:key=value,key=value
//   affine:alpha=1,beta=0 | power:alpha=1,p=3,beta=0 | log:alpha=1,beta=0
//   exp:alpha=1,beta=0    | expr:u^2+1 | id
inline OuterFamily parse_outer(std::string_view text) {
    if (text == "id" || text == "identity") return OuterFamily::identity();
    const auto colon = text.find(':');
    const std::string kind(text.substr(0, colon));
    if (kind == "expr") {
        if (colon == std::string_view::npos || colon + 1 >= text.size())
            throw UsageError("outer literal 'expr:' needs an expression in u");
        return OuterFamily::from_expr(parse(text.substr(colon + 1), VarSpec({"u"})));
    }
    std::map<std::string, double> kv;
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos)
                throw UsageError("outer literal item '" + std::string(item) + "' is not key=value");
            double v = 0.0;
            const auto res = std::from_chars(item.data() + eq + 1, item.data() + item.size(), v);
            if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
                throw UsageError("outer literal value in '" + std::string(item) + "' is not a number");
            kv[std::string(item.substr(0, eq))] = v;
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    auto get = [&](const char* key, double fallback, bool required = false) {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            if (required) throw UsageError("outer literal '" + std::string(text) + "' is missing " + key);
            return fallback;
        }
        return it->second;
    };
    if (kind == "affine") return OuterFamily::affine(get("alpha", 1.0), get("beta", 0.0));
    if (kind == "power")
        return OuterFamily::power(get("alpha", 1.0), get("p", 0.0, true), get("beta", 0.0));
    if (kind == "log") return OuterFamily::log(get("alpha", 1.0), get("beta", 0.0));
    if (kind == "exp") return OuterFamily::exp(get("alpha", 1.0), get("beta", 0.0));
    throw UsageError("unknown outer family '" + kind + "' (expected affine|power|log|exp|expr|id)");
}

} // namespace homma
