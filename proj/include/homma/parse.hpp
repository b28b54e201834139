// Recursive-descent parser for the expression grammar:
//
//   expr    := term { ("+"|"-") term }
//   term    := factor { ("*"|"/") factor }
//   factor  := unary [ "^" factor ]          (right-associative)
//   unary   := "-" unary | primary
//   primary := NUMBER | IDENT | IDENT "(" expr { "," expr } ")" | "(" expr ")"
//
// Builtin functions: ln, exp, sqrt. Numbers are decimal with an optional
// exponent. Identifiers resolve to declared variables or to --const bindings,
// which are folded to literals at parse time.
#pragma once

#include <charconv>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "homma/expr.hpp"

namespace homma {

using ConstBindings = std::map<std::string, double, std::less<>>;

namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string_view text;
    double number = 0.0;
};

inline bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
inline bool digit(char c) { return c >= '0' && c <= '9'; }

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        if (digit(c) || (c == '.' && i + 1 < src.size() && digit(src[i + 1]))) {
            std::size_t j = i;
            while (j < src.size() && digit(src[j])) ++j;
            if (j < src.size() && src[j] == '.') {
                ++j;
                while (j < src.size() && digit(src[j])) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && digit(src[k])) {
                    j = k;
                    while (j < src.size() && digit(src[j])) ++j;
                }
            }
            double value = 0.0;
            const auto res = std::from_chars(src.data() + i, src.data() + j, value);
            if (res.ec != std::errc{})
                throw SyntaxError(i, "number", "malformed number at position " + std::to_string(i));
            out.push_back({Tok::Number, i, src.substr(i, j - i), value});
            i = j;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            out.push_back({Tok::Ident, i, src.substr(i, j - i)});
            i = j;
            continue;
        }
        Tok kind;
        switch (c) {
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '/': kind = Tok::Slash; break;
        case '^': kind = Tok::Caret; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case ',': kind = Tok::Comma; break;
        default:
            throw SyntaxError(i, "operator, number, identifier or parenthesis",
                              std::string("unexpected character '") + c + "' at position " +
                                  std::to_string(i));
        }
        out.push_back({kind, i, src.substr(i, 1)});
        ++i;
    }
    out.push_back({Tok::End, src.size(), {}});
    return out;
}

class Parser {
public:
    Parser(std::string_view src, const VarSpec& vars, const ConstBindings& consts)
        : tokens_(tokenize(src)), vars_(vars), consts_(consts) {}

    Expr parse() {
        Expr e = parse_expr();
        if (peek().kind != Tok::End)
            throw SyntaxError(peek().pos, "end of input or operator",
                              "unexpected trailing input at position " + std::to_string(peek().pos));
        return e;
    }

private:
    const Token& peek() const { return tokens_[cursor_]; }
    Token advance() { return tokens_[cursor_++]; }
    bool accept(Tok k) {
        if (peek().kind == k) {
            ++cursor_;
            return true;
        }
        return false;
    }
    void expect(Tok k, const char* what) {
        if (!accept(k))
            throw SyntaxError(peek().pos, what,
                              std::string("expected ") + what + " at position " +
                                  std::to_string(peek().pos));
    }

    Expr parse_expr() {
        Expr e = parse_term();
        while (true) {
            if (accept(Tok::Plus)) e = e + parse_term();
            else if (accept(Tok::Minus)) e = e - parse_term();
            else return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        while (true) {
            if (accept(Tok::Star)) e = e * parse_factor();
            else if (accept(Tok::Slash)) e = e / parse_factor();
            else return e;
        }
    }

    Expr parse_factor() {
        Expr base = parse_unary();
        if (accept(Tok::Caret)) return pow(std::move(base), parse_factor());
        return base;
    }

    Expr parse_unary() {
        if (accept(Tok::Minus)) return -parse_unary();
        return parse_primary();
    }

    Expr parse_primary() {
        const Token t = peek();
        switch (t.kind) {
        case Tok::Number:
            advance();
            return Expr::constant(t.number);
        case Tok::Ident: {
            advance();
            const std::string_view name = t.text;
            const bool called = peek().kind == Tok::LParen;
            if (name == "ln" || name == "exp" || name == "sqrt") {
                if (!called)
                    throw SyntaxError(peek().pos, "(",
                                      "builtin function '" + std::string(name) +
                                          "' must be called; expected '(' at position " +
                                          std::to_string(peek().pos));
                const auto args = parse_call_args();
                if (args.size() != 1)
                    throw ArityError("builtin function '" + std::string(name) + "' takes 1 argument, got " +
                                     std::to_string(args.size()));
                if (name == "ln") return ln(args[0]);
                if (name == "exp") return exp(args[0]);
                return sqrt(args[0]);
            }
            if (called)
                throw UnknownIdentifier(std::string(name), t.pos,
                                        "unknown function '" + std::string(name) + "' at position " +
                                            std::to_string(t.pos));
            if (const auto idx = vars_.index_of(name)) return Expr::variable(*idx);
            if (const auto it = consts_.find(name); it != consts_.end())
                return Expr::constant(it->second);
            throw UnknownIdentifier(std::string(name), t.pos,
                                    "unknown identifier '" + std::string(name) + "' at position " +
                                        std::to_string(t.pos) +
                                        " (declare it as a variable or bind it with --const)");
        }
        case Tok::LParen: {
            advance();
            Expr e = parse_expr();
            expect(Tok::RParen, ")");
            return e;
        }
        default:
            throw SyntaxError(t.pos, "number, identifier, '-' or '('",
                              "expected expression at position " + std::to_string(t.pos));
        }
    }

    std::vector<Expr> parse_call_args() {
        expect(Tok::LParen, "(");
        std::vector<Expr> args;
        args.push_back(parse_expr());
        while (accept(Tok::Comma)) args.push_back(parse_expr());
        expect(Tok::RParen, ")");
        return args;
    }

    std::vector<Token> tokens_;
    std::size_t cursor_ = 0;
    const VarSpec& vars_;
    const ConstBindings& consts_;
};

} // namespace detail

inline Expr parse(std::string_view text, const VarSpec& vars, const ConstBindings& consts = {}) {
    if (text.empty()) throw SyntaxError(0, "expression", "empty expression");
    return detail::Parser(text, vars, consts).parse();
}

// Variable names in order of first appearance; used by the CLI when --vars is
// omitted. Builtin function names and bound constants are not variables.
inline std::vector<std::string> detect_variables(std::string_view text, const ConstBindings& consts = {}) {
    std::vector<std::string> names;
    for (const auto& tok : detail::tokenize(text)) {
        if (tok.kind != detail::Tok::Ident) continue;
        const std::string name(tok.text);
        if (name == "ln" || name == "exp" || name == "sqrt") continue;
        if (consts.count(name)) continue;
        bool seen = false;
        for (const auto& n : names)
            if (n == name) {
                seen = true;
                break;
            }
        if (!seen) names.push_back(name);
    }
    return names;
}

} // namespace homma
