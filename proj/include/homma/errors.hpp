// Error taxonomy shared by the whole library. Everything derives from
// homma::Error so callers can catch one type; the CLI maps concrete types
// to exit codes.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace homma {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- parsing ----------------------------------------------------------------

struct SyntaxError : Error {
    SyntaxError(std::size_t position, std::string expected_tokens, const std::string& what)
        : Error(what), position(position), expected(std::move(expected_tokens)) {}
    std::size_t position; // 0-based byte offset into the source text
    std::string expected; // human-readable expected-token set
};

struct UnknownIdentifier : Error {
    UnknownIdentifier(std::string ident, std::size_t position, const std::string& what)
        : Error(what), name(std::move(ident)), position(position) {}
    std::string name;
    std::size_t position;
};

struct ArityError : Error {
    using Error::Error;
};

// -- evaluation -------------------------------------------------------------

struct ArityMismatch : Error {
    using Error::Error;
};

struct DomainError : Error {
    DomainError(const std::string& what, std::string subexpression, double offending)
        : Error(what), subexpression(std::move(subexpression)), value(offending) {}
    std::string subexpression;
    double value;
};

struct DerivativeSingularity : Error {
    DerivativeSingularity(const std::string& what, std::string subexpression, double offending)
        : Error(what), subexpression(std::move(subexpression)), value(offending) {}
    std::string subexpression;
    double value;
};

// -- linear algebra ---------------------------------------------------------

struct OrderError : Error {
    using Error::Error;
};

struct DimensionError : Error {
    using Error::Error;
};

// -- homogeneity diagnostics ------------------------------------------------

struct ZeroValue : Error {
    using Error::Error;
};

struct ZeroDerivative : Error {
    using Error::Error;
};

// -- homothetic analysis ----------------------------------------------------

struct ZeroFPrime : Error {
    using Error::Error;
};

struct DegreeOne : Error {
    using Error::Error;
};

struct NotLinearlyHomogeneous : Error {
    using Error::Error;
};

struct InvalidSpec : Error {
    using Error::Error;
};

// Classifier found the surface flat but neither theorem case verifies.
// Never silently mapped to a case.
struct Inconsistent : Error {
    Inconsistent(const std::string& what, std::string evidence_json)
        : Error(what), evidence(std::move(evidence_json)) {}
    std::string evidence;
};

struct UnsupportedOuter : Error {
    using Error::Error;
};

// Analytic flatness prediction contradicts the numerical verdict.
struct Mismatch : Error {
    using Error::Error;
};

struct ToleranceExceeded : Error {
    using Error::Error;
};

struct UsageError : Error {
    using Error::Error;
};

} // namespace homma
