#pragma once

#include <stdexcept>
#include <string>

namespace lambdavec {

// Raised by the text parsers (scalars, types, terms, programs).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Why a term failed to type check.
enum class TypeErrorKind {
    UnboundVariable,
    NotAnArrow,
    DomainMismatch,
    ForallExpected,
    EscapingTypeVar,
    HeterogeneousFunctionSummands,
    TypeMismatch,
};

const char* to_string(TypeErrorKind k);

struct TypeError : std::runtime_error {
    TypeErrorKind kind;
    TypeError(TypeErrorKind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
};

// Raised when a bounded operation (normalisation, closure enumeration,
// subtype search) runs out of its step budget.
struct FuelExhausted : std::runtime_error {
    explicit FuelExhausted(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised by order_leq when a rule-1 instance is needed but no typing
// evidence was supplied by the caller.
struct MissingEvidence : std::runtime_error {
    explicit MissingEvidence(const std::string& msg) : std::runtime_error(msg) {}
};

// A matrix application did not reach a normal form within its fuel.
struct NonNormalizable : std::runtime_error {
    explicit NonNormalizable(const std::string& msg) : std::runtime_error(msg) {}
};

// A matrix application normalized to something other than a linear
// combination of the basis terms; indicates an encoding bug.
struct NotABasisCombination : std::runtime_error {
    explicit NotABasisCombination(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lambdavec
