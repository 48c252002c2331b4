#pragma once

#include <stdexcept>
#include <string>

namespace fairdiv {

// Base for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- usage / input errors -------------------------------------------------

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};

struct MalformedLP : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

// Exhaustive computation would exceed the supported desk scale.
struct TooLarge : Error {
    using Error::Error;
};

struct ParameterTooLarge : Error {
    using Error::Error;
};

struct SearchSpaceTooLarge : Error {
    using Error::Error;
};

struct Unsplittable : Error {
    using Error::Error;
};

// Input does not satisfy the hypothesis of the statement being checked.
struct HypothesisViolated : Error {
    using Error::Error;
};

struct IllegalBid : Error {
    using Error::Error;
};

struct IllegalSelection : Error {
    using Error::Error;
};

// --- falsifications ---------------------------------------------------------
//
// A Falsification means a checked mathematical claim failed on a concrete
// input. These are never masked: they propagate to the caller and map to a
// distinct CLI exit code.

struct Falsification : Error {
    using Error::Error;
};

struct RelationViolated : Falsification {
    using Falsification::Falsification;
};

struct TheoremViolated : Falsification {
    using Falsification::Falsification;
};

struct LemmaViolated : Falsification {
    using Falsification::Falsification;
};

struct BoundViolated : Falsification {
    using Falsification::Falsification;
};

struct GuaranteeViolated : Falsification {
    using Falsification::Falsification;
};

struct StrategyFailed : Falsification {
    using Falsification::Falsification;
};

struct StepBudgetExhausted : Falsification {
    using Falsification::Falsification;
};

}  // namespace fairdiv
