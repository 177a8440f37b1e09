#pragma once

#include <stdexcept>
#include <string>

namespace fglnh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MismatchedRings : Error {
    MismatchedRings() : Error("operands live over different coefficient rings") {}
};

struct MismatchedArity : Error {
    MismatchedArity() : Error("operands have different numbers of variables") {}
};

struct NotInvertible : Error {
    NotInvertible() : Error("element has no inverse (rational part is zero)") {}
};

struct NotDegreeZero : Error {
    NotDegreeZero() : Error("element is not homogeneous of degree 0") {}
};

struct NotAUnit : Error {
    NotAUnit() : Error("series has no invertible constant term") {}
};

struct NonzeroConstantTerm : Error {
    NonzeroConstantTerm() : Error("substituted series must have zero constant term") {}
};

struct IndexOutOfRange : Error {
    IndexOutOfRange() : Error("variable index out of range") {}
};

struct NotDivisible : Error {
    explicit NotDivisible(const std::string& what = "series is not divisible by the linear difference")
        : Error(what) {}
};

struct BadConstantTerm : Error {
    BadConstantTerm() : Error("square root requires constant term 1") {}
};

struct BeyondValidOrder : Error {
    BeyondValidOrder() : Error("requested coefficient lies beyond the valid order") {}
};

struct TruncationExhausted : Error {
    TruncationExhausted() : Error("iteration failed to converge within the truncation order") {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

struct UnknownName : Error {
    explicit UnknownName(const std::string& name) : Error("unknown catalog name: " + name) {}
};

// Construction-time FGL axiom failure.  `axiom` is one of "unit",
// "commutativity", "associativity", "grading"; `degree` is the lowest
// x-degree at which the axiom fails.
struct AxiomViolation : Error {
    std::string axiom;
    int degree;
    AxiomViolation(std::string ax, int deg)
        : Error("formal group law axiom violated: " + ax + " (first failing degree " +
                std::to_string(deg) + ")"),
          axiom(std::move(ax)),
          degree(deg) {}
};

struct GradingViolation : Error {
    explicit GradingViolation(const std::string& what = "series is not homogeneous of the required degree")
        : Error(what) {}
};

struct NotSymmetric : Error {
    NotSymmetric() : Error("formal group law is not symmetric") {}
};

struct NoDependency : Error {
    NoDependency() : Error("braid residual does not lie in the span of the deformed generators") {}
};

}  // namespace fglnh
