#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fglnh/errors.hpp"

namespace fglnh {

// A named graded parameter of the coefficient ring, e.g. β in degree -2.
// nilpotent_order = 2 models a dual number (ε² = 0); absent means free.
struct Param {
    std::string name;
    int degree = 0;
    std::optional<int> nilpotent_order;
};

struct Ring {
    std::vector<Param> params;
    bool graded = true;

    int index_of(const std::string& name) const;
    bool same_as(const Ring& other) const;
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(std::vector<Param> params, bool graded = true);
RingPtr rational_ring(bool graded = true);

// Ring extended by additional parameters (appended after the existing ones).
RingPtr extend_ring(const RingPtr& ring, std::vector<Param> extra);

std::string format_rational(const mpq_class& q);
mpq_class parse_rational(const std::string& text);

// Element of the graded coefficient ring: a sparse polynomial in the ring's
// parameters with arbitrary-precision rational coefficients.  Exponents of a
// nilpotent parameter at or above its order are dropped on construction.
class Coeff {
  public:
    using TermMap = std::map<std::vector<int>, mpq_class>;

    explicit Coeff(RingPtr ring);
    static Coeff rational(RingPtr ring, const mpq_class& value);
    static Coeff parameter(RingPtr ring, const std::string& name, int power = 1);
    static Coeff from_terms(RingPtr ring, TermMap terms);

    const RingPtr& ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    bool is_rational() const;
    // Coefficient of the empty parameter monomial.
    mpq_class rational_part() const;

    Coeff operator+(const Coeff& other) const;
    Coeff operator-(const Coeff& other) const;
    Coeff operator*(const Coeff& other) const;
    Coeff operator-() const;
    Coeff operator*(const mpq_class& scalar) const;
    bool operator==(const Coeff& other) const;

    // Topological degree of a monomial is Σ exponent·param.degree.  Zero is
    // homogeneous of every degree.
    bool is_homogeneous(int degree) const;
    // Homogeneous degree, if the element has one (nullopt for zero or mixed).
    std::optional<int> homogeneous_degree() const;

    // Inverse of a degree-0 element with nonzero rational part, via the
    // geometric series in its nilpotent tail.
    Coeff invert_degree_zero() const;

    // Substitution homomorphism.  Bound parameters are replaced by their
    // values (which live in `target`); unbound parameters carry through and
    // must exist in `target` with matching declaration.
    Coeff specialize(const std::map<std::string, Coeff>& bindings, const RingPtr& target) const;

    // Lift into a ring that contains every parameter of the current ring.
    Coeff extend(const RingPtr& target) const;

    // Split off the part linear in the named (nilpotent) parameter:
    // returns (part with exponent 0, coefficient of the parameter) and
    // drops the parameter from both results' support.
    std::pair<Coeff, Coeff> split_linear(const std::string& param, const RingPtr& base) const;

    std::string to_string() const;

  private:
    RingPtr ring_;
    TermMap terms_;

    void insert_term(std::vector<int> exps, const mpq_class& value);
};

void require_same_ring(const RingPtr& a, const RingPtr& b);

}  // namespace fglnh
