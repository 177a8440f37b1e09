#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fglnh/coefring.hpp"

namespace fglnh {

struct Perm;

// Truncated multivariate power series in x_1..x_n, |x_i| = 2.  Terms of total
// x-degree above trunc_order are dropped; coefficients are guaranteed correct
// only up to valid_order ≤ trunc_order.
class TruncSeries {
  public:
    using TermMap = std::map<std::vector<int>, Coeff>;

    TruncSeries(RingPtr ring, int nvars, int trunc_order);
    TruncSeries(RingPtr ring, int nvars, int trunc_order, int valid_order);

    static TruncSeries zero(RingPtr ring, int nvars, int trunc);
    static TruncSeries constant(RingPtr ring, int nvars, Coeff value, int trunc);
    static TruncSeries one(RingPtr ring, int nvars, int trunc);
    static TruncSeries variable(RingPtr ring, int nvars, int index, int trunc);

    const RingPtr& ring() const { return ring_; }
    int nvars() const { return nvars_; }
    int trunc_order() const { return trunc_; }
    int valid_order() const { return valid_; }
    const TermMap& terms() const { return terms_; }

    void set_term(std::vector<int> exps, Coeff value);
    void add_term(const std::vector<int>& exps, const Coeff& value);

    bool is_zero() const { return terms_.empty(); }
    // Zero when every term of total degree ≤ upto vanishes.
    bool is_zero_upto(int upto) const;
    bool equal_upto(const TruncSeries& other, int upto) const;
    // Lowest total degree carrying a nonzero term (nullopt if zero).
    std::optional<int> lowest_degree() const;

    TruncSeries operator+(const TruncSeries& other) const;
    TruncSeries operator-(const TruncSeries& other) const;
    TruncSeries operator*(const TruncSeries& other) const;
    TruncSeries operator-() const;
    TruncSeries operator*(const Coeff& scalar) const;
    TruncSeries operator*(const mpq_class& scalar) const;

    // Exact coefficient of the monomial; throws BeyondValidOrder past valid_order.
    Coeff coeff(const std::vector<int>& exps) const;
    Coeff coeff_unchecked(const std::vector<int>& exps) const;
    Coeff constant_term() const;

    // Multiplicative inverse of a unit series, computed degree slice by slice.
    TruncSeries invert_unit() const;

    // Composition: bindings[i] replaces x_{i+1}; every binding must have zero
    // constant term and they must share nvars/ring.
    TruncSeries substitute(const std::vector<TruncSeries>& bindings) const;

    // Exchange x_{i} and x_{i+1} (1-based i, as in the s_i action).
    TruncSeries swap_vars(int i) const;
    // Relabel variable i to perm(i).
    TruncSeries permute(const Perm& w) const;

    // Exact division by (x_i - x_j), 1-based indices.  Requires the series to
    // vanish under x_i ↦ x_j up to valid_order; result valid_order drops by 1.
    TruncSeries divide_linear_diff(int i, int j) const;

    TruncSeries sqrt() const;

    TruncSeries derivative(int var) const;
    TruncSeries integrate(int var) const;

    // Place an m-variable series into n variables, variable k going to
    // positions[k] (1-based target indices).
    TruncSeries embed(int nvars, const std::vector<int>& positions) const;

    TruncSeries with_valid(int valid) const;
    TruncSeries with_trunc(int trunc) const;

    // Topological degree 2·(x-degree) + coefficient degree; zero passes.
    bool is_homogeneous(int topdegree) const;

    // Map every coefficient through a ring substitution.
    TruncSeries specialize_coeffs(const std::map<std::string, Coeff>& bindings,
                                  const RingPtr& target) const;
    TruncSeries extend_coeffs(const RingPtr& target) const;
    std::pair<TruncSeries, TruncSeries> split_linear(const std::string& param,
                                                     const RingPtr& base) const;

    // Canonical text form: terms sorted by (total degree, lex exponent).
    std::string to_string(const std::vector<std::string>& varnames = {}) const;

  private:
    RingPtr ring_;
    int nvars_;
    int trunc_;
    int valid_;
    TermMap terms_;

    void check_compatible(const TruncSeries& other) const;
};

// A series numerator over a multiset of linear-difference factors (x_i - x_j),
// the exact home of 1/(x_i -_F x_{i+1}).  Factors are stored with i < j; the
// orientation sign is absorbed into the numerator.
class DiffFraction {
  public:
    using Factor = std::pair<int, int>;  // 1-based, first < second
    using FactorMap = std::map<Factor, int>;

    explicit DiffFraction(TruncSeries num);
    DiffFraction(TruncSeries num, FactorMap denom);

    static DiffFraction zero(RingPtr ring, int nvars, int trunc);

    const TruncSeries& num() const { return num_; }
    const FactorMap& denom() const { return denom_; }
    int nvars() const { return num_.nvars(); }
    const RingPtr& ring() const { return num_.ring(); }

    // Append a factor (a - b) in either orientation; a > b negates the numerator.
    void push_factor(int a, int b);

    // Cancel every denominator factor that exactly divides the numerator.
    DiffFraction normalized() const;

    DiffFraction operator+(const DiffFraction& other) const;
    DiffFraction operator-(const DiffFraction& other) const;
    DiffFraction operator*(const DiffFraction& other) const;
    DiffFraction operator-() const;
    DiffFraction operator*(const TruncSeries& s) const;
    DiffFraction operator*(const Coeff& scalar) const;

    DiffFraction permute(const Perm& w) const;

    bool is_zero_upto(int upto) const { return num_.is_zero_upto(upto); }

    // The fraction as a genuine series; throws NotDivisible if a pole remains.
    TruncSeries as_series() const;

    std::string to_string(const std::vector<std::string>& varnames = {}) const;

  private:
    TruncSeries num_;
    FactorMap denom_;
};

}  // namespace fglnh
