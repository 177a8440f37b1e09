#pragma once

#include <map>
#include <string>
#include <vector>

#include "fglnh/fgl.hpp"
#include "fglnh/perm.hpp"
#include "fglnh/series.hpp"

namespace fglnh {

// Finite sum Σ_w c_w·w over Σ_n with difference-fraction coefficients; the
// exact home of the operators x_i, ∂_i and their products.  Composition obeys
// the twist law (c·w)∘(d·v) = (c·w(d))·(wv).
class TwistedOperator {
  public:
    using CoeffMap = std::map<Perm, DiffFraction>;

    TwistedOperator(RingPtr ring, int n, int trunc);
    static TwistedOperator from_series(TruncSeries f);  // f·e
    static TwistedOperator term(DiffFraction c, Perm w);

    int strands() const { return n_; }
    int trunc_order() const { return trunc_; }
    const RingPtr& ring() const { return ring_; }
    const CoeffMap& coeffs() const { return coeffs_; }

    DiffFraction coeff(const Perm& w) const;
    void add_term(const Perm& w, const DiffFraction& c);

    TwistedOperator compose(const TwistedOperator& other) const;
    TwistedOperator operator+(const TwistedOperator& other) const;
    TwistedOperator operator-(const TwistedOperator& other) const;
    TwistedOperator operator-() const;

    // Action on a power series; throws NotDivisible when a genuine pole
    // appears (insufficient degree margin).
    TruncSeries apply(const TruncSeries& f) const;

    // Minimum numerator valid_order across coefficients.
    int certified_order() const;

  private:
    RingPtr ring_;
    int n_;
    int trunc_;
    CoeffMap coeffs_;
};

struct OpCompare {
    bool equal = true;
    int first_failing_degree = -1;  // lowest nonzero numerator degree of the difference
    int certified_order = 0;
};
OpCompare op_equal(const TwistedOperator& a, const TwistedOperator& b);

struct Generators {
    std::vector<TwistedOperator> x;    // x[i] is x_{i+1}
    std::vector<TwistedOperator> del;  // del[i] is ∂_{i+1}
};
Generators build_generators(const FormalGroupLaw& fgl, int n, int trunc);

// s = 1/(x1 -_F x2) + 1/(x2 -_F x1),  t = (x1 - x2)/(x1 -_F x2); both are
// denominator-free and, in graded mode, homogeneous of degree -2 and 0.
std::pair<TruncSeries, TruncSeries> deformation_st(const FormalGroupLaw& fgl);

// The two three-term braid-deformation series in (x1, x2, x3), homogeneous of
// degree -4 in graded mode.
std::pair<TruncSeries, TruncSeries> deformation_lr(const FormalGroupLaw& fgl);

// Independent route: solve ∂2∂1∂2 - ∂1∂2∂1 = l·∂1 + r·∂2 coefficientwise in
// the Σ3 basis and verify the residual vanishes.
std::pair<TruncSeries, TruncSeries> braid_obstruction(const FormalGroupLaw& fgl, int trunc);

struct RelationCheck {
    std::string name;
    bool applicable = true;
    bool pass = true;
    int first_failing_degree = -1;
    int certified_order = 0;
};

struct VerifyReport {
    std::vector<RelationCheck> checks;
    int certified_order = 0;
    bool all_pass() const;
};

// Every GNH_n relation instance checked as an exact identity in the twisted
// group algebra.  Demands trunc ≥ 6; braid checks require n ≥ 3 and are
// reported "not applicable" for n = 2.
VerifyReport verify_presentation(const FormalGroupLaw& fgl, int n, int trunc);

// For a symmetric formal group law: s = 0, r = -l, and ∂_i² = 0.
VerifyReport symmetric_simplification(const FormalGroupLaw& fgl);

struct DeformationDelta {
    TruncSeries ds, dt;  // 2 vars
    TruncSeries dl, dr;  // 3 vars
};
// ε-linear parts of (s,t,l,r) for F + ε·F1 over the dual numbers.
DeformationDelta first_order_delta(const FormalGroupLaw& fgl, const TruncSeries& F1);

struct Presentation {
    std::string fgl_name;
    std::string spec_hash;
    int n = 0;
    int trunc = 0;
    int valid = 0;
    bool graded = true;
    bool symmetric = false;
    TruncSeries s, t;  // in (x1, x2)
    TruncSeries l, r;  // in (x1, x2, x3)
    TruncSeries diff_unit_recip;  // (x - y)/(x -_F y), recorded as metadata
};

Presentation emit_presentation(const FormalGroupLaw& fgl, int n, int trunc,
                               const std::string& spec_hash = "");

std::string presentation_text(const Presentation& p);
std::string presentation_latex(const Presentation& p);
nlohmann::ordered_json presentation_json(const Presentation& p,
                                         const VerifyReport* report = nullptr);

nlohmann::ordered_json series_to_json(const TruncSeries& s);
TruncSeries series_from_json(const nlohmann::ordered_json& j, const RingPtr& ring, int nvars,
                             int trunc, int valid);

}  // namespace fglnh
