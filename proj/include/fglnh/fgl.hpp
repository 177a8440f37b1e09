#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fglnh/series.hpp"

namespace fglnh {

struct AxiomReport {
    struct Entry {
        std::string name;
        bool pass = true;
        int first_failing_degree = -1;
    };
    std::vector<Entry> entries;

    bool all_pass() const;
    const Entry* first_failure() const;
};

// A formal group law description as read from a spec file or the catalog.
struct FglSpec {
    enum class Form { Polynomial, Rational, SqrtRational, Log };

    std::string name;
    bool graded = true;
    std::vector<Param> params;
    Form form = Form::Polynomial;
    std::string expr;                     // polynomial: F(x,y)
    std::string num, den;                 // rational: num/den, den(0,0) = 1
    std::string q;                        // sqrt_rational: Q(u); den as above
    std::vector<std::string> log_coeffs;  // log: log x = x + c1·x² + c2·x³ + …

    static FglSpec from_json(const nlohmann::ordered_json& j);
    static FglSpec from_file(const std::string& path);
    nlohmann::ordered_json to_json() const;
    std::string hash() const;
};

class FormalGroupLaw {
  public:
    // Validates all axioms; throws AxiomViolation / GradingViolation.
    static FormalGroupLaw from_series(TruncSeries F, std::string name);
    static FormalGroupLaw from_spec(const FglSpec& spec, int trunc);
    // name ∈ {additive, multiplicative, chi, euler, universal_rational(k)}.
    static FormalGroupLaw catalog(const std::string& name, int trunc);
    static FglSpec catalog_spec(const std::string& name);

    const RingPtr& ring() const { return ring_; }
    bool graded() const { return ring_->graded; }
    const std::string& name() const { return name_; }
    int trunc_order() const { return F_.trunc_order(); }
    int valid_order() const { return F_.valid_order(); }

    const TruncSeries& F() const { return F_; }
    const TruncSeries& inverse() const { return inv_; }
    // u(x,y) with F(x, inv(y)) = (x-y)·u(x,y); u(0,0) = 1.
    const TruncSeries& diff_unit() const { return unit_; }
    // 1/u = (x - y)/(x -_F y).
    const TruncSeries& diff_unit_recip() const { return unit_recip_; }
    const TruncSeries& log() const { return log_; }
    const TruncSeries& exp() const { return exp_; }

    AxiomReport check_axioms() const;
    bool is_symmetric() const;

    // (u, 1/(x -_F y)) as a difference fraction over {(1,2)}.
    std::pair<TruncSeries, DiffFraction> formal_diff() const;
    // 1/(x_a -_F x_b) embedded into nvars variables, a ≠ b.
    DiffFraction recip_diff(int a, int b, int nvars) const;

    // ρ(ℂP⁰..ℂPᴺ); ρ(ℂPⁿ) = (n+1)·[x^{n+1}] log.
    std::vector<Coeff> genus(int N) const;

    bool hom_check(const TruncSeries& phi, const FormalGroupLaw& G) const;

    // F + εd·F1 over the ring extended by a square-zero parameter; the axiom
    // check over the dual numbers is the first-order cocycle condition.
    FormalGroupLaw perturb(const TruncSeries& F1) const;
    static constexpr const char* kEpsilonName = "εd";

    FormalGroupLaw specialize(const std::map<std::string, Coeff>& bindings, const RingPtr& target,
                              const std::string& new_name) const;

  private:
    FormalGroupLaw(RingPtr ring, TruncSeries F);

    RingPtr ring_;
    std::string name_;
    TruncSeries F_;           // 2 vars
    TruncSeries inv_;         // 1 var
    TruncSeries unit_;        // 2 vars
    TruncSeries unit_recip_;  // 2 vars
    TruncSeries log_;         // 1 var
    TruncSeries exp_;         // 1 var

    void populate_caches();
    AxiomReport run_axiom_checks() const;
};

// Lowest total degree at which two series differ (-1 if equal up to `upto`).
int first_difference_degree(const TruncSeries& a, const TruncSeries& b, int upto);

}  // namespace fglnh
