#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>

#include "fglnh/nilhecke.hpp"
#include "fglnh/parse.hpp"

using namespace fglnh;
using json = nlohmann::ordered_json;

namespace {

// Independent oracle for the divided-difference action, series arithmetic
// only: ∂_i f = (g - s_i(g)) / (x_i - x_{i+1}) with g = f·u⁻¹(x_i, x_{i+1}).
TruncSeries direct_divided_difference(const FormalGroupLaw& fgl, const TruncSeries& f, int i) {
    TruncSeries g = f * fgl.diff_unit_recip().embed(f.nvars(), {i, i + 1});
    return (g - g.swap_vars(i)).divide_linear_diff(i, i + 1);
}

TruncSeries monomial(const RingPtr& ring, const std::vector<int>& exps, int trunc) {
    TruncSeries m(ring, static_cast<int>(exps.size()), trunc);
    m.set_term(exps, Coeff::rational(ring, 1));
    return m;
}

}  // namespace

TEST_CASE("twisted composition obeys the twist law") {
    RingPtr ring = rational_ring();
    int D = 8;
    TwistedOperator x1 = TwistedOperator::from_series(TruncSeries::variable(ring, 3, 1, D));
    TwistedOperator x2 = TwistedOperator::from_series(TruncSeries::variable(ring, 3, 2, D));
    TwistedOperator s1 =
        TwistedOperator::term(DiffFraction(TruncSeries::one(ring, 3, D)), Perm::adjacent(3, 1));
    // s1 ∘ x1 = x2 ∘ s1.
    OpCompare cmp = op_equal(s1.compose(x1), x2.compose(s1));
    CHECK(cmp.equal);
    // Permutation parts multiply: (s1 s2)(s2) = s1.
    TwistedOperator s2 =
        TwistedOperator::term(DiffFraction(TruncSeries::one(ring, 3, D)), Perm::adjacent(3, 2));
    TwistedOperator w = s1.compose(s2).compose(s2);
    CHECK(w.coeffs().size() == 1);
    CHECK(w.coeffs().begin()->first == Perm::adjacent(3, 1));
}

TEST_CASE("deformation series match the closed forms") {
    auto st = [](const std::string& name) {
        FormalGroupLaw fgl = FormalGroupLaw::catalog(name, 10);
        auto [s, t] = deformation_st(fgl);
        auto [l, r] = deformation_lr(fgl);
        return std::array<std::string, 4>{s.to_string(), t.to_string(), l.to_string(),
                                          r.to_string()};
    };
    auto add = st("additive");
    CHECK(add[0] == "0");
    CHECK(add[1] == "1");
    CHECK(add[2] == "0");
    CHECK(add[3] == "0");
    auto mult = st("multiplicative");
    CHECK(mult[0] == "β");
    CHECK(mult[1] == "1 - β*x2");
    CHECK(mult[2] == "0");
    CHECK(mult[3] == "0");
    auto chi = st("chi");
    CHECK(chi[0] == "β");
    CHECK(chi[1] == "1 - β*x2 - α*x1*x2");
    CHECK(chi[2] == "α");
    CHECK(chi[3] == "-α");
}

TEST_CASE("euler deformation is symmetric with nonzero braid defect") {
    FormalGroupLaw fgl = FormalGroupLaw::catalog("euler", 10);
    auto [s, t] = deformation_st(fgl);
    auto [l, r] = deformation_lr(fgl);
    CHECK(s.is_zero_upto(s.valid_order()));
    CHECK_FALSE(l.is_zero_upto(l.valid_order()));
    TruncSeries sum = l + r;
    CHECK(sum.is_zero_upto(sum.valid_order()));
    // Leading coefficient of l is the catalog parameter δ.
    CHECK(l.coeff({0, 0, 0}) == Coeff::parameter(fgl.ring(), "δ"));
}

TEST_CASE("graded deformation series have degrees -2, 0, -4, -4") {
    for (const auto& name : {"multiplicative", "chi", "euler"}) {
        FormalGroupLaw fgl = FormalGroupLaw::catalog(name, 8);
        auto [s, t] = deformation_st(fgl);
        auto [l, r] = deformation_lr(fgl);
        INFO(name);
        CHECK(s.is_homogeneous(-2));
        CHECK(t.is_homogeneous(0));
        CHECK(l.is_homogeneous(-4));
        CHECK(r.is_homogeneous(-4));
    }
}

TEST_CASE("generator action agrees with the direct divided-difference oracle") {
    for (const auto& name : {"additive", "multiplicative", "chi"}) {
        FormalGroupLaw fgl = FormalGroupLaw::catalog(name, 12);
        Generators gens = build_generators(fgl, 3, 12);
        INFO(name);
        for (int a = 0; a + 0 <= 6; ++a) {
            for (int b = 0; a + b <= 6; ++b) {
                for (int c = 0; a + b + c <= 6; ++c) {
                    TruncSeries f = monomial(fgl.ring(), {a, b, c}, 12);
                    for (int i = 1; i <= 2; ++i) {
                        TruncSeries via_op = gens.del[i - 1].apply(f);
                        TruncSeries direct = direct_divided_difference(fgl, f, i);
                        int upto = std::min(via_op.valid_order(), direct.valid_order());
                        CHECK(via_op.equal_upto(direct, upto));
                    }
                    for (int i = 1; i <= 3; ++i) {
                        TruncSeries via_op = gens.x[i - 1].apply(f);
                        TruncSeries direct =
                            f * TruncSeries::variable(fgl.ring(), 3, i, 12);
                        CHECK(via_op.equal_upto(direct, via_op.valid_order()));
                    }
                }
            }
        }
    }
}

TEST_CASE("every relation verifies for chi at n=3") {
    FormalGroupLaw fgl = FormalGroupLaw::catalog("chi", 10);
    VerifyReport report = verify_presentation(fgl, 3, 10);
    for (const auto& c : report.checks) {
        INFO(c.name);
        CHECK((!c.applicable || c.pass));
    }
    CHECK(report.all_pass());
    CHECK(report.certified_order >= 4);
}

TEST_CASE("n=2 marks braid relations not applicable") {
    FormalGroupLaw fgl = FormalGroupLaw::catalog("multiplicative", 8);
    VerifyReport report = verify_presentation(fgl, 2, 8);
    CHECK(report.all_pass());
    bool saw_na = false;
    for (const auto& c : report.checks)
        if (!c.applicable) saw_na = true;
    CHECK(saw_na);
    CHECK_THROWS_AS(verify_presentation(fgl, 2, 4), Error);
}

TEST_CASE("braid obstruction solver agrees with the closed forms") {
    for (const auto& name : {"additive", "multiplicative", "chi", "euler"}) {
        FormalGroupLaw fgl = FormalGroupLaw::catalog(name, 8);
        auto [l1, r1] = braid_obstruction(fgl, 8);
        auto [l2, r2] = deformation_lr(fgl);
        int upto = std::min({l1.valid_order(), l2.valid_order(), r1.valid_order(),
                             r2.valid_order()});
        INFO(name);
        CHECK(l1.equal_upto(l2, upto));
        CHECK(r1.equal_upto(r2, upto));
    }
}

TEST_CASE("symmetric simplification holds exactly for symmetric laws") {
    for (const auto& name : {"additive", "euler"}) {
        FormalGroupLaw fgl = FormalGroupLaw::catalog(name, 8);
        VerifyReport report = symmetric_simplification(fgl);
        INFO(name);
        CHECK(report.all_pass());
    }
    CHECK_THROWS_AS(symmetric_simplification(FormalGroupLaw::catalog("multiplicative", 8)),
                    NotSymmetric);
}

TEST_CASE("first-order deformation deltas") {
    FormalGroupLaw add = FormalGroupLaw::catalog("additive", 8);
    TruncSeries xy = parse_series("x*y", add.ring(), {"x", "y"}, 8);
    DeformationDelta d = first_order_delta(add, xy);
    CHECK(d.ds.to_string() == "-1");
    CHECK(d.dt.to_string() == "x2");
    CHECK(d.dl.to_string() == "0");
    CHECK(d.dr.to_string() == "0");

    DeformationDelta z = first_order_delta(add, TruncSeries::zero(add.ring(), 2, 8));
    CHECK(z.ds.is_zero_upto(z.ds.valid_order()));
    CHECK(z.dt.is_zero_upto(z.dt.valid_order()));
    CHECK(z.dl.is_zero_upto(z.dl.valid_order()));
    CHECK(z.dr.is_zero_upto(z.dr.valid_order()));

    // The α-direction on chi: F1 = ∂F/∂α = -F·x·y/(1 + α·x·y).
    FormalGroupLaw chi = FormalGroupLaw::catalog("chi", 8);
    TruncSeries den = parse_series("1 + α*x*y", chi.ring(), {"x", "y"}, 8);
    TruncSeries xymon = parse_series("x*y", chi.ring(), {"x", "y"}, 8);
    TruncSeries F1 = -(chi.F() * xymon * den.invert_unit());
    DeformationDelta dc = first_order_delta(chi, F1);
    CHECK(dc.ds.to_string() == "0");
    CHECK(dc.dt.to_string() == "-x1*x2");
    CHECK(dc.dl.to_string() == "1");
    CHECK(dc.dr.to_string() == "-1");
}

TEST_CASE("a tampered deformation series fails at degree 0") {
    FormalGroupLaw fgl = FormalGroupLaw::catalog("multiplicative", 8);
    Generators gens = build_generators(fgl, 2, 8);
    auto [s, t] = deformation_st(fgl);
    TruncSeries bad_s = s + TruncSeries::one(fgl.ring(), 2, 8);
    const TwistedOperator& d1 = gens.del[0];
    OpCompare cmp =
        op_equal(d1.compose(d1), TwistedOperator::from_series(bad_s).compose(d1));
    CHECK_FALSE(cmp.equal);
    CHECK(cmp.first_failing_degree == 0);
}

TEST_CASE("presentation serialization round-trips") {
    FormalGroupLaw fgl = FormalGroupLaw::catalog("chi", 8);
    Presentation p = emit_presentation(fgl, 3, 8, FormalGroupLaw::catalog_spec("chi").hash());
    json j = presentation_json(p);
    CHECK(j["s"] == "β");
    CHECK(j["degrees"]["l"] == -4);
    CHECK(j["metadata"].contains("difference_unit_recip"));

    // Series JSON round-trips byte-identically.
    json sj = series_to_json(p.t);
    TruncSeries back =
        series_from_json(sj, fgl.ring(), 2, p.t.trunc_order(), p.t.valid_order());
    CHECK(series_to_json(back).dump() == sj.dump());
    CHECK(back.to_string() == p.t.to_string());

    // Emission is deterministic.
    Presentation p2 = emit_presentation(fgl, 3, 8, FormalGroupLaw::catalog_spec("chi").hash());
    CHECK(presentation_json(p2).dump() == j.dump());
    CHECK(presentation_text(p) == presentation_text(p2));
    CHECK(presentation_latex(p).find("\\alpha") != std::string::npos);
}

TEST_CASE("verification and emission use the same deformation series") {
    FormalGroupLaw fgl = FormalGroupLaw::catalog("multiplicative", 8);
    Presentation p = emit_presentation(fgl, 3, 8);
    auto [s, t] = deformation_st(fgl);
    CHECK(p.s.to_string() == s.to_string());
    CHECK(p.t.to_string() == t.to_string());
    VerifyReport report = verify_presentation(fgl, 3, 8);
    CHECK(report.all_pass());
}
