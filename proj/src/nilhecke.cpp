#include "fglnh/nilhecke.hpp"

#include <algorithm>
#include <numeric>
#include <regex>
#include <sstream>

namespace fglnh {

using json = nlohmann::ordered_json;

namespace {

int total_degree(const std::vector<int>& exps) {
    return std::accumulate(exps.begin(), exps.end(), 0);
}

int lowest_nonzero_degree(const TruncSeries& s, int upto) {
    int low = upto + 1;
    for (const auto& [exps, value] : s.terms()) {
        int d = total_degree(exps);
        if (d <= upto) low = std::min(low, d);
    }
    return low > upto ? -1 : low;
}

TruncSeries factor_poly(const RingPtr& ring, int nvars, int trunc, int a, int b) {
    return TruncSeries::variable(ring, nvars, a, trunc) -
           TruncSeries::variable(ring, nvars, b, trunc);
}

// 1/f for a fraction with unit numerator: Π factors / num.
DiffFraction df_reciprocal(const DiffFraction& f) {
    TruncSeries num = f.num().invert_unit();
    for (const auto& [factor, mult] : f.denom())
        for (int k = 0; k < mult; ++k)
            num = num * factor_poly(num.ring(), num.nvars(), num.trunc_order(), factor.first,
                                    factor.second);
    return DiffFraction(std::move(num));
}

}  // namespace

// ---------------------------------------------------------------------------
// TwistedOperator

TwistedOperator::TwistedOperator(RingPtr ring, int n, int trunc)
    : ring_(std::move(ring)), n_(n), trunc_(trunc) {
    if (n_ < 1) throw MismatchedArity();
}

TwistedOperator TwistedOperator::from_series(TruncSeries f) {
    TwistedOperator op(f.ring(), f.nvars(), f.trunc_order());
    if (!f.is_zero()) op.coeffs_.emplace(Perm::identity(op.n_), DiffFraction(std::move(f)));
    return op;
}

TwistedOperator TwistedOperator::term(DiffFraction c, Perm w) {
    if (w.n() != c.nvars()) throw MismatchedArity();
    TwistedOperator op(c.ring(), c.nvars(), c.num().trunc_order());
    op.coeffs_.emplace(std::move(w), std::move(c));
    return op;
}

DiffFraction TwistedOperator::coeff(const Perm& w) const {
    auto it = coeffs_.find(w);
    if (it != coeffs_.end()) return it->second;
    return DiffFraction::zero(ring_, n_, trunc_);
}

void TwistedOperator::add_term(const Perm& w, const DiffFraction& c) {
    auto it = coeffs_.find(w);
    if (it == coeffs_.end()) {
        if (!c.num().is_zero()) coeffs_.emplace(w, c);
    } else {
        it->second = it->second + c;
        if (it->second.num().is_zero()) coeffs_.erase(it);
    }
}

TwistedOperator TwistedOperator::compose(const TwistedOperator& other) const {
    require_same_ring(ring_, other.ring_);
    if (n_ != other.n_) throw MismatchedArity();
    TwistedOperator out(ring_, n_, std::min(trunc_, other.trunc_));
    for (const auto& [w, cw] : coeffs_) {
        for (const auto& [v, dv] : other.coeffs_) {
            // (c·w)∘(d·v) = (c·w(d))·(wv)
            out.add_term(w.compose(v), cw * dv.permute(w));
        }
    }
    return out;
}

TwistedOperator TwistedOperator::operator+(const TwistedOperator& other) const {
    require_same_ring(ring_, other.ring_);
    if (n_ != other.n_) throw MismatchedArity();
    TwistedOperator out = *this;
    out.trunc_ = std::min(trunc_, other.trunc_);
    for (const auto& [w, c] : other.coeffs_) out.add_term(w, c);
    return out;
}

TwistedOperator TwistedOperator::operator-(const TwistedOperator& other) const {
    return *this + (-other);
}

TwistedOperator TwistedOperator::operator-() const {
    TwistedOperator out(ring_, n_, trunc_);
    for (const auto& [w, c] : coeffs_) out.coeffs_.emplace(w, -c);
    return out;
}

TruncSeries TwistedOperator::apply(const TruncSeries& f) const {
    require_same_ring(ring_, f.ring());
    if (f.nvars() != n_) throw MismatchedArity();
    // Individual terms may have poles; only the full sum is guaranteed polynomial.
    DiffFraction acc = DiffFraction::zero(ring_, n_, f.trunc_order());
    for (const auto& [w, c] : coeffs_) acc = acc + c * f.permute(w);
    return acc.as_series();
}

int TwistedOperator::certified_order() const {
    int v = trunc_;
    for (const auto& [w, c] : coeffs_) v = std::min(v, c.num().valid_order());
    return v;
}

OpCompare op_equal(const TwistedOperator& a, const TwistedOperator& b) {
    TwistedOperator diff = a - b;
    OpCompare out;
    out.certified_order = std::min(a.certified_order(), b.certified_order());
    for (const auto& [w, c] : diff.coeffs()) {
        int valid = c.num().valid_order();
        out.certified_order = std::min(out.certified_order, valid);
        if (!c.num().is_zero_upto(valid)) {
            int deg = lowest_nonzero_degree(c.num(), valid);
            if (out.equal || deg < out.first_failing_degree) out.first_failing_degree = deg;
            out.equal = false;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generators and deformation series

Generators build_generators(const FormalGroupLaw& fgl, int n, int trunc) {
    if (n < 2) throw MismatchedArity();
    if (trunc > fgl.trunc_order()) throw Error("generators need a formal group law built at least to the requested truncation");
    Generators gens;
    const RingPtr& ring = fgl.ring();
    for (int i = 1; i <= n; ++i)
        gens.x.push_back(
            TwistedOperator::from_series(TruncSeries::variable(ring, n, i, trunc)));
    for (int i = 1; i < n; ++i) {
        DiffFraction ce = fgl.recip_diff(i, i + 1, n);
        DiffFraction cs = fgl.recip_diff(i + 1, i, n);
        TwistedOperator del = TwistedOperator::term(ce, Perm::identity(n)) +
                              TwistedOperator::term(cs, Perm::adjacent(n, i));
        gens.del.push_back(del);
    }
    return gens;
}

std::pair<TruncSeries, TruncSeries> deformation_st(const FormalGroupLaw& fgl) {
    DiffFraction s_df = fgl.recip_diff(1, 2, 2) + fgl.recip_diff(2, 1, 2);
    TruncSeries s = s_df.as_series();
    DiffFraction t_df = fgl.recip_diff(1, 2, 2) *
                        factor_poly(fgl.ring(), 2, fgl.trunc_order(), 1, 2);
    TruncSeries t = t_df.as_series();
    if (fgl.graded()) {
        if (!s.is_homogeneous(-2)) throw GradingViolation("s is not homogeneous of degree -2");
        if (!t.is_homogeneous(0)) throw GradingViolation("t is not homogeneous of degree 0");
    }
    return {s, t};
}

std::pair<TruncSeries, TruncSeries> deformation_lr(const FormalGroupLaw& fgl) {
    auto recip = [&](int a, int b) { return fgl.recip_diff(a, b, 3); };
    DiffFraction l_df = recip(2, 3) * recip(1, 3) - recip(1, 2) * recip(2, 3) -
                        recip(2, 1) * recip(1, 3);
    DiffFraction r_df = recip(1, 2) * recip(2, 3) + recip(3, 2) * recip(1, 3) -
                        recip(1, 2) * recip(1, 3);
    TruncSeries l = l_df.as_series();
    TruncSeries r = r_df.as_series();
    if (fgl.graded()) {
        if (!l.is_homogeneous(-4)) throw GradingViolation("l is not homogeneous of degree -4");
        if (!r.is_homogeneous(-4)) throw GradingViolation("r is not homogeneous of degree -4");
    }
    return {l, r};
}

std::pair<TruncSeries, TruncSeries> braid_obstruction(const FormalGroupLaw& fgl, int trunc) {
    Generators gens = build_generators(fgl, 3, std::min(trunc, fgl.trunc_order()));
    const TwistedOperator& d1 = gens.del[0];
    const TwistedOperator& d2 = gens.del[1];
    TwistedOperator braid_diff =
        d2.compose(d1).compose(d2) - d1.compose(d2).compose(d1);

    Perm s1 = Perm::adjacent(3, 1);
    Perm s2 = Perm::adjacent(3, 2);

    // Solve for the coefficients of ∂1 and ∂2 on the s1 and s2 basis elements.
    auto solve = [&](const Perm& w, const TwistedOperator& del) {
        DiffFraction num = braid_diff.coeff(w);
        if (num.num().is_zero())
            return TruncSeries::zero(fgl.ring(), 3, num.num().trunc_order())
                .with_valid(num.num().valid_order());
        DiffFraction quotient = num * df_reciprocal(del.coeff(w));
        try {
            return quotient.as_series();
        } catch (const NotDivisible&) {
            throw NoDependency();
        }
    };
    TruncSeries l = solve(s1, d1);
    TruncSeries r = solve(s2, d2);

    // The remaining four basis coefficients of the residual must vanish.
    TwistedOperator combo = TwistedOperator::from_series(l).compose(d1) +
                            TwistedOperator::from_series(r).compose(d2);
    OpCompare residual = op_equal(braid_diff, combo);
    if (!residual.equal) throw NoDependency();
    return {l, r};
}

// ---------------------------------------------------------------------------
// Relation verification

bool VerifyReport::all_pass() const {
    for (const auto& c : checks)
        if (c.applicable && !c.pass) return false;
    return true;
}

namespace {

void record(VerifyReport& report, std::string name, const OpCompare& cmp) {
    report.checks.push_back({std::move(name), true, cmp.equal, cmp.first_failing_degree,
                             cmp.certified_order});
    report.certified_order = std::min(report.certified_order, cmp.certified_order);
}

std::string idx(const std::string& sym, int i) { return sym + std::to_string(i); }

}  // namespace

VerifyReport verify_presentation(const FormalGroupLaw& fgl, int n, int trunc) {
    if (n < 2) throw MismatchedArity();
    if (trunc < 6) throw Error("verification needs truncation order >= 6");
    Generators gens = build_generators(fgl, n, std::min(trunc, fgl.trunc_order()));
    auto [s, t] = deformation_st(fgl);
    VerifyReport report;
    report.certified_order = trunc;

    auto embedded2 = [&](const TruncSeries& f, int i) {
        return TwistedOperator::from_series(f.embed(n, {i, i + 1}));
    };

    for (int i = 1; i < n; ++i) {
        const TwistedOperator& di = gens.del[i - 1];
        const TwistedOperator& xi = gens.x[i - 1];
        const TwistedOperator& xi1 = gens.x[i];
        record(report, idx("quadratic: ∂", i) + "² = s·" + idx("∂", i),
               op_equal(di.compose(di), embedded2(s, i).compose(di)));
        record(report,
               "weyl: " + idx("x", i) + "·" + idx("∂", i) + " - " + idx("∂", i) + "·" +
                   idx("x", i + 1) + " = t",
               op_equal(xi.compose(di) - di.compose(xi1), embedded2(t, i)));
        record(report,
               "weyl: " + idx("∂", i) + "·" + idx("x", i) + " - " + idx("x", i + 1) + "·" +
                   idx("∂", i) + " = t",
               op_equal(di.compose(xi) - xi1.compose(di), embedded2(t, i)));
    }

    if (n >= 3) {
        auto [l, r] = deformation_lr(fgl);
        for (int i = 1; i + 1 < n; ++i) {
            const TwistedOperator& di = gens.del[i - 1];
            const TwistedOperator& di1 = gens.del[i];
            TwistedOperator lhs = di1.compose(di).compose(di1) - di.compose(di1).compose(di);
            TwistedOperator li = TwistedOperator::from_series(l.embed(n, {i, i + 1, i + 2}));
            TwistedOperator ri = TwistedOperator::from_series(r.embed(n, {i, i + 1, i + 2}));
            record(report,
                   "braid: " + idx("∂", i + 1) + idx("∂", i) + idx("∂", i + 1) + " - " +
                       idx("∂", i) + idx("∂", i + 1) + idx("∂", i) + " = l·" + idx("∂", i) +
                       " + r·" + idx("∂", i + 1),
                   op_equal(lhs, li.compose(di) + ri.compose(di1)));
        }
    } else {
        report.checks.push_back({"braid relations", false, true, -1, trunc});
    }

    // Far commutativity.
    for (int i = 1; i < n; ++i) {
        for (int j = 1; j <= n; ++j) {
            if (std::abs(i - j) <= 1) continue;
            record(report, "far: " + idx("∂", i) + "·" + idx("x", j) + " = " + idx("x", j) + "·" + idx("∂", i),
                   op_equal(gens.del[i - 1].compose(gens.x[j - 1]),
                            gens.x[j - 1].compose(gens.del[i - 1])));
        }
        for (int j = i + 2; j < n; ++j) {
            record(report, "far: " + idx("∂", i) + "·" + idx("∂", j) + " = " + idx("∂", j) + "·" + idx("∂", i),
                   op_equal(gens.del[i - 1].compose(gens.del[j - 1]),
                            gens.del[j - 1].compose(gens.del[i - 1])));
        }
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            record(report, "commuting dots: " + idx("x", i) + "·" + idx("x", j) + " = " + idx("x", j) + "·" + idx("x", i),
                   op_equal(gens.x[i - 1].compose(gens.x[j - 1]),
                            gens.x[j - 1].compose(gens.x[i - 1])));
        }
    }

    // Degree discipline of the deformation series in graded mode.
    if (fgl.graded()) {
        auto homcheck = [&](const std::string& name, const TruncSeries& f, int deg) {
            report.checks.push_back(
                {"homogeneity: " + name + " in degree " + std::to_string(deg), true,
                 f.is_homogeneous(deg), f.is_homogeneous(deg) ? -1 : 0, f.valid_order()});
        };
        homcheck("s", s, -2);
        homcheck("t", t, 0);
        if (n >= 3) {
            auto [l, r] = deformation_lr(fgl);
            homcheck("l", l, -4);
            homcheck("r", r, -4);
        }
    }
    return report;
}

VerifyReport symmetric_simplification(const FormalGroupLaw& fgl) {
    if (!fgl.is_symmetric()) throw NotSymmetric();
    VerifyReport report;
    auto [s, t] = deformation_st(fgl);
    auto [l, r] = deformation_lr(fgl);
    report.certified_order = std::min({s.valid_order(), l.valid_order(), r.valid_order()});

    bool s_zero = s.is_zero_upto(s.valid_order());
    report.checks.push_back({"s = 0", true, s_zero,
                             s_zero ? -1 : lowest_nonzero_degree(s, s.valid_order()),
                             s.valid_order()});
    TruncSeries sum = l + r;
    bool rl = sum.is_zero_upto(sum.valid_order());
    report.checks.push_back({"r = -l", true, rl,
                             rl ? -1 : lowest_nonzero_degree(sum, sum.valid_order()),
                             sum.valid_order()});

    Generators gens = build_generators(fgl, 3, fgl.trunc_order());
    for (int i = 1; i <= 2; ++i) {
        const TwistedOperator& di = gens.del[i - 1];
        TwistedOperator zero(fgl.ring(), 3, fgl.trunc_order());
        record(report, idx("∂", i) + "² = 0", op_equal(di.compose(di), zero));
    }
    return report;
}

DeformationDelta first_order_delta(const FormalGroupLaw& fgl, const TruncSeries& F1) {
    FormalGroupLaw perturbed = fgl.perturb(F1);
    auto [s, t] = deformation_st(perturbed);
    auto [l, r] = deformation_lr(perturbed);
    const RingPtr& base = fgl.ring();
    return DeformationDelta{
        s.split_linear(FormalGroupLaw::kEpsilonName, base).second,
        t.split_linear(FormalGroupLaw::kEpsilonName, base).second,
        l.split_linear(FormalGroupLaw::kEpsilonName, base).second,
        r.split_linear(FormalGroupLaw::kEpsilonName, base).second,
    };
}

// ---------------------------------------------------------------------------
// Presentation emission

Presentation emit_presentation(const FormalGroupLaw& fgl, int n, int trunc,
                               const std::string& spec_hash) {
    auto [s, t] = deformation_st(fgl);
    auto [l, r] = deformation_lr(fgl);
    Presentation p{fgl.name(),
                   spec_hash,
                   n,
                   trunc,
                   std::min({s.valid_order(), t.valid_order(), l.valid_order(), r.valid_order()}),
                   fgl.graded(),
                   fgl.is_symmetric(),
                   s,
                   t,
                   l,
                   r,
                   fgl.diff_unit_recip()};
    return p;
}

std::string presentation_text(const Presentation& p) {
    std::ostringstream out;
    out << "formal group law: " << p.fgl_name << (p.graded ? "  [graded]" : "  [ungraded]")
        << "  n=" << p.n << "  trunc=" << p.trunc << "  certified=" << p.valid << "\n";
    out << "symmetric: " << (p.symmetric ? "yes" : "no") << "\n\n";
    out << "  s(x1,x2) = " << p.s.to_string() << "\n";
    out << "  t(x1,x2) = " << p.t.to_string() << "\n";
    out << "  l(x1,x2,x3) = " << p.l.to_string() << "\n";
    out << "  r(x1,x2,x3) = " << p.r.to_string() << "\n\n";
    out << "relations (1 <= i < n, all indices in range):\n";
    out << "  ∂i² = s(xi,xi+1)·∂i\n";
    out << "  xi·∂i - ∂i·xi+1 = t(xi,xi+1)·1\n";
    out << "  ∂i·xi - xi+1·∂i = t(xi,xi+1)·1\n";
    out << "  ∂i+1·∂i·∂i+1 - ∂i·∂i+1·∂i = l(xi,xi+1,xi+2)·∂i + r(xi,xi+1,xi+2)·∂i+1\n";
    out << "  ∂i·xj = xj·∂i and ∂i·∂j = ∂j·∂i for |i-j| > 1; xi·xj = xj·xi\n\n";
    out << "convention: x -_F y means F(x, inv(y)); (x - y)/(x -_F y) = "
        << p.diff_unit_recip.to_string({"x", "y"}) << "\n";
    return out.str();
}

namespace {

std::string latexify(const std::string& text) {
    static const std::vector<std::pair<std::string, std::string>> greek = {
        {"β", "\\beta "}, {"α", "\\alpha "}, {"δ", "\\delta "},
        {"ε", "\\epsilon "}, {"εd", "\\epsilon "},
    };
    std::string out = text;
    for (const auto& [from, to] : greek) {
        size_t pos = 0;
        while ((pos = out.find(from, pos)) != std::string::npos) {
            out.replace(pos, from.size(), to);
            pos += to.size();
        }
    }
    out = std::regex_replace(out, std::regex("x(\\d+)"), "x_{$1}");
    out = std::regex_replace(out, std::regex("\\^(\\d+)"), "^{$1}");
    out = std::regex_replace(out, std::regex("\\*"), " ");
    return out;
}

}  // namespace

std::string presentation_latex(const Presentation& p) {
    std::ostringstream out;
    out << "% generalized nilHecke presentation for " << p.fgl_name << "\n";
    out << "\\[\n\\begin{array}{ll}\n";
    out << "\\partial_i^2 = s(x_i,x_{i+1})\\partial_i, & x_i \\partial_i - \\partial_i x_{i+1} = t(x_i,x_{i+1})\\cdot 1, \\\\\n";
    out << " & \\partial_i x_i - x_{i+1} \\partial_i = t(x_i,x_{i+1})\\cdot 1.\n";
    out << "\\end{array}\n\\]\n";
    out << "\\[\n\\partial_{i+1}\\partial_i\\partial_{i+1} - \\partial_i\\partial_{i+1}\\partial_i"
           " = l(x_i,x_{i+1},x_{i+2})\\partial_i + r(x_i,x_{i+1},x_{i+2})\\partial_{i+1}.\n\\]\n";
    out << "\\[\n\\begin{aligned}\n";
    out << "s(x_1,x_2) &= " << latexify(p.s.to_string()) << "\\\\\n";
    out << "t(x_1,x_2) &= " << latexify(p.t.to_string()) << "\\\\\n";
    out << "l(x_1,x_2,x_3) &= " << latexify(p.l.to_string()) << "\\\\\n";
    out << "r(x_1,x_2,x_3) &= " << latexify(p.r.to_string()) << "\n";
    out << "\\end{aligned}\n\\]\n";
    return out.str();
}

json series_to_json(const TruncSeries& s) {
    std::vector<const TruncSeries::TermMap::value_type*> order;
    for (const auto& t : s.terms())
        if (total_degree(t.first) <= s.valid_order()) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        int da = total_degree(a->first), db = total_degree(b->first);
        if (da != db) return da < db;
        return a->first > b->first;  // same ordering as TruncSeries::to_string
    });
    json arr = json::array();
    const RingPtr& ring = s.ring();
    for (const auto* t : order) {
        for (const auto& [pexps, rat] : t->second.terms()) {
            json entry;
            entry["exps"] = t->first;
            entry["coeff"] = format_rational(rat);
            json params = json::object();
            for (size_t i = 0; i < pexps.size(); ++i)
                if (pexps[i] != 0) params[ring->params[i].name] = pexps[i];
            entry["params"] = params;
            arr.push_back(entry);
        }
    }
    return arr;
}

TruncSeries series_from_json(const json& j, const RingPtr& ring, int nvars, int trunc,
                             int valid) {
    TruncSeries out(ring, nvars, trunc, valid);
    for (const auto& entry : j) {
        std::vector<int> exps = entry.at("exps").get<std::vector<int>>();
        Coeff c = Coeff::rational(ring, parse_rational(entry.at("coeff").get<std::string>()));
        for (const auto& [name, e] : entry.at("params").items())
            c = c * Coeff::parameter(ring, name, e.get<int>());
        out.add_term(exps, c);
    }
    return out;
}

json presentation_json(const Presentation& p, const VerifyReport* report) {
    json j;
    j["fgl"] = {{"name", p.fgl_name}, {"spec_hash", p.spec_hash}};
    j["n"] = p.n;
    j["trunc"] = p.trunc;
    j["valid"] = p.valid;
    j["graded"] = p.graded;
    j["symmetric"] = p.symmetric;
    j["s"] = p.s.to_string();
    j["t"] = p.t.to_string();
    j["l"] = p.l.to_string();
    j["r"] = p.r.to_string();
    j["series"] = {{"s", series_to_json(p.s)},
                   {"t", series_to_json(p.t)},
                   {"l", series_to_json(p.l)},
                   {"r", series_to_json(p.r)}};
    if (p.graded) j["degrees"] = {{"s", -2}, {"t", 0}, {"l", -4}, {"r", -4}};
    j["metadata"] = {
        {"formal_difference", "F(x, inv(y))"},
        {"difference_unit_recip", p.diff_unit_recip.to_string({"x", "y"})},
        {"note",
         "t(x1,x2) equals (x - y)/F(x, inv(y)) expanded directly; the unit factor is certified "
         "by multiplying back against F(x, inv(y))"}};
    if (report) {
        json rel = json::array();
        for (const auto& c : report->checks) {
            json e;
            e["name"] = c.name;
            e["status"] = !c.applicable ? "not applicable" : (c.pass ? "pass" : "fail");
            if (c.applicable && !c.pass) e["first_failing_degree"] = c.first_failing_degree;
            e["certified_order"] = c.certified_order;
            rel.push_back(e);
        }
        j["relations"] = rel;
    }
    return j;
}

}  // namespace fglnh
