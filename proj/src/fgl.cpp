#include "fglnh/fgl.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "fglnh/parse.hpp"

namespace fglnh {

using json = nlohmann::ordered_json;

bool AxiomReport::all_pass() const {
    for (const auto& e : entries)
        if (!e.pass) return false;
    return true;
}

const AxiomReport::Entry* AxiomReport::first_failure() const {
    for (const auto& e : entries)
        if (!e.pass) return &e;
    return nullptr;
}

int first_difference_degree(const TruncSeries& a, const TruncSeries& b, int upto) {
    TruncSeries d = a - b;
    int low = upto + 1;
    for (const auto& [exps, value] : d.terms()) {
        int deg = std::accumulate(exps.begin(), exps.end(), 0);
        if (deg <= upto && deg < low) low = deg;
    }
    return low > upto ? -1 : low;
}

// ---------------------------------------------------------------------------
// FglSpec

static Param param_from_json(const json& j) {
    Param p;
    p.name = j.at("name").get<std::string>();
    p.degree = j.at("degree").get<int>();
    if (j.contains("nilpotent_order")) p.nilpotent_order = j.at("nilpotent_order").get<int>();
    return p;
}

FglSpec FglSpec::from_json(const json& j) {
    FglSpec spec;
    spec.name = j.value("name", "unnamed");
    spec.graded = j.value("graded", true);
    if (j.contains("params"))
        for (const auto& pj : j.at("params")) spec.params.push_back(param_from_json(pj));
    const json& form = j.at("form");
    std::string type = form.at("type").get<std::string>();
    if (type == "polynomial") {
        spec.form = Form::Polynomial;
        spec.expr = form.at("expr").get<std::string>();
    } else if (type == "rational") {
        spec.form = Form::Rational;
        spec.num = form.at("num").get<std::string>();
        spec.den = form.at("den").get<std::string>();
    } else if (type == "sqrt_rational") {
        spec.form = Form::SqrtRational;
        spec.q = form.at("q").get<std::string>();
        spec.den = form.at("den").get<std::string>();
    } else if (type == "log") {
        spec.form = Form::Log;
        for (const auto& c : form.at("coeffs")) spec.log_coeffs.push_back(c.get<std::string>());
    } else {
        throw ParseError("unknown form type '" + type + "'");
    }
    return spec;
}

FglSpec FglSpec::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad JSON in spec file: ") + e.what());
    }
    try {
        return from_json(j);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad spec file: ") + e.what());
    }
}

json FglSpec::to_json() const {
    json j;
    j["name"] = name;
    j["graded"] = graded;
    j["params"] = json::array();
    for (const Param& p : params) {
        json pj;
        pj["name"] = p.name;
        pj["degree"] = p.degree;
        if (p.nilpotent_order) pj["nilpotent_order"] = *p.nilpotent_order;
        j["params"].push_back(pj);
    }
    json form;
    switch (this->form) {
        case Form::Polynomial:
            form["type"] = "polynomial";
            form["expr"] = expr;
            break;
        case Form::Rational:
            form["type"] = "rational";
            form["num"] = num;
            form["den"] = den;
            break;
        case Form::SqrtRational:
            form["type"] = "sqrt_rational";
            form["q"] = q;
            form["den"] = den;
            break;
        case Form::Log:
            form["type"] = "log";
            form["coeffs"] = log_coeffs;
            break;
    }
    j["form"] = form;
    return j;
}

std::string FglSpec::hash() const {
    // FNV-1a over the canonical JSON dump.
    std::string dump = to_json().dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

// ---------------------------------------------------------------------------
// FormalGroupLaw

FormalGroupLaw::FormalGroupLaw(RingPtr ring, TruncSeries F)
    : ring_(std::move(ring)),
      F_(std::move(F)),
      inv_(ring_, 1, F_.trunc_order(), F_.valid_order()),
      unit_(ring_, 2, F_.trunc_order(), F_.valid_order()),
      unit_recip_(ring_, 2, F_.trunc_order(), F_.valid_order()),
      log_(ring_, 1, F_.trunc_order(), F_.valid_order()),
      exp_(ring_, 1, F_.trunc_order(), F_.valid_order()) {}

FormalGroupLaw FormalGroupLaw::from_series(TruncSeries F, std::string name) {
    if (F.nvars() != 2) throw MismatchedArity();
    RingPtr ring = F.ring();
    FormalGroupLaw fgl(std::move(ring), std::move(F));
    fgl.name_ = std::move(name);
    AxiomReport report = fgl.run_axiom_checks();
    for (const auto& e : report.entries) {
        if (e.pass) continue;
        if (e.name == "grading") throw GradingViolation(
            "F is not homogeneous of topological degree 2 (first failing x-degree " +
            std::to_string(e.first_failing_degree) + ")");
        throw AxiomViolation(e.name, e.first_failing_degree);
    }
    fgl.populate_caches();
    return fgl;
}

AxiomReport FormalGroupLaw::run_axiom_checks() const {
    AxiomReport report;
    int V = F_.valid_order();
    int trunc = F_.trunc_order();

    TruncSeries x1 = TruncSeries::variable(ring_, 2, 1, trunc);
    TruncSeries y1 = TruncSeries::variable(ring_, 2, 2, trunc);
    TruncSeries zero2 = TruncSeries::zero(ring_, 2, trunc);

    auto check = [&](std::string name, const TruncSeries& lhs, const TruncSeries& rhs, int upto) {
        int deg = first_difference_degree(lhs, rhs, upto);
        report.entries.push_back({std::move(name), deg < 0, deg});
    };

    check("unit", F_.substitute({x1, zero2}), x1, V);
    check("commutativity", F_, F_.swap_vars(1), V);

    // Associativity in three variables.  A nonzero constant term already
    // fails the unit axiom and blocks composition.
    if (F_.constant_term().is_zero()) {
        TruncSeries X = TruncSeries::variable(ring_, 3, 1, trunc);
        TruncSeries Y = TruncSeries::variable(ring_, 3, 2, trunc);
        TruncSeries Z = TruncSeries::variable(ring_, 3, 3, trunc);
        TruncSeries Fyz = F_.substitute({Y, Z});
        TruncSeries Fxy = F_.substitute({X, Y});
        check("associativity", F_.substitute({X, Fyz}), F_.substitute({Fxy, Z}), V);
    } else {
        report.entries.push_back({"associativity", false, 0});
    }

    if (ring_->graded) {
        bool hom = F_.is_homogeneous(2);
        int fail = -1;
        if (!hom) {
            for (const auto& [exps, value] : F_.terms()) {
                int xd = std::accumulate(exps.begin(), exps.end(), 0);
                if (xd > V) continue;
                auto cd = value.homogeneous_degree();
                if (!cd || 2 * xd + *cd != 2) {
                    fail = fail < 0 ? xd : std::min(fail, xd);
                }
            }
        }
        report.entries.push_back({"grading", hom, fail});
    }
    return report;
}

AxiomReport FormalGroupLaw::check_axioms() const { return run_axiom_checks(); }

void FormalGroupLaw::populate_caches() {
    int trunc = F_.trunc_order();
    int V = F_.valid_order();

    // Formal inverse, refined one degree per pass: ι ← ι − F(x, ι).
    TruncSeries x1 = TruncSeries::variable(ring_, 1, 1, trunc);
    TruncSeries iota = -x1;
    bool converged = false;
    for (int pass = 0; pass <= trunc + 1; ++pass) {
        TruncSeries residual = F_.substitute({x1, iota});
        if (residual.is_zero_upto(V)) {
            converged = true;
            break;
        }
        iota = iota - residual;
    }
    if (!converged) throw TruncationExhausted();
    inv_ = iota.with_valid(V);

    // Formal difference F(x, inv(y)) = (x-y)·u(x,y).
    TruncSeries x2 = TruncSeries::variable(ring_, 2, 1, trunc);
    TruncSeries inv_y = inv_.embed(2, {2});
    TruncSeries diff = F_.substitute({x2, inv_y});
    unit_ = diff.divide_linear_diff(1, 2);
    if (!unit_.constant_term().is_one())
        throw NotDivisible("formal difference unit factor lacks constant term 1");
    unit_recip_ = unit_.invert_unit();

    // log' = (∂F/∂y at y=0)⁻¹, integrated from 0; exp is its compositional inverse.
    TruncSeries dFdy = F_.derivative(2).substitute({x1, TruncSeries::zero(ring_, 1, trunc)});
    log_ = dFdy.invert_unit().integrate(1).with_valid(V);
    TruncSeries e = x1;
    for (int d = 2; d <= trunc; ++d) {
        TruncSeries err = e.substitute({log_}) - x1;
        std::vector<int> mono = {d};
        Coeff cd = err.coeff_unchecked(mono);
        if (!cd.is_zero()) e.add_term(mono, -cd);
    }
    exp_ = e.with_valid(V);
}

bool FormalGroupLaw::is_symmetric() const {
    TruncSeries x2 = TruncSeries::variable(ring_, 2, 1, F_.trunc_order());
    TruncSeries diff = F_.substitute({x2, inv_.embed(2, {2})});
    return (diff + diff.swap_vars(1)).is_zero_upto(diff.valid_order());
}

std::pair<TruncSeries, DiffFraction> FormalGroupLaw::formal_diff() const {
    DiffFraction recip(unit_recip_);
    recip.push_factor(1, 2);
    return {unit_, recip};
}

DiffFraction FormalGroupLaw::recip_diff(int a, int b, int nvars) const {
    if (a == b || a < 1 || b < 1 || a > nvars || b > nvars) throw IndexOutOfRange();
    DiffFraction recip(unit_recip_.embed(nvars, {a, b}));
    recip.push_factor(a, b);
    return recip;
}

std::vector<Coeff> FormalGroupLaw::genus(int N) const {
    if (N + 1 > log_.valid_order()) throw BeyondValidOrder();
    std::vector<Coeff> values;
    for (int n = 0; n <= N; ++n)
        values.push_back(log_.coeff({n + 1}) * mpq_class(n + 1));
    return values;
}

bool FormalGroupLaw::hom_check(const TruncSeries& phi, const FormalGroupLaw& G) const {
    if (phi.nvars() != 1) throw MismatchedArity();
    if (!phi.constant_term().is_zero()) throw NonzeroConstantTerm();
    require_same_ring(ring_, G.ring());
    TruncSeries lhs = phi.substitute({F_});
    TruncSeries rhs = G.F().substitute({phi.embed(2, {1}), phi.embed(2, {2})});
    int upto = std::min(lhs.valid_order(), rhs.valid_order());
    return first_difference_degree(lhs, rhs, upto) < 0;
}

FormalGroupLaw FormalGroupLaw::perturb(const TruncSeries& F1) const {
    require_same_ring(ring_, F1.ring());
    if (F1.nvars() != 2) throw MismatchedArity();
    int eps_degree = -2;
    if (ring_->graded && !F1.is_zero()) {
        bool found = false;
        for (int d = -4 * F1.trunc_order() - 2; d <= 4 * F1.trunc_order() + 2; d += 2) {
            if (F1.is_homogeneous(d)) {
                eps_degree = 2 - d;
                found = true;
                break;
            }
        }
        if (!found) throw AxiomViolation("grading", F1.lowest_degree().value_or(0));
    }
    RingPtr ext = extend_ring(ring_, {Param{kEpsilonName, eps_degree, 2}});
    TruncSeries F_ext = F_.extend_coeffs(ext);
    TruncSeries F1_ext = F1.extend_coeffs(ext) * Coeff::parameter(ext, kEpsilonName);
    return from_series(F_ext + F1_ext, name_ + "+" + kEpsilonName + "·F1");
}

FormalGroupLaw FormalGroupLaw::specialize(const std::map<std::string, Coeff>& bindings,
                                          const RingPtr& target,
                                          const std::string& new_name) const {
    return from_series(F_.specialize_coeffs(bindings, target), new_name);
}

// ---------------------------------------------------------------------------
// Catalog

static const std::string kBeta = "β";
static const std::string kAlpha = "α";
static const std::string kDelta = "δ";
static const std::string kEpsilon = "ε";

FglSpec FormalGroupLaw::catalog_spec(const std::string& name) {
    FglSpec spec;
    spec.name = name;
    if (name == "additive") {
        spec.form = FglSpec::Form::Polynomial;
        spec.expr = "x + y";
    } else if (name == "multiplicative") {
        spec.params = {Param{kBeta, -2}};
        spec.form = FglSpec::Form::Polynomial;
        spec.expr = "x + y - " + kBeta + "*x*y";
    } else if (name == "chi") {
        spec.params = {Param{kAlpha, -4}, Param{kBeta, -2}};
        spec.form = FglSpec::Form::Rational;
        spec.num = "x + y - " + kBeta + "*x*y";
        spec.den = "1 + " + kAlpha + "*x*y";
    } else if (name == "euler") {
        spec.params = {Param{kDelta, -4}, Param{kEpsilon, -8}};
        spec.form = FglSpec::Form::SqrtRational;
        spec.q = "1 - 2*" + kDelta + "*u^2 + " + kEpsilon + "*u^4";
        spec.den = "1 - " + kEpsilon + "*x^2*y^2";
    } else if (name.rfind("universal_rational", 0) == 0) {
        std::string arg = name.substr(std::string("universal_rational").size());
        int k = 0;
        if (arg.size() >= 3 && arg.front() == '(' && arg.back() == ')') {
            try {
                k = std::stoi(arg.substr(1, arg.size() - 2));
            } catch (...) {
                throw UnknownName(name);
            }
        }
        if (k < 1) throw UnknownName(name);
        spec.form = FglSpec::Form::Log;
        for (int i = 1; i <= k; ++i) {
            spec.params.push_back(Param{"m" + std::to_string(i), -2 * i});
            spec.log_coeffs.push_back("m" + std::to_string(i));
        }
    } else {
        throw UnknownName(name);
    }
    return spec;
}

FormalGroupLaw FormalGroupLaw::catalog(const std::string& name, int trunc) {
    return from_spec(catalog_spec(name), trunc);
}

FormalGroupLaw FormalGroupLaw::from_spec(const FglSpec& spec, int trunc) {
    RingPtr ring = make_ring(spec.params, spec.graded);
    std::vector<std::string> xy = {"x", "y"};
    TruncSeries F = TruncSeries::zero(ring, 2, trunc);
    switch (spec.form) {
        case FglSpec::Form::Polynomial:
            F = parse_series(spec.expr, ring, xy, trunc);
            break;
        case FglSpec::Form::Rational: {
            TruncSeries num = parse_series(spec.num, ring, xy, trunc);
            TruncSeries den = parse_series(spec.den, ring, xy, trunc);
            if (!den.constant_term().is_one())
                throw ParseError("rational form requires denominator constant term 1");
            F = num * den.invert_unit();
            break;
        }
        case FglSpec::Form::SqrtRational: {
            TruncSeries q1 = parse_series(spec.q, ring, {"u"}, trunc);
            if (!q1.constant_term().is_one())
                throw ParseError("sqrt_rational form requires Q(0) = 1");
            TruncSeries sqrtQx = q1.embed(2, {1}).sqrt();
            TruncSeries sqrtQy = q1.embed(2, {2}).sqrt();
            TruncSeries den = parse_series(spec.den, ring, xy, trunc);
            if (!den.constant_term().is_one())
                throw ParseError("sqrt_rational form requires denominator constant term 1");
            TruncSeries x = TruncSeries::variable(ring, 2, 1, trunc);
            TruncSeries y = TruncSeries::variable(ring, 2, 2, trunc);
            F = (x * sqrtQy + y * sqrtQx) * den.invert_unit();
            break;
        }
        case FglSpec::Form::Log: {
            TruncSeries lg = TruncSeries::variable(ring, 1, 1, trunc);
            for (size_t i = 0; i < spec.log_coeffs.size(); ++i) {
                Coeff c = parse_coeff(spec.log_coeffs[i], ring);
                lg.add_term({static_cast<int>(i) + 2}, c);
            }
            // exp = compositional inverse of log, then F = exp(log x + log y).
            TruncSeries x1 = TruncSeries::variable(ring, 1, 1, trunc);
            TruncSeries e = x1;
            for (int d = 2; d <= trunc; ++d) {
                TruncSeries err = e.substitute({lg}) - x1;
                Coeff cd = err.coeff_unchecked({d});
                if (!cd.is_zero()) e.add_term({d}, -cd);
            }
            F = e.substitute({lg.embed(2, {1}) + lg.embed(2, {2})});
            break;
        }
    }
    return from_series(std::move(F), spec.name);
}

}  // namespace fglnh
