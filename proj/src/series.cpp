#include "fglnh/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "fglnh/perm.hpp"

namespace fglnh {

namespace {

int total_degree(const std::vector<int>& exps) {
    return std::accumulate(exps.begin(), exps.end(), 0);
}

}  // namespace

TruncSeries::TruncSeries(RingPtr ring, int nvars, int trunc_order)
    : TruncSeries(std::move(ring), nvars, trunc_order, trunc_order) {}

TruncSeries::TruncSeries(RingPtr ring, int nvars, int trunc_order, int valid_order)
    : ring_(std::move(ring)), nvars_(nvars), trunc_(trunc_order), valid_(valid_order) {
    if (!ring_) throw Error("null ring");
    if (nvars_ < 1) throw Error("series needs at least one variable");
    if (trunc_ < 0) throw Error("negative truncation order");
    if (valid_ > trunc_) throw Error("valid_order exceeds trunc_order");
}

TruncSeries TruncSeries::zero(RingPtr ring, int nvars, int trunc) {
    return TruncSeries(std::move(ring), nvars, trunc);
}

TruncSeries TruncSeries::constant(RingPtr ring, int nvars, Coeff value, int trunc) {
    TruncSeries s(ring, nvars, trunc);
    s.set_term(std::vector<int>(nvars, 0), std::move(value));
    return s;
}

TruncSeries TruncSeries::one(RingPtr ring, int nvars, int trunc) {
    return constant(ring, nvars, Coeff::rational(ring, 1), trunc);
}

TruncSeries TruncSeries::variable(RingPtr ring, int nvars, int index, int trunc) {
    if (index < 1 || index > nvars) throw IndexOutOfRange();
    TruncSeries s(ring, nvars, trunc);
    std::vector<int> exps(nvars, 0);
    exps[index - 1] = 1;
    s.set_term(std::move(exps), Coeff::rational(ring, 1));
    return s;
}

void TruncSeries::set_term(std::vector<int> exps, Coeff value) {
    if (static_cast<int>(exps.size()) != nvars_) throw MismatchedArity();
    require_same_ring(ring_, value.ring());
    if (total_degree(exps) > trunc_) return;
    if (value.is_zero())
        terms_.erase(exps);
    else
        terms_.insert_or_assign(std::move(exps), std::move(value));
}

void TruncSeries::add_term(const std::vector<int>& exps, const Coeff& value) {
    if (static_cast<int>(exps.size()) != nvars_) throw MismatchedArity();
    if (value.is_zero() || total_degree(exps) > trunc_) return;
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        terms_.emplace(exps, value);
    } else {
        it->second = it->second + value;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

bool TruncSeries::is_zero_upto(int upto) const {
    for (const auto& [exps, value] : terms_)
        if (total_degree(exps) <= upto && !value.is_zero()) return false;
    return true;
}

bool TruncSeries::equal_upto(const TruncSeries& other, int upto) const {
    return (*this - other).is_zero_upto(upto);
}

std::optional<int> TruncSeries::lowest_degree() const {
    std::optional<int> low;
    for (const auto& [exps, value] : terms_) {
        int d = total_degree(exps);
        if (!low || d < *low) low = d;
    }
    return low;
}

void TruncSeries::check_compatible(const TruncSeries& other) const {
    require_same_ring(ring_, other.ring_);
    if (nvars_ != other.nvars_) throw MismatchedArity();
}

TruncSeries TruncSeries::operator+(const TruncSeries& other) const {
    check_compatible(other);
    TruncSeries out(ring_, nvars_, std::min(trunc_, other.trunc_),
                    std::min(valid_, other.valid_));
    out.terms_ = terms_;
    for (const auto& [exps, value] : other.terms_) out.add_term(exps, value);
    // Drop terms past the (possibly smaller) result truncation.
    std::erase_if(out.terms_, [&](const auto& t) { return total_degree(t.first) > out.trunc_; });
    return out;
}

TruncSeries TruncSeries::operator-(const TruncSeries& other) const { return *this + (-other); }

TruncSeries TruncSeries::operator-() const {
    TruncSeries out(ring_, nvars_, trunc_, valid_);
    for (const auto& [exps, value] : terms_) out.terms_.emplace(exps, -value);
    return out;
}

TruncSeries TruncSeries::operator*(const Coeff& scalar) const {
    require_same_ring(ring_, scalar.ring());
    TruncSeries out(ring_, nvars_, trunc_, valid_);
    for (const auto& [exps, value] : terms_) out.add_term(exps, value * scalar);
    return out;
}

TruncSeries TruncSeries::operator*(const mpq_class& scalar) const {
    TruncSeries out(ring_, nvars_, trunc_, valid_);
    if (scalar == 0) return out;
    for (const auto& [exps, value] : terms_) out.terms_.emplace(exps, value * scalar);
    return out;
}

TruncSeries TruncSeries::operator*(const TruncSeries& other) const {
    check_compatible(other);
    TruncSeries out(ring_, nvars_, std::min(trunc_, other.trunc_),
                    std::min(valid_, other.valid_));
    for (const auto& [ea, va] : terms_) {
        int da = total_degree(ea);
        if (da > out.trunc_) continue;
        for (const auto& [eb, vb] : other.terms_) {
            if (da + total_degree(eb) > out.trunc_) continue;
            std::vector<int> exps(nvars_);
            for (int i = 0; i < nvars_; ++i) exps[i] = ea[i] + eb[i];
            out.add_term(exps, va * vb);
        }
    }
    return out;
}

Coeff TruncSeries::coeff(const std::vector<int>& exps) const {
    if (total_degree(exps) > valid_) throw BeyondValidOrder();
    return coeff_unchecked(exps);
}

Coeff TruncSeries::coeff_unchecked(const std::vector<int>& exps) const {
    auto it = terms_.find(exps);
    return it == terms_.end() ? Coeff(ring_) : it->second;
}

Coeff TruncSeries::constant_term() const {
    return coeff_unchecked(std::vector<int>(nvars_, 0));
}

TruncSeries TruncSeries::invert_unit() const {
    Coeff c0 = constant_term();
    Coeff c0inv(ring_);
    try {
        c0inv = c0.invert_degree_zero();
    } catch (const Error&) {
        throw NotAUnit();
    }
    // Degree-slice recurrence: b_d = -c0⁻¹ Σ_{k=1..d} a_k b_{d-k}.
    std::vector<TermMap> a_slices(trunc_ + 1), b_slices(trunc_ + 1);
    for (const auto& [exps, value] : terms_)
        a_slices[total_degree(exps)].emplace(exps, value);
    b_slices[0].emplace(std::vector<int>(nvars_, 0), c0inv);
    TruncSeries out(ring_, nvars_, trunc_, valid_);
    out.set_term(std::vector<int>(nvars_, 0), c0inv);
    for (int d = 1; d <= trunc_; ++d) {
        TruncSeries acc = TruncSeries::zero(ring_, nvars_, trunc_);
        for (int k = 1; k <= d; ++k) {
            for (const auto& [ea, va] : a_slices[k]) {
                for (const auto& [eb, vb] : b_slices[d - k]) {
                    std::vector<int> exps(nvars_);
                    for (int i = 0; i < nvars_; ++i) exps[i] = ea[i] + eb[i];
                    acc.add_term(exps, va * vb);
                }
            }
        }
        for (const auto& [exps, value] : acc.terms()) {
            Coeff bd = -(c0inv * value);
            if (bd.is_zero()) continue;
            b_slices[d].emplace(exps, bd);
            out.set_term(exps, bd);
        }
    }
    return out;
}

TruncSeries TruncSeries::substitute(const std::vector<TruncSeries>& bindings) const {
    if (static_cast<int>(bindings.size()) != nvars_) throw MismatchedArity();
    for (const TruncSeries& b : bindings) {
        require_same_ring(ring_, b.ring());
        bindings.front().check_compatible(b);
        if (!b.constant_term().is_zero()) throw NonzeroConstantTerm();
    }
    int out_nvars = bindings.front().nvars();
    int out_trunc = bindings.front().trunc_order();
    int out_valid = valid_;
    for (const TruncSeries& b : bindings) out_valid = std::min(out_valid, b.valid_order());

    // Cache binding powers.
    std::vector<std::vector<TruncSeries>> powers(nvars_);
    for (int i = 0; i < nvars_; ++i)
        powers[i].push_back(TruncSeries::one(ring_, out_nvars, out_trunc));

    TruncSeries out(ring_, out_nvars, out_trunc, out_valid);
    for (const auto& [exps, value] : terms_) {
        TruncSeries term = TruncSeries::constant(ring_, out_nvars, value, out_trunc);
        for (int i = 0; i < nvars_; ++i) {
            if (exps[i] == 0) continue;
            while (static_cast<int>(powers[i].size()) <= exps[i])
                powers[i].push_back(powers[i].back() * bindings[i]);
            term = term * powers[i][exps[i]];
        }
        for (const auto& [e, v] : term.terms()) out.add_term(e, v);
    }
    return out;
}

TruncSeries TruncSeries::swap_vars(int i) const {
    if (i < 1 || i >= nvars_) throw IndexOutOfRange();
    TruncSeries out(ring_, nvars_, trunc_, valid_);
    for (const auto& [exps, value] : terms_) {
        std::vector<int> e = exps;
        std::swap(e[i - 1], e[i]);
        out.terms_.emplace(std::move(e), value);
    }
    return out;
}

TruncSeries TruncSeries::permute(const Perm& w) const {
    if (w.n() != nvars_) throw MismatchedArity();
    TruncSeries out(ring_, nvars_, trunc_, valid_);
    for (const auto& [exps, value] : terms_) {
        std::vector<int> e(nvars_);
        for (int i = 0; i < nvars_; ++i) e[w(i)] = exps[i];
        out.terms_.emplace(std::move(e), value);
    }
    return out;
}

TruncSeries TruncSeries::divide_linear_diff(int i, int j) const {
    if (i < 1 || i > nvars_ || j < 1 || j > nvars_ || i == j) throw IndexOutOfRange();
    // Diagonal vanishing check: substitute x_i ↦ x_j.
    TruncSeries diag(ring_, nvars_, trunc_, valid_);
    for (const auto& [exps, value] : terms_) {
        std::vector<int> e = exps;
        e[j - 1] += e[i - 1];
        e[i - 1] = 0;
        diag.add_term(e, value);
    }
    if (!diag.is_zero_upto(valid_)) throw NotDivisible();

    // Synthetic division in x_i at the root x_j: q_{k-1} = f_k + x_j·q_k.
    int top = 0;
    std::map<int, TermMap> by_exp;
    for (const auto& [exps, value] : terms_) {
        int a = exps[i - 1];
        std::vector<int> rest = exps;
        rest[i - 1] = 0;
        by_exp[a].emplace(std::move(rest), value);
        top = std::max(top, a);
    }
    TruncSeries out(ring_, nvars_, trunc_, std::max(0, valid_ - 1));
    TruncSeries cur = TruncSeries::zero(ring_, nvars_, trunc_);
    for (int k = top; k >= 1; --k) {
        // cur := f_k + x_j·cur
        TruncSeries shifted = TruncSeries::zero(ring_, nvars_, trunc_);
        for (const auto& [exps, value] : cur.terms()) {
            std::vector<int> e = exps;
            e[j - 1] += 1;
            shifted.add_term(e, value);
        }
        cur = shifted;
        auto it = by_exp.find(k);
        if (it != by_exp.end())
            for (const auto& [exps, value] : it->second) cur.add_term(exps, value);
        for (const auto& [exps, value] : cur.terms()) {
            std::vector<int> e = exps;
            e[i - 1] = k - 1;
            out.add_term(e, value);
        }
    }
    return out;
}

TruncSeries TruncSeries::sqrt() const {
    if (!constant_term().is_one()) throw BadConstantTerm();
    std::vector<TermMap> a_slices(trunc_ + 1), r_slices(trunc_ + 1);
    for (const auto& [exps, value] : terms_) a_slices[total_degree(exps)].emplace(exps, value);
    TruncSeries out = TruncSeries::one(ring_, nvars_, trunc_);
    r_slices[0].emplace(std::vector<int>(nvars_, 0), Coeff::rational(ring_, 1));
    for (int d = 1; d <= trunc_; ++d) {
        // r_d = (a_d - Σ_{0<k<d} r_k r_{d-k}) / 2
        TruncSeries acc = TruncSeries::zero(ring_, nvars_, trunc_);
        for (const auto& [e, v] : a_slices[d]) acc.add_term(e, v);
        for (int k = 1; k < d; ++k) {
            for (const auto& [ea, va] : r_slices[k]) {
                for (const auto& [eb, vb] : r_slices[d - k]) {
                    std::vector<int> exps(nvars_);
                    for (int t = 0; t < nvars_; ++t) exps[t] = ea[t] + eb[t];
                    acc.add_term(exps, -(va * vb));
                }
            }
        }
        for (const auto& [exps, value] : acc.terms()) {
            Coeff rd = value * mpq_class(1, 2);
            r_slices[d].emplace(exps, rd);
            out.set_term(exps, rd);
        }
    }
    return out.with_valid(valid_);
}

TruncSeries TruncSeries::derivative(int var) const {
    if (var < 1 || var > nvars_) throw IndexOutOfRange();
    TruncSeries out(ring_, nvars_, trunc_, std::max(0, valid_ - 1));
    for (const auto& [exps, value] : terms_) {
        if (exps[var - 1] == 0) continue;
        std::vector<int> e = exps;
        int k = e[var - 1]--;
        out.add_term(e, value * mpq_class(k));
    }
    return out;
}

TruncSeries TruncSeries::integrate(int var) const {
    if (var < 1 || var > nvars_) throw IndexOutOfRange();
    TruncSeries out(ring_, nvars_, trunc_, std::min(trunc_, valid_ + 1));
    for (const auto& [exps, value] : terms_) {
        std::vector<int> e = exps;
        int k = ++e[var - 1];
        out.add_term(e, value * mpq_class(1, k));
    }
    return out;
}

TruncSeries TruncSeries::embed(int nvars, const std::vector<int>& positions) const {
    if (static_cast<int>(positions.size()) != nvars_) throw MismatchedArity();
    for (int p : positions)
        if (p < 1 || p > nvars) throw IndexOutOfRange();
    TruncSeries out(ring_, nvars, trunc_, valid_);
    for (const auto& [exps, value] : terms_) {
        std::vector<int> e(nvars, 0);
        for (int i = 0; i < nvars_; ++i) e[positions[i] - 1] += exps[i];
        out.add_term(e, value);
    }
    return out;
}

TruncSeries TruncSeries::with_valid(int valid) const {
    TruncSeries out(ring_, nvars_, trunc_, std::min(valid, trunc_));
    out.terms_ = terms_;
    return out;
}

TruncSeries TruncSeries::with_trunc(int trunc) const {
    TruncSeries out(ring_, nvars_, trunc, std::min(valid_, trunc));
    for (const auto& [exps, value] : terms_)
        if (total_degree(exps) <= trunc) out.terms_.emplace(exps, value);
    return out;
}

bool TruncSeries::is_homogeneous(int topdegree) const {
    for (const auto& [exps, value] : terms_) {
        if (total_degree(exps) > valid_) continue;
        auto cdeg = value.homogeneous_degree();
        if (!cdeg) return false;
        if (2 * total_degree(exps) + *cdeg != topdegree) return false;
    }
    return true;
}

TruncSeries TruncSeries::specialize_coeffs(const std::map<std::string, Coeff>& bindings,
                                           const RingPtr& target) const {
    TruncSeries out(target, nvars_, trunc_, valid_);
    for (const auto& [exps, value] : terms_) out.set_term(exps, value.specialize(bindings, target));
    return out;
}

TruncSeries TruncSeries::extend_coeffs(const RingPtr& target) const {
    return specialize_coeffs({}, target);
}

std::pair<TruncSeries, TruncSeries> TruncSeries::split_linear(const std::string& param,
                                                              const RingPtr& base) const {
    TruncSeries constant(base, nvars_, trunc_, valid_);
    TruncSeries linear(base, nvars_, trunc_, valid_);
    for (const auto& [exps, value] : terms_) {
        auto [c, l] = value.split_linear(param, base);
        constant.set_term(exps, std::move(c));
        linear.set_term(exps, std::move(l));
    }
    return {constant, linear};
}

std::string TruncSeries::to_string(const std::vector<std::string>& varnames) const {
    std::vector<std::string> names = varnames;
    if (names.empty())
        for (int i = 1; i <= nvars_; ++i) names.push_back("x" + std::to_string(i));
    if (static_cast<int>(names.size()) != nvars_) throw MismatchedArity();

    // Only certified terms are rendered.
    std::vector<const TermMap::value_type*> order;
    for (const auto& t : terms_)
        if (total_degree(t.first) <= valid_) order.push_back(&t);
    if (order.empty()) return "0";
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        int da = total_degree(a->first), db = total_degree(b->first);
        if (da != db) return da < db;
        return a->first > b->first;  // x1 before x2 within a degree
    });

    std::ostringstream out;
    bool first = true;
    for (const auto* t : order) {
        const auto& [exps, value] = *t;
        std::string xmono;
        for (int i = 0; i < nvars_; ++i) {
            if (exps[i] == 0) continue;
            if (!xmono.empty()) xmono += "*";
            xmono += names[i];
            if (exps[i] > 1) xmono += "^" + std::to_string(exps[i]);
        }
        std::string body;
        bool negative = false;
        if (value.terms().size() == 1) {
            const auto& [pexps, rat] = *value.terms().begin();
            negative = rat < 0;
            mpq_class mag = abs(rat);
            std::string pmono;
            for (size_t i = 0; i < pexps.size(); ++i) {
                if (pexps[i] == 0) continue;
                if (!pmono.empty()) pmono += "*";
                pmono += ring_->params[i].name;
                if (pexps[i] > 1) pmono += "^" + std::to_string(pexps[i]);
            }
            std::string factors = pmono;
            if (!xmono.empty()) factors += (factors.empty() ? "" : "*") + xmono;
            if (factors.empty())
                body = format_rational(mag);
            else if (mag == 1)
                body = factors;
            else
                body = format_rational(mag) + "*" + factors;
        } else {
            body = "(" + value.to_string() + ")";
            if (!xmono.empty()) body += "*" + xmono;
        }
        if (first) {
            if (negative) out << "-";
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        out << body;
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// DiffFraction

DiffFraction::DiffFraction(TruncSeries num) : num_(std::move(num)) {}

DiffFraction::DiffFraction(TruncSeries num, FactorMap denom)
    : num_(std::move(num)), denom_(std::move(denom)) {
    for (const auto& [f, mult] : denom_) {
        if (f.first >= f.second || f.first < 1 || f.second > num_.nvars() || mult < 1)
            throw Error("bad difference-fraction denominator");
    }
}

DiffFraction DiffFraction::zero(RingPtr ring, int nvars, int trunc) {
    return DiffFraction(TruncSeries::zero(std::move(ring), nvars, trunc));
}

void DiffFraction::push_factor(int a, int b) {
    if (a == b || a < 1 || b < 1 || a > num_.nvars() || b > num_.nvars()) throw IndexOutOfRange();
    if (a > b) {
        std::swap(a, b);
        num_ = -num_;
    }
    denom_[{a, b}] += 1;
}

namespace {

TruncSeries factor_series(const RingPtr& ring, int nvars, int trunc, int a, int b) {
    TruncSeries s = TruncSeries::variable(ring, nvars, a, trunc);
    return s - TruncSeries::variable(ring, nvars, b, trunc);
}

bool divides_diagonal(const TruncSeries& s, int i, int j) {
    TruncSeries diag(s.ring(), s.nvars(), s.trunc_order(), s.valid_order());
    for (const auto& [exps, value] : s.terms()) {
        std::vector<int> e = exps;
        e[j - 1] += e[i - 1];
        e[i - 1] = 0;
        diag.add_term(e, value);
    }
    return diag.is_zero_upto(s.valid_order());
}

}  // namespace

DiffFraction DiffFraction::normalized() const {
    TruncSeries num = num_;
    FactorMap denom = denom_;
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto it = denom.begin(); it != denom.end(); ++it) {
            auto [i, j] = it->first;
            if (divides_diagonal(num, i, j)) {
                num = num.divide_linear_diff(i, j);
                if (--it->second == 0) denom.erase(it);
                progress = true;
                break;
            }
        }
    }
    return DiffFraction(std::move(num), std::move(denom));
}

DiffFraction DiffFraction::operator+(const DiffFraction& other) const {
    require_same_ring(ring(), other.ring());
    if (nvars() != other.nvars()) throw MismatchedArity();
    // Least common denominator: max multiplicity per factor.
    FactorMap lcd = denom_;
    for (const auto& [f, mult] : other.denom_) lcd[f] = std::max(lcd[f], mult);
    auto scale_to_lcd = [&](const DiffFraction& df) {
        TruncSeries num = df.num_;
        for (const auto& [f, mult] : lcd) {
            auto it = df.denom_.find(f);
            int have = it == df.denom_.end() ? 0 : it->second;
            for (int k = have; k < mult; ++k)
                num = num * factor_series(num.ring(), num.nvars(), num.trunc_order(), f.first, f.second);
        }
        return num;
    };
    TruncSeries num = scale_to_lcd(*this) + scale_to_lcd(other);
    return DiffFraction(std::move(num), std::move(lcd)).normalized();
}

DiffFraction DiffFraction::operator-(const DiffFraction& other) const { return *this + (-other); }

DiffFraction DiffFraction::operator-() const { return DiffFraction(-num_, denom_); }

DiffFraction DiffFraction::operator*(const DiffFraction& other) const {
    require_same_ring(ring(), other.ring());
    if (nvars() != other.nvars()) throw MismatchedArity();
    FactorMap denom = denom_;
    for (const auto& [f, mult] : other.denom_) denom[f] += mult;
    return DiffFraction(num_ * other.num_, std::move(denom)).normalized();
}

DiffFraction DiffFraction::operator*(const TruncSeries& s) const {
    return DiffFraction(num_ * s, denom_).normalized();
}

DiffFraction DiffFraction::operator*(const Coeff& scalar) const {
    return DiffFraction(num_ * scalar, denom_);
}

DiffFraction DiffFraction::permute(const Perm& w) const {
    DiffFraction out(num_.permute(w));
    for (const auto& [f, mult] : denom_)
        for (int k = 0; k < mult; ++k) out.push_factor(w(f.first - 1) + 1, w(f.second - 1) + 1);
    return out;
}

TruncSeries DiffFraction::as_series() const {
    DiffFraction n = normalized();
    if (!n.denom_.empty()) {
        if (n.num_.is_zero_upto(n.num_.valid_order()))
            return TruncSeries(n.num_.ring(), n.num_.nvars(), n.num_.trunc_order(),
                               n.num_.valid_order());
        throw NotDivisible("difference fraction has a genuine pole");
    }
    return n.num_;
}

std::string DiffFraction::to_string(const std::vector<std::string>& varnames) const {
    std::vector<std::string> names = varnames;
    if (names.empty())
        for (int i = 1; i <= nvars(); ++i) names.push_back("x" + std::to_string(i));
    std::string out = "(" + num_.to_string(names) + ")";
    if (!denom_.empty()) {
        out += " / (";
        bool first = true;
        for (const auto& [f, mult] : denom_) {
            for (int k = 0; k < mult; ++k) {
                if (!first) out += "*";
                out += "(" + names[f.first - 1] + " - " + names[f.second - 1] + ")";
                first = false;
            }
        }
        out += ")";
    }
    return out;
}

}  // namespace fglnh
