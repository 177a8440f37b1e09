#include "fglnh/coefring.hpp"

#include <algorithm>
#include <sstream>

namespace fglnh {

int Ring::index_of(const std::string& name) const {
    for (size_t i = 0; i < params.size(); ++i)
        if (params[i].name == name) return static_cast<int>(i);
    return -1;
}

bool Ring::same_as(const Ring& other) const {
    if (graded != other.graded) return false;
    if (params.size() != other.params.size()) return false;
    for (size_t i = 0; i < params.size(); ++i) {
        const Param& a = params[i];
        const Param& b = other.params[i];
        if (a.name != b.name || a.degree != b.degree || a.nilpotent_order != b.nilpotent_order)
            return false;
    }
    return true;
}

RingPtr make_ring(std::vector<Param> params, bool graded) {
    for (const Param& p : params) {
        if (graded && p.degree % 2 != 0)
            throw Error("parameter " + p.name + " has odd degree " + std::to_string(p.degree));
        if (p.nilpotent_order && *p.nilpotent_order < 1)
            throw Error("parameter " + p.name + " has nonpositive nilpotent order");
    }
    for (size_t i = 0; i < params.size(); ++i)
        for (size_t j = i + 1; j < params.size(); ++j)
            if (params[i].name == params[j].name)
                throw Error("duplicate parameter name " + params[i].name);
    auto ring = std::make_shared<Ring>();
    ring->params = std::move(params);
    ring->graded = graded;
    return ring;
}

RingPtr rational_ring(bool graded) { return make_ring({}, graded); }

RingPtr extend_ring(const RingPtr& ring, std::vector<Param> extra) {
    std::vector<Param> params = ring->params;
    for (Param& p : extra) params.push_back(std::move(p));
    return make_ring(std::move(params), ring->graded);
}

void require_same_ring(const RingPtr& a, const RingPtr& b) {
    if (a.get() == b.get()) return;
    if (!a || !b || !a->same_as(*b)) throw MismatchedRings();
}

std::string format_rational(const mpq_class& q) {
    std::ostringstream out;
    out << q.get_num();
    if (q.get_den() != 1) out << "/" << q.get_den();
    return out.str();
}

mpq_class parse_rational(const std::string& text) {
    try {
        mpq_class q(text);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal '" + text + "'");
    }
}

Coeff::Coeff(RingPtr ring) : ring_(std::move(ring)) {
    if (!ring_) throw Error("null ring");
}

Coeff Coeff::rational(RingPtr ring, const mpq_class& value) {
    Coeff c(std::move(ring));
    c.insert_term(std::vector<int>(c.ring_->params.size(), 0), value);
    return c;
}

Coeff Coeff::parameter(RingPtr ring, const std::string& name, int power) {
    Coeff c(std::move(ring));
    int idx = c.ring_->index_of(name);
    if (idx < 0) throw Error("unknown parameter " + name);
    std::vector<int> exps(c.ring_->params.size(), 0);
    exps[idx] = power;
    c.insert_term(std::move(exps), 1);
    return c;
}

Coeff Coeff::from_terms(RingPtr ring, TermMap terms) {
    Coeff c(std::move(ring));
    for (auto& [exps, value] : terms) c.insert_term(exps, value);
    return c;
}

void Coeff::insert_term(std::vector<int> exps, const mpq_class& value) {
    if (value == 0) return;
    if (exps.size() != ring_->params.size()) throw Error("exponent vector arity mismatch");
    for (size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] < 0) throw Error("negative parameter exponent");
        const auto& order = ring_->params[i].nilpotent_order;
        if (order && exps[i] >= *order) return;  // nilpotent truncation
    }
    auto [it, inserted] = terms_.try_emplace(std::move(exps), value);
    if (!inserted) {
        it->second += value;
        if (it->second == 0) terms_.erase(it);
    }
}

bool Coeff::is_one() const {
    return terms_.size() == 1 && terms_.begin()->second == 1 &&
           std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                       [](int e) { return e == 0; });
}

bool Coeff::is_rational() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 &&
           std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                       [](int e) { return e == 0; });
}

mpq_class Coeff::rational_part() const {
    std::vector<int> zero(ring_->params.size(), 0);
    auto it = terms_.find(zero);
    return it == terms_.end() ? mpq_class(0) : it->second;
}

Coeff Coeff::operator+(const Coeff& other) const {
    require_same_ring(ring_, other.ring_);
    Coeff out = *this;
    for (const auto& [exps, value] : other.terms_) out.insert_term(exps, value);
    return out;
}

Coeff Coeff::operator-(const Coeff& other) const { return *this + (-other); }

Coeff Coeff::operator-() const {
    Coeff out(ring_);
    for (const auto& [exps, value] : terms_) out.terms_.emplace(exps, -value);
    return out;
}

Coeff Coeff::operator*(const mpq_class& scalar) const {
    Coeff out(ring_);
    if (scalar == 0) return out;
    for (const auto& [exps, value] : terms_) out.terms_.emplace(exps, value * scalar);
    return out;
}

Coeff Coeff::operator*(const Coeff& other) const {
    require_same_ring(ring_, other.ring_);
    Coeff out(ring_);
    for (const auto& [ea, va] : terms_) {
        for (const auto& [eb, vb] : other.terms_) {
            std::vector<int> exps(ea.size());
            for (size_t i = 0; i < ea.size(); ++i) exps[i] = ea[i] + eb[i];
            out.insert_term(std::move(exps), va * vb);
        }
    }
    return out;
}

bool Coeff::operator==(const Coeff& other) const {
    require_same_ring(ring_, other.ring_);
    return terms_ == other.terms_;
}

bool Coeff::is_homogeneous(int degree) const {
    for (const auto& [exps, value] : terms_) {
        int d = 0;
        for (size_t i = 0; i < exps.size(); ++i) d += exps[i] * ring_->params[i].degree;
        if (d != degree) return false;
    }
    return true;  // zero is homogeneous of every degree
}

std::optional<int> Coeff::homogeneous_degree() const {
    if (terms_.empty()) return std::nullopt;
    std::optional<int> deg;
    for (const auto& [exps, value] : terms_) {
        int d = 0;
        for (size_t i = 0; i < exps.size(); ++i) d += exps[i] * ring_->params[i].degree;
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    return deg;
}

Coeff Coeff::invert_degree_zero() const {
    if (ring_->graded && !is_homogeneous(0)) throw NotDegreeZero();
    mpq_class r0 = rational_part();
    if (r0 == 0) throw NotInvertible();
    // a = r0·(1 + n) with n nilpotent; a⁻¹ = r0⁻¹·Σ (−n)^k.
    Coeff n = (*this - Coeff::rational(ring_, r0)) * mpq_class(mpq_class(1) / r0);
    Coeff out = Coeff::rational(ring_, 1);
    Coeff power = Coeff::rational(ring_, 1);
    // Bound: total nilpotency exhausts after Σ (order−1) steps.
    int bound = 1;
    for (const Param& p : ring_->params) bound += p.nilpotent_order ? *p.nilpotent_order - 1 : 0;
    for (int k = 1; k <= bound; ++k) {
        power = power * (-n);
        if (power.is_zero()) break;
        out = out + power;
    }
    // A surviving power means the tail is not nilpotent, so no polynomial inverse.
    if (!power.is_zero()) throw NotInvertible();
    return out * mpq_class(mpq_class(1) / r0);
}

Coeff Coeff::specialize(const std::map<std::string, Coeff>& bindings, const RingPtr& target) const {
    for (const auto& [name, value] : bindings) require_same_ring(value.ring(), target);
    Coeff out(target);
    for (const auto& [exps, value] : terms_) {
        Coeff term = Coeff::rational(target, value);
        for (size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] == 0) continue;
            const std::string& name = ring_->params[i].name;
            auto it = bindings.find(name);
            if (it != bindings.end()) {
                for (int k = 0; k < exps[i]; ++k) term = term * it->second;
            } else {
                if (target->index_of(name) < 0) throw MismatchedRings();
                term = term * Coeff::parameter(target, name, exps[i]);
            }
        }
        out = out + term;
    }
    return out;
}

Coeff Coeff::extend(const RingPtr& target) const { return specialize({}, target); }

std::pair<Coeff, Coeff> Coeff::split_linear(const std::string& param, const RingPtr& base) const {
    int idx = ring_->index_of(param);
    if (idx < 0) throw Error("unknown parameter " + param);
    Coeff constant(base), linear(base);
    for (const auto& [exps, value] : terms_) {
        std::vector<int> rest;
        rest.reserve(exps.size() - 1);
        for (size_t i = 0; i < exps.size(); ++i)
            if (static_cast<int>(i) != idx) rest.push_back(exps[i]);
        Coeff mono = Coeff::rational(base, value);
        size_t j = 0;
        for (size_t i = 0; i < ring_->params.size(); ++i) {
            if (static_cast<int>(i) == idx) continue;
            if (rest[j] != 0) mono = mono * Coeff::parameter(base, ring_->params[i].name, rest[j]);
            ++j;
        }
        if (exps[idx] == 0)
            constant = constant + mono;
        else if (exps[idx] == 1)
            linear = linear + mono;
        else
            throw Error("exponent of " + param + " exceeds 1 in split_linear");
    }
    return {constant, linear};
}

std::string Coeff::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [exps, value] : terms_) {
        mpq_class mag = abs(value);
        bool negative = value < 0;
        if (first) {
            if (negative) out << "-";
            first = false;
        } else {
            out << (negative ? " - " : " + ");
        }
        std::string mono;
        for (size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += ring_->params[i].name;
            if (exps[i] > 1) mono += "^" + std::to_string(exps[i]);
        }
        if (mono.empty()) {
            out << format_rational(mag);
        } else if (mag == 1) {
            out << mono;
        } else {
            out << format_rational(mag) << "*" << mono;
        }
    }
    return out.str();
}

}  // namespace fglnh
