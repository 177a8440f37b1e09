#include "fglnh/parse.hpp"

#include <cctype>

namespace fglnh {

namespace {

struct Parser {
    const std::string& text;
    size_t pos = 0;
    const RingPtr& ring;
    const std::vector<std::string>& vars;
    int trunc;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    static bool ident_char(unsigned char c) {
        return std::isalnum(c) || c == '_' || c >= 0x80;
    }

    TruncSeries parse_expr() {
        TruncSeries acc = parse_term(eat('-'));
        for (;;) {
            if (eat('+'))
                acc = acc + parse_term(false);
            else if (eat('-'))
                acc = acc + parse_term(true);
            else
                break;
        }
        return acc;
    }

    TruncSeries parse_term(bool negate) {
        TruncSeries acc = parse_factor();
        for (;;) {
            if (eat('*')) {
                acc = acc * parse_factor();
            } else if (eat('/')) {
                TruncSeries rhs = parse_factor();
                Coeff c = rhs.constant_term();
                if (rhs.terms().size() > (c.is_zero() ? 0u : 1u) || !c.is_rational() ||
                    c.rational_part() == 0)
                    throw ParseError("division only by nonzero rational constants");
                acc = acc * mpq_class(1 / c.rational_part());
            } else {
                break;
            }
        }
        return negate ? -acc : acc;
    }

    TruncSeries parse_factor() {
        TruncSeries base = parse_primary();
        if (eat('^')) {
            skip_ws();
            size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (start == pos) throw ParseError("expected integer exponent");
            int e = std::stoi(text.substr(start, pos - start));
            TruncSeries out = TruncSeries::one(ring, static_cast<int>(vars.size()), trunc);
            for (int k = 0; k < e; ++k) out = out * base;
            return out;
        }
        return base;
    }

    TruncSeries parse_primary() {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of expression");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            TruncSeries inner = parse_expr();
            if (!eat(')')) throw ParseError("expected ')'");
            return inner;
        }
        if (c == '-') {
            ++pos;
            return -parse_primary();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            mpq_class q(text.substr(start, pos - start));
            return TruncSeries::constant(ring, static_cast<int>(vars.size()),
                                         Coeff::rational(ring, q), trunc);
        }
        if (ident_char(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < text.size() && ident_char(static_cast<unsigned char>(text[pos]))) ++pos;
            std::string name = text.substr(start, pos - start);
            for (size_t i = 0; i < vars.size(); ++i)
                if (vars[i] == name)
                    return TruncSeries::variable(ring, static_cast<int>(vars.size()),
                                                 static_cast<int>(i) + 1, trunc);
            if (ring->index_of(name) >= 0)
                return TruncSeries::constant(ring, static_cast<int>(vars.size()),
                                             Coeff::parameter(ring, name), trunc);
            throw ParseError("unknown name '" + name + "'");
        }
        throw ParseError(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

TruncSeries parse_series(const std::string& text, const RingPtr& ring,
                         const std::vector<std::string>& varnames, int trunc) {
    if (varnames.empty()) throw ParseError("no variables declared");
    Parser p{text, 0, ring, varnames, trunc};
    TruncSeries out = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) throw ParseError("trailing input at '" + text.substr(p.pos) + "'");
    return out;
}

Coeff parse_coeff(const std::string& text, const RingPtr& ring) {
    std::vector<std::string> dummy = {"__x"};
    TruncSeries s = parse_series(text, ring, dummy, 0);
    return s.constant_term();
}

}  // namespace fglnh
