#pragma once

#include <string>
#include <vector>

#include "fglnh/series.hpp"

namespace fglnh {

// Parse a polynomial expression in the named variables and the ring's
// parameters, e.g. "x + y - β*x*y" or "1 - 2*δ*u^2 + ε*u^4".  Supports
// + - * / ^ and parentheses; division only by nonzero rational constants.
TruncSeries parse_series(const std::string& text, const RingPtr& ring,
                         const std::vector<std::string>& varnames, int trunc);

// Parse a coefficient expression in the ring's parameters only, e.g. "-1*β".
Coeff parse_coeff(const std::string& text, const RingPtr& ring);

}  // namespace fglnh
