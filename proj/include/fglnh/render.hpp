#pragma once

#include <string>
#include <vector>

#include "fglnh/errors.hpp"

namespace fglnh {

// A word in the generators x_i (a dot on strand i) and ∂_j (a singular
// crossing of strands j, j+1), composed left to right.  Output-only: there is
// no diagram parsing, just rendering.
struct WordDiagram {
    struct Token {
        enum class Kind { Dot, Crossing };
        Kind kind;
        int index;  // 1-based strand (Dot) or crossing position (Crossing)
    };

    int n = 0;
    std::vector<Token> tokens;

    // Word syntax: whitespace-separated "x<i>" and "d<j>" tokens.
    static WordDiagram parse(const std::string& word, int n);
};

std::string render_ascii(const WordDiagram& d);
std::string render_latex(const WordDiagram& d);

}  // namespace fglnh
