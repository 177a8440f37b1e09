#include "fglnh/render.hpp"

#include <sstream>

namespace fglnh {

WordDiagram WordDiagram::parse(const std::string& word, int n) {
    if (n < 1) throw ParseError("strand count must be positive");
    WordDiagram d;
    d.n = n;
    std::istringstream in(word);
    std::string tok;
    while (in >> tok) {
        if (tok.size() < 2 || (tok[0] != 'x' && tok[0] != 'd'))
            throw ParseError("bad word token '" + tok + "' (expected x<i> or d<j>)");
        int idx = 0;
        for (size_t k = 1; k < tok.size(); ++k) {
            if (!std::isdigit(static_cast<unsigned char>(tok[k])))
                throw ParseError("bad word token '" + tok + "'");
            idx = idx * 10 + (tok[k] - '0');
        }
        if (tok[0] == 'x') {
            if (idx < 1 || idx > n) throw IndexOutOfRange();
            d.tokens.push_back({Token::Kind::Dot, idx});
        } else {
            if (idx < 1 || idx > n - 1) throw IndexOutOfRange();
            d.tokens.push_back({Token::Kind::Crossing, idx});
        }
    }
    return d;
}

std::string render_ascii(const WordDiagram& d) {
    // Strand i runs on row 2(i-1); odd rows are gaps.  Each token occupies a
    // width-3 block joined by width-2 strand segments.
    int rows = 2 * d.n - 1;
    std::vector<std::string> grid(rows);
    auto extend = [&](int row, const std::string& strand_piece, const std::string& gap_piece) {
        grid[row] += (row % 2 == 0) ? strand_piece : gap_piece;
    };
    auto connector = [&] {
        for (int row = 0; row < rows; ++row) extend(row, "--", "  ");
    };

    connector();
    for (const auto& tok : d.tokens) {
        for (int row = 0; row < rows; ++row) {
            if (tok.kind == WordDiagram::Token::Kind::Dot) {
                extend(row, row == 2 * (tok.index - 1) ? "-*-" : "---", "   ");
            } else {
                int top = 2 * (tok.index - 1);
                if (row == top)
                    grid[row] += "\\ /";
                else if (row == top + 1)
                    grid[row] += " X ";
                else if (row == top + 2)
                    grid[row] += "/ \\";
                else
                    extend(row, "---", "   ");
            }
        }
        connector();
    }

    std::ostringstream out;
    for (int row = 0; row < rows; ++row) {
        // Trim trailing spaces on gap rows.
        std::string line = grid[row];
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << "\n";
    }
    return out.str();
}

std::string render_latex(const WordDiagram& d) {
    // Strands at y = 0..-(n-1), one x unit per token; a crossing swaps the two
    // strand heights with a bullet at the midpoint, a dot marks x_i.
    std::ostringstream out;
    out << "% strands: " << d.n << ", word length: " << d.tokens.size() << "\n";
    out << "\\begin{xy}\n0;/r1pc/:\n";
    int steps = static_cast<int>(d.tokens.size());
    for (int k = 0; k < steps; ++k) {
        const auto& tok = d.tokens[k];
        for (int strand = 1; strand <= d.n; ++strand) {
            int y0 = -(strand - 1);
            int y1 = y0;
            if (tok.kind == WordDiagram::Token::Kind::Crossing) {
                if (strand == tok.index) y1 = y0 - 1;
                if (strand == tok.index + 1) y1 = y0 + 1;
            }
            out << "(" << k << "," << y0 << ")*{}; (" << k + 1 << "," << y1
                << ")*{} **\\dir{-}";
            if (tok.kind == WordDiagram::Token::Kind::Dot && strand == tok.index)
                out << " ?(.5)*{\\bullet}";
            if (tok.kind == WordDiagram::Token::Kind::Crossing && strand == tok.index)
                out << " ?(.5)*{\\bullet}";
            out << ",\n";
        }
    }
    if (steps == 0)
        for (int strand = 1; strand <= d.n; ++strand)
            out << "(0," << -(strand - 1) << ")*{}; (1," << -(strand - 1)
                << ")*{} **\\dir{-},\n";
    out << "\\end{xy}\n";
    return out.str();
}

}  // namespace fglnh
