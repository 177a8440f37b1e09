#pragma once

#include <compare>
#include <string>
#include <vector>

namespace fglnh {

// Permutation of {0,..,n-1}; img[i] is the image of i.
struct Perm {
    std::vector<int> img;

    static Perm identity(int n);
    // Adjacent transposition s_i exchanging strands i and i+1 (1-based i).
    static Perm adjacent(int n, int i);

    int n() const { return static_cast<int>(img.size()); }
    int operator()(int i) const { return img[i]; }

    // (a.compose(b))(i) = a(b(i)).
    Perm compose(const Perm& other) const;
    Perm inverse() const;
    bool is_identity() const;

    auto operator<=>(const Perm&) const = default;
};

std::vector<Perm> all_perms(int n);
std::string perm_word(const Perm& w);

}  // namespace fglnh
