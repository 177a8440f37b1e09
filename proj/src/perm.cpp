#include "fglnh/perm.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fglnh/errors.hpp"

namespace fglnh {

Perm Perm::identity(int n) {
    Perm w;
    w.img.resize(n);
    std::iota(w.img.begin(), w.img.end(), 0);
    return w;
}

Perm Perm::adjacent(int n, int i) {
    if (i < 1 || i >= n) throw IndexOutOfRange();
    Perm w = identity(n);
    std::swap(w.img[i - 1], w.img[i]);
    return w;
}

Perm Perm::compose(const Perm& other) const {
    Perm out;
    out.img.resize(img.size());
    for (size_t i = 0; i < img.size(); ++i) out.img[i] = img[other.img[i]];
    return out;
}

Perm Perm::inverse() const {
    Perm out;
    out.img.resize(img.size());
    for (size_t i = 0; i < img.size(); ++i) out.img[img[i]] = static_cast<int>(i);
    return out;
}

bool Perm::is_identity() const {
    for (size_t i = 0; i < img.size(); ++i)
        if (img[i] != static_cast<int>(i)) return false;
    return true;
}

std::vector<Perm> all_perms(int n) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    std::vector<Perm> out;
    do {
        out.push_back(Perm{img});
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

// Reduced-word label for reporting, e.g. "e", "s1", "s1 s2".
std::string perm_word(const Perm& w) {
    Perm cur = w;
    std::string out;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int i = 0; i + 1 < cur.n(); ++i) {
            if (cur.img[i] > cur.img[i + 1]) {
                // cur = cur'. Applying s_{i+1} on the right removes the descent.
                std::swap(cur.img[i], cur.img[i + 1]);
                out = "s" + std::to_string(i + 1) + (out.empty() ? "" : " ") + out;
                moved = true;
            }
        }
    }
    return out.empty() ? "e" : out;
}

}  // namespace fglnh
