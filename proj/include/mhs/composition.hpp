#ifndef MHS_COMPOSITION_HPP
#define MHS_COMPOSITION_HPP

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rational.hpp"

namespace mhs {

/**
 * Exponent tuple s = (s_1,...,s_l) of a multiple harmonic sum.
 * weight() = s_1 + ... + s_l, length() = l.
 */
struct Composition {
    std::vector<int> parts;

    Composition() = default;
    Composition(std::initializer_list<int> ps) : parts(ps) { validate(); }
    explicit Composition(std::vector<int> ps) : parts(std::move(ps)) { validate(); }

    /// l copies of s.
    static Composition repeated(int s, int l) {
        Composition c;
        c.parts.assign(static_cast<size_t>(l), s);
        c.validate();
        return c;
    }

    int length() const { return static_cast<int>(parts.size()); }
    int weight() const { return std::accumulate(parts.begin(), parts.end(), 0); }
    int min_part() const { return *std::min_element(parts.begin(), parts.end()); }

    bool is_repeated() const {
        return std::all_of(parts.begin(), parts.end(), [&](int x) { return x == parts[0]; });
    }

    bool operator==(const Composition& o) const { return parts == o.parts; }

    /// "1,2,1". Parsing also accepts the repeat shorthand "{2}^3" per segment,
    /// e.g. "1,{2}^3" = (1,2,2,2).
    std::string str() const {
        std::ostringstream os;
        for (size_t i = 0; i < parts.size(); ++i) {
            if (i) os << ',';
            os << parts[i];
        }
        return os.str();
    }

    static Composition parse(const std::string& text);

    void validate() const {
        if (parts.empty()) throw DomainError("composition must be non-empty");
        for (int x : parts)
            if (x < 1) throw DomainError("composition parts must be >= 1");
    }
};

inline Composition Composition::parse(const std::string& text) {
    std::vector<int> ps;
    size_t i = 0;
    auto read_int = [&]() {
        size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j == i) throw DomainError("bad composition syntax: '" + text + "'");
        int v = std::stoi(text.substr(i, j - i));
        i = j;
        return v;
    };
    while (i < text.size()) {
        if (text[i] == '{') {
            ++i;
            int s = read_int();
            if (i >= text.size() || text[i] != '}') throw DomainError("bad composition syntax: '" + text + "'");
            ++i;
            if (i >= text.size() || text[i] != '^') throw DomainError("bad composition syntax: '" + text + "'");
            ++i;
            int l = read_int();
            if (l < 1) throw DomainError("repeat count must be >= 1");
            ps.insert(ps.end(), static_cast<size_t>(l), s);
        } else {
            ps.push_back(read_int());
        }
        if (i < text.size()) {
            if (text[i] != ',') throw DomainError("bad composition syntax: '" + text + "'");
            ++i;
        }
    }
    return Composition(std::move(ps));
}

// ---- the blocks G_t = [p^{t-1}, p^t), G_0 = {0} ----

/// Level t with n in G_t.
inline int block_index(const Int& n, unsigned long p) {
    if (n < 0) throw DomainError("negative index");
    if (n == 0) return 0;
    int t = 1;
    Int hi(p);
    while (n >= hi) {
        hi *= p;
        ++t;
    }
    return t;
}

/// [lo, hi) bounds of G_t (G_0 = [0,1)).
inline std::pair<Int, Int> block_range(unsigned long p, int t) {
    if (t == 0) return {Int(0), Int(1)};
    return {pow_int(p, static_cast<unsigned long>(t - 1)), pow_int(p, static_cast<unsigned long>(t))};
}

} // namespace mhs

#endif
