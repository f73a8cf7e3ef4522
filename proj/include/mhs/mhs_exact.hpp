#ifndef MHS_MHS_EXACT_HPP
#define MHS_MHS_EXACT_HPP

#include <cstdint>
#include <functional>
#include <map>

#include "composition.hpp"
#include "rational.hpp"

namespace mhs {

/// Guard for exact evaluation: beyond this the reduced denominators are
/// lcm(1..n)-sized and callers should take the p-adic path instead.
inline constexpr std::uint64_t kDefaultExactLimit = 1'000'000;

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_exact_budget(std::uint64_t n, std::uint64_t limit) {
    if (n > limit)
        throw BudgetExceeded("exact evaluation refused for n = " + std::to_string(n) +
                             " (> " + std::to_string(limit) + "); use the p-adic path");
}

} // namespace detail

/**
 * One pass of the prefix recurrence
 *   H(s_1..s_j; n) = H(s_1..s_j; n-1) + n^{-s_j} H(s_1..s_{j-1}; n-1)
 * over n = 1..n_end, visiting the full-length value at every n.
 * Visitor: void(std::uint64_t n, const Rational& h).
 */
template <class Visitor>
void eval_exact_sweep(const Composition& s, std::uint64_t n_end, Visitor&& visit,
                      std::uint64_t exact_limit = kDefaultExactLimit) {
    detail::check_exact_budget(n_end, exact_limit);
    int l = s.length();
    std::vector<Rational> acc(static_cast<size_t>(l) + 1, Rational(0));
    acc[0] = 1;
    for (std::uint64_t n = 1; n <= n_end; ++n) {
        Rational inv_n = Rational(1, static_cast<unsigned long>(n));
        for (int j = l; j >= 1; --j)
            acc[static_cast<size_t>(j)] +=
                acc[static_cast<size_t>(j - 1)] * pow_rational(inv_n, s.parts[static_cast<size_t>(j - 1)]);
        visit(n, acc[static_cast<size_t>(l)]);
    }
}

/**
 * Same sweep exposing every prefix: visitor(n, values) where values[j] is
 * H(s_1..s_j; n) for j = 0..l, so one pass yields all H(s'; m), m <= n_end,
 * over all prefixes s' of s.
 */
template <class Visitor>
void eval_exact_prefix_sweep(const Composition& s, std::uint64_t n_end, Visitor&& visit,
                             std::uint64_t exact_limit = kDefaultExactLimit) {
    detail::check_exact_budget(n_end, exact_limit);
    int l = s.length();
    std::vector<Rational> acc(static_cast<size_t>(l) + 1, Rational(0));
    acc[0] = 1;
    for (std::uint64_t n = 1; n <= n_end; ++n) {
        Rational inv_n = Rational(1, static_cast<unsigned long>(n));
        for (int j = l; j >= 1; --j)
            acc[static_cast<size_t>(j)] +=
                acc[static_cast<size_t>(j - 1)] * pow_rational(inv_n, s.parts[static_cast<size_t>(j - 1)]);
        visit(n, static_cast<const std::vector<Rational>&>(acc));
    }
}

/// H(s; n) as a reduced fraction. H(s; r) = 0 for r < l by convention.
inline Rational eval_exact(const Composition& s, std::uint64_t n,
                           std::uint64_t exact_limit = kDefaultExactLimit) {
    if (n < static_cast<std::uint64_t>(s.length())) return Rational(0);
    Rational out;
    eval_exact_sweep(s, n, [&](std::uint64_t m, const Rational& h) {
        if (m == n) out = h;
    }, exact_limit);
    return out;
}

/// H*(s; n): the sum restricted to indices coprime to p.
inline Rational eval_star_exact(const Composition& s, std::uint64_t n, unsigned long p,
                                std::uint64_t exact_limit = kDefaultExactLimit) {
    detail::check_exact_budget(n, exact_limit);
    int l = s.length();
    std::vector<Rational> acc(static_cast<size_t>(l) + 1, Rational(0));
    acc[0] = 1;
    for (std::uint64_t k = 1; k <= n; ++k) {
        if (k % p == 0) continue;
        Rational inv_k = Rational(1, static_cast<unsigned long>(k));
        for (int j = l; j >= 1; --j)
            acc[static_cast<size_t>(j)] +=
                acc[static_cast<size_t>(j - 1)] * pow_rational(inv_k, s.parts[static_cast<size_t>(j - 1)]);
    }
    return acc[static_cast<size_t>(l)];
}

/**
 * Self-test of the level decomposition identities at n = p*nt + r:
 *   H(s;n)      = H*(s;n) + p^{-s} H(s;nt)
 *   H({s}^l;n)  = sum_{k=0}^{l} p^{-ks} H({s}^k;nt) H*({s}^{l-k};n)
 * A false return is a library bug.
 */
inline bool level_decompose_check(int s, int l, std::uint64_t n, unsigned long p,
                                  std::uint64_t exact_limit = kDefaultExactLimit) {
    std::uint64_t nt = n / p;
    Rational lhs1 = eval_exact(Composition::repeated(s, 1), n, exact_limit);
    Rational rhs1 = eval_star_exact(Composition::repeated(s, 1), n, p, exact_limit) +
                    pow_rational(Rational(p), -s) * eval_exact(Composition::repeated(s, 1), nt, exact_limit);
    if (lhs1 != rhs1) return false;
    Rational lhs = eval_exact(Composition::repeated(s, l), n, exact_limit);
    Rational rhs(0);
    for (int k = 0; k <= l; ++k) {
        Rational a = k == 0 ? Rational(1) : eval_exact(Composition::repeated(s, k), nt, exact_limit);
        Rational b = k == l ? Rational(1) : eval_star_exact(Composition::repeated(s, l - k), n, p, exact_limit);
        rhs += pow_rational(Rational(p), -k * s) * a * b;
    }
    return lhs == rhs;
}

// ---- Newton-Girard decomposition of homogeneous sums into power sums ----

/// Partitions of l in reverse-lexicographic order, each ascending is fine;
/// parts are kept descending here.
inline std::vector<std::vector<int>> partitions_of(int l) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int maxp) {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int x = std::min(rest, maxp); x >= 1; --x) {
            cur.push_back(x);
            rec(rest - x, x);
            cur.pop_back();
        }
    };
    rec(l, l);
    return out;
}

/**
 * Coefficients c_lambda with  l! H({s}^l; n) = sum_lambda c_lambda prod_j H(lambda_j s; n),
 * independent of s and n:  c_lambda = (-1)^{l - len(lambda)} l! / z_lambda with
 * z_lambda = prod_i i^{m_i} m_i!  (m_i = multiplicity of i). In particular
 * c_{(l)} = (-1)^{l-1} (l-1)!  and  sum_lambda c_lambda = 0 for l >= 2.
 */
inline std::vector<std::pair<std::vector<int>, Rational>> newton_decomposition(int l) {
    if (l < 1) throw DomainError("length must be >= 1");
    Int lfact(1);
    for (int i = 2; i <= l; ++i) lfact *= i;
    std::vector<std::pair<std::vector<int>, Rational>> out;
    for (const auto& lam : partitions_of(l)) {
        std::map<int, int> mult;
        for (int x : lam) mult[x]++;
        Int z(1);
        for (auto [i, m] : mult) {
            z *= pow_int(static_cast<unsigned long>(i), static_cast<unsigned long>(m));
            for (int j = 2; j <= m; ++j) z *= j;
        }
        Rational c = Rational(lfact) / Rational(z);
        if ((l - static_cast<int>(lam.size())) % 2 != 0) c = -c;
        out.emplace_back(lam, c);
    }
    return out;
}

/// Exact check of the Newton identity at (s, l, n).
inline bool newton_identity_check(int s, int l, std::uint64_t n,
                                  std::uint64_t exact_limit = kDefaultExactLimit) {
    Int lfact(1);
    for (int i = 2; i <= l; ++i) lfact *= i;
    Rational lhs = Rational(lfact) * eval_exact(Composition::repeated(s, l), n, exact_limit);
    Rational rhs(0);
    for (const auto& [lam, c] : newton_decomposition(l)) {
        Rational prod(1);
        for (int part : lam) prod *= eval_exact(Composition::repeated(part * s, 1), n, exact_limit);
        rhs += c * prod;
    }
    return lhs == rhs;
}

} // namespace mhs

#endif
