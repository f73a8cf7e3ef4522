#ifndef MHS_CONGRUENCES_HPP
#define MHS_CONGRUENCES_HPP

#include <cstdint>
#include <optional>

#include "bernoulli.hpp"
#include "composition.hpp"
#include "mhs_exact.hpp"
#include "sweep.hpp"

namespace mhs {

inline int parity_exponent(long m) { return m % 2 != 0 ? 1 : 2; }

namespace detail {

/// sum_{k=1}^{m} k^{-s} mod p^e (every k coprime to p; requires m < p).
inline Int hsum_mod(long s, std::uint64_t m, unsigned long p, int e) {
    return with_backend(p, e, [&](auto& sw) -> Int {
        auto acc = sw.bk.mod(typename std::decay_t<decltype(sw)>::U(0), e);
        for (std::uint64_t k = 1; k <= m; ++k) {
            auto t = sw.term(k, static_cast<int>(s));
            acc = sw.bk.addmod(acc, sw.bk.mod(t.u, e), e);
        }
        if constexpr (std::is_same_v<typename std::decay_t<decltype(sw)>::U, std::uint64_t>)
            return Int(static_cast<unsigned long>(acc));
        else
            return acc;
    });
}

inline Int pow_mod_int(const Int& b, unsigned long e, const Int& m) {
    Int r;
    mpz_powm_ui(r.get_mpz_t(), b.get_mpz_t(), e, m.get_mpz_t());
    return r;
}

/// Residue of a p-adic value mod p^e, or nullopt when v < 0 / window too small.
inline std::optional<Int> residue_of(const Padic& h, int e) {
    if (h.is_zero()) return Int(0);
    if (h.val() < 0) return std::nullopt;
    if (h.val() + h.precision() < e && !h.is_exact()) return std::nullopt;
    return h.residue(e);
}

} // namespace detail

// ---- Wolstenholme-type theorem for homogeneous sums ----

struct WolstenholmeResult {
    bool applicable = false;
    int required_exponent = 0;  // 1 when ls even, 2 when ls odd
    long observed_valuation = 0;
    bool holds = false;
};

/// H({s}^l; p-1) = 0 mod p (ls even) or mod p^2 (ls odd), under the theorem's
/// hypothesis p >= l+2 and p-1 dividing none of ks, ks+1 for k <= l.
inline WolstenholmeResult wolstenholme_check(int s, int l, unsigned long p) {
    WolstenholmeResult res;
    if (p < static_cast<unsigned long>(l) + 2 || p == 2) return res;
    for (int k = 1; k <= l; ++k) {
        long ks = static_cast<long>(k) * s;
        if (ks % static_cast<long>(p - 1) == 0 || (ks + 1) % static_cast<long>(p - 1) == 0) return res;
    }
    res.applicable = true;
    // mod p when ls is even, mod p^2 when ls is odd
    res.required_exponent = parity_exponent(static_cast<long>(l) * s - 1);
    Padic h = eval_padic(Composition::repeated(s, l), p - 1, p, res.required_exponent + 5);
    res.observed_valuation = h.is_zero() ? 99 : h.val();
    res.holds = res.observed_valuation >= res.required_exponent;
    return res;
}

// ---- restricted sums at multiples of p ----

struct HstarResult {
    bool applicable = false;
    int required_exponent = 0;  // epsilon(ls - 1)
    long observed_valuation = 0;
    bool holds = false;
};

/// H*({s}^l; p n) = 0 mod p^{epsilon(ls-1)} under the same divisibility gates.
inline HstarResult hstar_check(int s, int l, unsigned long p, std::uint64_t n,
                               std::uint64_t exact_limit = kDefaultExactLimit) {
    HstarResult res;
    if (p < static_cast<unsigned long>(l) + 2 || p == 2) return res;
    for (int k = 1; k <= l; ++k) {
        long ks = static_cast<long>(k) * s;
        if (ks % static_cast<long>(p - 1) == 0 || (ks + 1) % static_cast<long>(p - 1) == 0) return res;
    }
    res.applicable = true;
    res.required_exponent = parity_exponent(static_cast<long>(l) * s - 1);
    Rational v = eval_star_exact(Composition::repeated(s, l), p * n, p, exact_limit);
    res.observed_valuation = v == 0 ? 99 : valuation(v, p);
    res.holds = res.observed_valuation >= res.required_exponent;
    return res;
}

// ---- the halfway point (p-1)/2 ----

struct HalfwayResult {
    enum class Case { NotApplicable, ExponentOne, Odd, Even } kind = Case::NotApplicable;
    bool applicable = false;
    long n_reduced = 0;       // s mod (p-1), in [2, p-2]; 1 for the 2^p branch
    Int closed_form = 0;      // predicted residue (mod p, or mod p^2 in the even case)
    Int direct = 0;           // H(s;(p-1)/2) evaluated directly to the same modulus
    bool congruence_matches = false;
    bool in_j1 = false;       // p | H(s;(p-1)/2)
    std::optional<std::pair<unsigned long, long>> irregular_link;  // (p, p-n)
};

/**
 * Classifies H(s;(p-1)/2) through the Bernoulli closed forms:
 *   n = 1 branch:  (2 - 2^p)/p                      (mod p)   [zero iff Wieferich]
 *   n > 1 odd:     (2 - 2^n)/n * B_{p-n}            (mod p)
 *   n even:        n (2^{n+1} - 1)/(2(n+1)) p B_{p-n-1}  (mod p^2)
 * The even-case sign follows the verified cross-check (the source states the
 * negated coefficient; direct evaluation fixes the sign used here).
 */
inline HalfwayResult halfway_classify(long s, unsigned long p) {
    HalfwayResult res;
    if (p < 7 || s % static_cast<long>(p - 1) == 0) return res;
    std::uint64_t half = (p - 1) / 2;
    long n = s % static_cast<long>(p - 1);
    if (n < 0) n += static_cast<long>(p - 1);

    if (n == 1) {
        res.kind = HalfwayResult::Case::ExponentOne;
        res.applicable = true;
        res.n_reduced = 1;
        Int P2 = Int(static_cast<long>(p)) * static_cast<long>(p);
        Int q = (2 - detail::pow_mod_int(Int(2), p, P2) % P2 + P2) % P2;  // 2 - 2^p mod p^2
        res.closed_form = (q / static_cast<long>(p)) % static_cast<long>(p);
        res.direct = detail::hsum_mod(s, half, p, 1);
        res.congruence_matches = res.closed_form == res.direct;
        res.in_j1 = res.direct == 0;
        return res;
    }
    if (n >= static_cast<long>(p) - 3) return res;  // the proposition needs n < p-3

    res.applicable = true;
    res.n_reduced = n;
    Int P(static_cast<long>(p));
    if (n % 2 != 0) {
        res.kind = HalfwayResult::Case::Odd;
        Int B(static_cast<long>(bernoulli_mod(static_cast<int>(p - static_cast<unsigned long>(n)), p)));
        Int coef = (2 - detail::pow_mod_int(Int(2), static_cast<unsigned long>(n), P) % P + P) % P;
        coef = coef * inv_mod(Int(n), P) % P;
        res.closed_form = coef * B % P;
        res.direct = detail::hsum_mod(s, half, p, 1);
        res.congruence_matches = res.closed_form == res.direct;
        res.in_j1 = res.direct == 0;
        if (B == 0) res.irregular_link = {p, static_cast<long>(p) - n};
    } else {
        res.kind = HalfwayResult::Case::Even;
        Int P2 = P * P;
        Int B(static_cast<long>(bernoulli_mod(static_cast<int>(p - static_cast<unsigned long>(n) - 1), p)));
        Int coef = (detail::pow_mod_int(Int(2), static_cast<unsigned long>(n + 1), P2) - 1 + P2) % P2;
        coef = coef * Int(n) % P2 * inv_mod(Int(2 * (n + 1)), P2) % P2;
        res.closed_form = coef * P % P2 * B % P2;
        res.direct = detail::hsum_mod(s, half, p, 2);
        res.congruence_matches = res.closed_form == res.direct;
        res.in_j1 = res.direct % P == 0;
    }
    return res;
}

struct HalfwayP2Result {
    bool applicable = false;
    bool even_case = false;
    long n_reduced = 0;
    bool divisible_p2 = false;    // p^2 | H(s;(p-1)/2)
    bool predicted = false;       // irregular pair (p, p-n-1) or p | 2^{n+1}-1 (even case)
    bool consistent = false;      // iff for even n; one-directional for odd n
};

/// p^2-divisibility of the halfway value against the irregular-pair criterion.
inline HalfwayP2Result halfway_p2_check(long s, unsigned long p) {
    HalfwayP2Result res;
    if (p < 11 || s % static_cast<long>(p - 1) == 0) return res;
    long n = s % static_cast<long>(p - 1);
    if (n < 2 || n >= static_cast<long>(p) - 4) return res;
    res.applicable = true;
    res.n_reduced = n;
    Int P2 = Int(static_cast<long>(p)) * static_cast<long>(p);
    Int direct = detail::hsum_mod(s, (p - 1) / 2, p, 2);
    res.divisible_p2 = direct == 0;
    if (n % 2 == 0) {
        res.even_case = true;
        bool irregular = bernoulli_mod(static_cast<int>(p - static_cast<unsigned long>(n) - 1), p) == 0;
        bool mersenne = detail::pow_mod_int(Int(2), static_cast<unsigned long>(n + 1), Int(static_cast<long>(p))) == 1;
        res.predicted = irregular || mersenne;
        res.consistent = res.divisible_p2 == res.predicted;
    } else {
        bool pow_cond = detail::pow_mod_int(Int(2), static_cast<unsigned long>(n), Int(static_cast<long>(p))) == 2;
        bool irregular = bernoulli_mod(static_cast<int>(p - static_cast<unsigned long>(n)), p) == 0;
        res.predicted = pow_cond && irregular;
        res.consistent = !res.predicted || res.divisible_p2;  // sufficient direction only
    }
    return res;
}

// ---- J_1({2s}^l | p) members guaranteed by the shuffle decomposition ----

struct J12sdResult {
    bool applicable = false;
    std::vector<std::uint64_t> claimed;  // p-1 and j + (p-1)/2 for j < l
    std::vector<std::uint64_t> missing;  // claimed members that failed the direct check
    bool holds = false;
};

/// {p-1} and {j+(p-1)/2 : 0 <= j < l} lie in J_1({2s}^l | p) for p > 2ls+1.
inline J12sdResult j12sd_check(int s, int l, unsigned long p) {
    J12sdResult res;
    if (p <= 2ul * static_cast<unsigned long>(l) * static_cast<unsigned long>(s) + 1) return res;
    res.applicable = true;
    res.claimed.push_back(p - 1);
    for (int j = 0; j < l; ++j) res.claimed.push_back(static_cast<std::uint64_t>(j) + (p - 1) / 2);
    Composition comp = Composition::repeated(2 * s, l);
    std::vector<bool> member(p, false);
    detail::with_retry(4, 64, [&](int k) {
        std::fill(member.begin(), member.end(), false);
        return detail::with_backend(p, k, [&](auto& sw) {
            sw.run(comp, p - 1, [&](std::uint64_t n, const auto& h) {
                if (!h.zero && h.v >= 1) member[n] = true;
            });
            return 0;
        });
    });
    for (auto m : res.claimed)
        if (!member[m]) res.missing.push_back(m);
    res.holds = res.missing.empty();
    return res;
}

// ---- H(1^l; p-1), H(1^l; p), H(1^l; 2p-1) against Bernoulli closed forms ----

struct H1lCongruenceResult {
    bool applicable = false;
    struct Check {
        bool applicable = false;
        Int lhs = 0, rhs = 0;
        bool holds = false;
    } at_p_minus_1, at_p, at_2p_minus_1;
    bool all_hold = false;
};

inline H1lCongruenceResult h1l_congruences(int l, unsigned long p) {
    H1lCongruenceResult res;
    if (p < static_cast<unsigned long>(l) + 3) return res;
    res.applicable = true;
    Composition comp = Composition::repeated(1, l);
    bool even = l % 2 == 0;
    Int P(static_cast<long>(p));
    Int P2 = P * P, P3 = P2 * P;

    auto check = [&](H1lCongruenceResult::Check& c, std::uint64_t at, int e, const Int& rhs) {
        Padic h = eval_padic(comp, at, p, e + l + 10);
        c.applicable = true;
        c.rhs = rhs;
        if (!h.is_zero() && h.val() < 0) {
            c.holds = false;  // not p-integral, the congruence cannot hold
            return;
        }
        auto r = detail::residue_of(h, e);
        if (!r) throw InternalInconsistency("h1l residue window too small after widening");
        c.lhs = *r;
        c.holds = c.lhs == c.rhs;
    };

    if (even) {
        Int B(static_cast<long>(bernoulli_mod(static_cast<int>(p - l - 1), p)));
        check(res.at_p_minus_1, p - 1, 2, (P2 - P * B % P2 * inv_mod(Int(l + 1), P2) % P2) % P2);
        check(res.at_p, p, 2,
              (P2 - P * Int(l + 2) % P2 * B % P2 * inv_mod(Int(2 * (l + 1)), P2) % P2) % P2);
        check(res.at_2p_minus_1, 2 * p - 1, 2, (P2 - 2 * P * B % P2) % P2);
    } else {
        if (p >= static_cast<unsigned long>(l) + 4) {
            Int B2(static_cast<long>(bernoulli_mod(static_cast<int>(p - l - 2), p)));
            check(res.at_p_minus_1, p - 1, 3,
                  (P3 - P2 * Int(l + 1) % P3 * B2 % P3 * inv_mod(Int(2 * l + 4), P3) % P3) % P3);
        }
        if (l >= 3) {  // l = 1 hits the B_{p-1} von Staudt pole
            Int B(static_cast<long>(bernoulli_mod(static_cast<int>(p - l), p)));
            check(res.at_p, p, 1, (P - B * inv_mod(Int(l), P) % P) % P);
            check(res.at_2p_minus_1, 2 * p - 1, 1, (P - 2 * B % P * inv_mod(Int(l), P) % P) % P);
        }
    }
    res.all_hold = (!res.at_p_minus_1.applicable || res.at_p_minus_1.holds) &&
                   (!res.at_p.applicable || res.at_p.holds) &&
                   (!res.at_2p_minus_1.applicable || res.at_2p_minus_1.holds);
    return res;
}

/// p | numerator of H(1,2,1; 2p-1) for p >= 7.
inline bool h121_check(unsigned long p) {
    if (p < 7) throw DomainError("h121_check requires p >= 7");
    Padic h = eval_padic(Composition{1, 2, 1}, 2 * p - 1, p, 8);
    return !h.is_zero() && h.val() >= 1;
}

} // namespace mhs

#endif
