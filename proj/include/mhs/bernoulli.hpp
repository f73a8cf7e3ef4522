#ifndef MHS_BERNOULLI_HPP
#define MHS_BERNOULLI_HPP

#include <cstdint>
#include <mutex>
#include <vector>

#include "rational.hpp"

namespace mhs {

/// Exact Bernoulli numbers B_0..B_m (B_1 = -1/2) by the defining recurrence.
/// O(m^2) rational ops; used as the oracle and for Faulhaber coefficients.
inline const std::vector<Rational>& bernoulli_table(int m) {
    static std::vector<Rational> table{Rational(1)};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    for (int n = static_cast<int>(table.size()); n <= m; ++n) {
        // sum_{j<n} C(n+1,j) B_j = -(n+1) B_n
        Rational s(0);
        Int binom(1);  // C(n+1, j)
        for (int j = 0; j < n; ++j) {
            s += Rational(binom) * table[static_cast<size_t>(j)];
            binom = binom * (n + 1 - j) / (j + 1);
        }
        table.push_back(-s / Rational(n + 1));
    }
    return table;
}

inline Rational bernoulli_exact(int m) { return bernoulli_table(m)[static_cast<size_t>(m)]; }

/**
 * B_m mod p via the power sum S_m(p) = sum_{a=1}^{p-1} a^m evaluated mod p^2,
 * where S_m(p) = p B_m (mod p^2) for even m with 2 <= m <= p-3. One modular
 * exponentiation per a, O(p) total.
 */
inline std::uint64_t bernoulli_mod(int m, std::uint64_t p) {
    if (p < 5) throw DomainError("bernoulli_mod requires p >= 5");
    if (m < 2 || m % 2 != 0 || static_cast<std::uint64_t>(m) > p - 3 ||
        static_cast<std::uint64_t>(m) % (p - 1) == 0)
        throw DomainError("von Staudt pole / vanishing case");
    const auto P2 = static_cast<unsigned __int128>(p) * p;
    auto powmod = [&](std::uint64_t b, std::uint64_t e) {
        unsigned __int128 r = 1, x = b % P2;
        while (e) {
            if (e & 1) r = r * x % P2;
            x = x * x % P2;
            e >>= 1;
        }
        return static_cast<std::uint64_t>(r);
    };
    unsigned __int128 s = 0;
    for (std::uint64_t a = 1; a < p; ++a) {
        s += powmod(a, static_cast<std::uint64_t>(m));
        if (s >= P2) s -= P2;
    }
    auto sv = static_cast<std::uint64_t>(s % P2);
    if (sv % p != 0) throw DomainError("power sum not divisible by p; hypothesis violated");
    return (sv / p) % p;
}

/// Even k in [2, p-3] with p | numerator(B_k), ascending. Empty for regular p.
/// Power sums for all k share one pass over a, O(p^2) multiplications mod p^2.
inline std::vector<int> irregular_indices(std::uint64_t p) {
    if (p < 7) throw DomainError("irregular_indices requires p >= 7");
    const auto P2 = static_cast<unsigned __int128>(p) * p;
    std::vector<std::uint64_t> sums((p - 1) / 2, 0);  // k = 2, 4, ..., p-3
    for (std::uint64_t a = 1; a < p; ++a) {
        unsigned __int128 a2 = static_cast<unsigned __int128>(a) * a % P2;
        unsigned __int128 x = a2;
        for (auto& acc : sums) {
            acc = static_cast<std::uint64_t>((acc + x) % P2);
            x = x * a2 % P2;
        }
    }
    std::vector<int> out;
    for (size_t i = 0; i < sums.size(); ++i) {
        int k = 2 * static_cast<int>(i) + 2;
        if (static_cast<std::uint64_t>(k) > p - 3) break;
        if (sums[i] % p != 0) throw DomainError("power sum not divisible by p");
        if ((sums[i] / p) % p == 0) out.push_back(k);  // S_k(p) = p B_k mod p^2
    }
    return out;
}

} // namespace mhs

#endif
