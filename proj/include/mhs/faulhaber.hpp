#ifndef MHS_FAULHABER_HPP
#define MHS_FAULHABER_HPP

#include "bernoulli.hpp"
#include "rational.hpp"

namespace mhs {

/// Coefficients of the degree-(i+1) polynomial S_i(x) = sum_{m=0}^{x-1} m^i,
/// lowest degree first: S_i(x) = (1/(i+1)) sum_j C(i+1,j) B_j x^{i+1-j}.
inline std::vector<Rational> faulhaber_coefficients(int i) {
    const auto& B = bernoulli_table(i);
    std::vector<Rational> c(static_cast<size_t>(i) + 2, Rational(0));
    Int binom(1);  // C(i+1, j)
    for (int j = 0; j <= i; ++j) {
        c[static_cast<size_t>(i + 1 - j)] = Rational(binom) * B[static_cast<size_t>(j)] / Rational(i + 1);
        binom = binom * (i + 1 - j) / (j + 1);
    }
    return c;
}

/**
 * sum_{m=0}^{n-1} m^i mod p^k for arbitrarily large n (0^0 = 1, so S_0(n) = n).
 *
 * The value of S_i at an integer is an integer even though the Faulhaber
 * coefficients are rationals with denominators that may contain p, so n is
 * reduced mod p^{k+g} with g covering v_p of the common denominator, the
 * polynomial evaluated exactly, and the integer result reduced.
 */
inline Int sum_powers_mod(int i, const Int& n, unsigned long p, int k) {
    if (i == 0) {
        Int m = pow_int(p, static_cast<unsigned long>(k));
        Int r = n % m;
        return r < 0 ? r + m : r;
    }
    static thread_local std::vector<std::vector<Rational>> cache;
    if (static_cast<size_t>(i) >= cache.size()) cache.resize(static_cast<size_t>(i) + 1);
    if (cache[static_cast<size_t>(i)].empty()) cache[static_cast<size_t>(i)] = faulhaber_coefficients(i);
    const auto& coef = cache[static_cast<size_t>(i)];

    int guard = 1;
    {
        Int den_lcm(1);
        for (const auto& c : coef)
            if (c != 0) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
        Int tmp;
        guard += static_cast<int>(mpz_remove(tmp.get_mpz_t(), den_lcm.get_mpz_t(), Int(p).get_mpz_t()));
    }
    Int big = pow_int(p, static_cast<unsigned long>(k + guard));
    Int x = n % big;
    if (x < 0) x += big;
    // Horner over exact rationals; the evaluation collapses to an integer
    Rational acc(0);
    for (size_t d = coef.size(); d-- > 0;) {
        acc = acc * Rational(x) + coef[d];
    }
    if (acc.get_den() != 1) throw DomainError("Faulhaber value not integral");
    Int m = pow_int(p, static_cast<unsigned long>(k));
    Int r = Int(acc.get_num()) % m;
    return r < 0 ? r + m : r;
}

} // namespace mhs

#endif
