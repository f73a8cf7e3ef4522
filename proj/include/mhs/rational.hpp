#ifndef MHS_RATIONAL_HPP
#define MHS_RATIONAL_HPP

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace mhs {

// GMP carries all exact arithmetic. mpq_class is kept canonical by construction:
// gcd(num, den) = 1, den >= 1, zero is 0/1 -- exactly the reduced-fraction contract.
using Int = mpz_class;
using Rational = mpq_class;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Two routes that must agree, disagreed; or a proved uniqueness failed.
/// Either a library bug or a mathematical event worth reporting loudly.
struct InternalInconsistency : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exponent of the prime p in the nonzero integer n.
inline long valuation(const Int& n, unsigned long p) {
    if (n == 0) throw DomainError("valuation of zero undefined");
    mpz_class tmp;
    return static_cast<long>(mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), Int(p).get_mpz_t()));
}

/// v_p(q) for q != 0; negative when p divides the denominator.
inline long valuation(const Rational& q, unsigned long p) {
    if (q == 0) throw DomainError("valuation of zero undefined");
    return valuation(Int(q.get_num()), p) - valuation(Int(q.get_den()), p);
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int pow_int(unsigned long base, unsigned long e) { return pow_int(Int(base), e); }

inline Rational pow_rational(const Rational& base, long e) {
    Rational r;
    unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), a);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), a);
    if (e < 0) {
        if (base == 0) throw DomainError("0^negative");
        r = 1 / r;
    }
    r.canonicalize();
    return r;
}

/// Representative of q mod 1 in (0,1] for q > 0 (the "fractional part" used when
/// tabulating partial sums: an integer value reports as 1, not 0).
inline Rational fractional_part(const Rational& q) {
    if (q <= 0) throw DomainError("fractional_part expects q > 0");
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    Rational r = q - Rational(fl);
    return r == 0 ? Rational(1) : r;
}

/// a^{-1} mod m (m >= 2, gcd(a,m) = 1).
inline Int inv_mod(const Int& a, const Int& m) {
    Int r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
        throw DomainError("not invertible mod m");
    return r;
}

/// q mod m for a rational with denominator coprime to m.
inline Int rational_mod(const Rational& q, const Int& m) {
    Int num = q.get_num() % m;
    if (num < 0) num += m;
    return num * inv_mod(Int(q.get_den() % m), m) % m;
}

} // namespace mhs

#endif
