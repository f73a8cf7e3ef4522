#ifndef MHS_PADIC_HPP
#define MHS_PADIC_HPP

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rational.hpp"

namespace mhs {

struct PrecisionUnderflow : std::runtime_error {
    long val_a, val_b;
    PrecisionUnderflow(const std::string& what, long va, long vb)
        : std::runtime_error(what), val_a(va), val_b(vb) {}
};

/**
 * Truncated element of Q_p with tracked valuation.
 *
 * A nonzero value is p^v * u where the unit u is known modulo p^k (k significant
 * p-adic digits, u coprime to p). Addition may cancel leading digits; the loss is
 * tracked, never guessed, and cancelling the whole window raises
 * PrecisionUnderflow -- unless both operands carry their rational preimage
 * exactly, in which case the sum really is zero and exact-zero is returned.
 */
class Padic {
public:
    Padic() = default;  // exact zero with unset prime

    static Padic zero(unsigned long p) {
        Padic x;
        x.prime_ = p;
        return x;
    }

    static Padic one(unsigned long p, int k) { return from_integer(1, p, k); }

    static Padic from_integer(const Int& n, unsigned long p, int k) {
        return from_rational(Rational(n), p, k);
    }

    static Padic from_rational(const Rational& q, unsigned long p, int k);

    /// Unit digits may be supplied non-reduced; leading zero digits are absorbed
    /// into the valuation. exact=false: a truncated value of unknown tail.
    static Padic make(unsigned long p, long v, Int unit, int k, bool exact = false);

    bool is_zero() const { return zero_; }
    bool is_exact() const { return exact_; }
    unsigned long prime() const { return prime_; }

    long val() const {
        if (zero_) throw DomainError("valuation of zero undefined");
        return val_;
    }

    int precision() const { return sig_; }
    const Int& unit() const { return unit_; }

    /// The value as an integer residue mod p^m, defined when v >= 0 and v + k >= m.
    Int residue(int m) const;

    /// Reconstruction p^v * unit as an exact rational (the truncated value).
    Rational to_rational() const;

    Padic add(const Padic& rhs) const;
    Padic mul(const Padic& rhs) const;
    Padic inv() const;
    Padic neg() const;

    /// Multiply by p^e (exact valuation shift).
    Padic shift(long e) const {
        Padic r = *this;
        if (!r.zero_) r.val_ += e;
        return r;
    }

    std::string str() const;

private:
    unsigned long prime_ = 0;
    long val_ = 0;
    Int unit_ = 0;
    int sig_ = 0;
    bool zero_ = true;
    bool exact_ = true;

    static Int pk(unsigned long p, int k) { return pow_int(p, static_cast<unsigned long>(k)); }
    void check_same(const Padic& rhs) const {
        if (prime_ && rhs.prime_ && prime_ != rhs.prime_)
            throw DomainError("p-adic operands with different primes");
    }
};

inline Padic Padic::make(unsigned long p, long v, Int unit, int k, bool exact) {
    if (k < 1) throw DomainError("p-adic precision must be >= 1");
    Padic x;
    x.prime_ = p;
    Int m = pk(p, k);
    unit %= m;
    if (unit < 0) unit += m;
    if (unit == 0) {
        if (!exact)
            throw PrecisionUnderflow("p-adic unit vanished in the whole window", v, v);
        return zero(p);
    }
    long shift = 0;
    while (unit % p == 0) {
        unit /= p;
        ++shift;
    }
    x.zero_ = false;
    x.val_ = v + shift;
    x.sig_ = k - static_cast<int>(shift);
    x.unit_ = unit % pk(p, x.sig_);
    x.exact_ = exact;
    if (x.sig_ < 1)
        throw PrecisionUnderflow("p-adic value lost all significant digits", v, v);
    return x;
}

inline Padic Padic::from_rational(const Rational& q, unsigned long p, int k) {
    if (q == 0) return zero(p);
    long v = valuation(q, p);
    Int num = q.get_num(), den = q.get_den(), tmp;
    mpz_remove(num.get_mpz_t(), num.get_mpz_t(), Int(p).get_mpz_t());
    mpz_remove(den.get_mpz_t(), den.get_mpz_t(), Int(p).get_mpz_t());
    Int m = pk(p, k);
    Int u = ((num % m) * inv_mod(den % m, m)) % m;
    if (u < 0) u += m;
    Padic x;
    x.prime_ = p;
    x.zero_ = false;
    x.val_ = v;
    x.sig_ = k;
    x.unit_ = u;
    // exact iff the window holds the full value: p^v * u == q
    x.exact_ = (Rational(u) * pow_rational(Rational(p), v) == q);
    return x;
}

inline Int Padic::residue(int m) const {
    Int M = pk(prime_, m);
    if (zero_) return Int(0);
    if (val_ < 0 || (!exact_ && val_ + sig_ < m))
        throw DomainError("residue not determined at requested modulus");
    Int r = unit_ % M;
    for (long i = 0; i < val_ && r != 0; ++i) r = (r * prime_) % M;
    return r;
}

inline Rational Padic::to_rational() const {
    if (zero_) return Rational(0);
    return Rational(unit_) * pow_rational(Rational(prime_), val_);
}

inline Padic Padic::add(const Padic& rhs) const {
    check_same(rhs);
    if (zero_) return rhs;
    if (rhs.zero_) return *this;
    if (exact_ && rhs.exact_) {
        // both windows hold their full values: the sum is computable exactly,
        // so a total cancellation here is a genuine zero, never a guess
        Rational s = to_rational() + rhs.to_rational();
        return from_rational(s, prime_, std::max(sig_, rhs.sig_));
    }
    const Padic& a = (val_ <= rhs.val_) ? *this : rhs;
    const Padic& b = (val_ <= rhs.val_) ? rhs : *this;
    // absolute window top: the sum is known mod p^top
    long top = std::min(a.val_ + a.sig_, b.val_ + b.sig_);
    long w = top - a.val_;
    if (w < 1)
        throw PrecisionUnderflow("p-adic addition: no overlapping digits", val_, rhs.val_);
    Int m = pk(a.prime_, static_cast<int>(w));
    Int u = a.unit_ % m;
    long d = b.val_ - a.val_;
    if (d < w) u = (u + b.unit_ * pk(a.prime_, static_cast<int>(d))) % m;
    if (u == 0)
        throw PrecisionUnderflow("p-adic addition cancelled the whole window", val_, rhs.val_);
    return make(a.prime_, a.val_, u, static_cast<int>(w), false);
}

inline Padic Padic::mul(const Padic& rhs) const {
    check_same(rhs);
    if (zero_ || rhs.zero_) return zero(prime_ ? prime_ : rhs.prime_);
    int k = std::min(sig_, rhs.sig_);
    Int m = pk(prime_, k);
    Int prod = unit_ * rhs.unit_;
    bool ex = exact_ && rhs.exact_ && prod < m;
    return make(prime_, val_ + rhs.val_, prod % m, k, ex);
}

inline Padic Padic::neg() const {
    if (zero_) return *this;
    Padic r = *this;
    r.unit_ = pk(prime_, sig_) - unit_;
    // units are stored as nonnegative residues, so a negated value no longer
    // equals its stored reconstruction; it is truncated from here on
    r.exact_ = false;
    return r;
}

inline Padic Padic::inv() const {
    if (zero_) throw DomainError("inverse of p-adic zero");
    Padic r = *this;
    r.val_ = -val_;
    r.unit_ = inv_mod(unit_, pk(prime_, sig_));
    r.exact_ = false;
    return r;
}

inline std::string Padic::str() const {
    std::ostringstream os;
    if (zero_) {
        os << "0 (exact)";
        return os.str();
    }
    os << "v=" << val_ << " unit=" << unit_.get_str() << " mod " << prime_ << "^" << sig_;
    return os.str();
}

} // namespace mhs

#endif
