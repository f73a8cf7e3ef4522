#ifndef MHS_SWEEP_HPP
#define MHS_SWEEP_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "composition.hpp"
#include "padic.hpp"

namespace mhs {

namespace detail {

// Fixed-modulus p-adic word arithmetic: a value is p^v * u with u a unit known
// modulo p^sig. Two backends share the cell algebra; the 64-bit one covers
// p^k < 2^62 and carries the hot enumeration loops.

struct U64Backend {
    using U = std::uint64_t;
    unsigned long p;
    int K;
    std::vector<std::uint64_t> pw;  // pw[i] = p^i

    U64Backend(unsigned long p_, int K_) : p(p_), K(K_), pw(static_cast<size_t>(K_) + 1) {
        pw[0] = 1;
        for (int i = 1; i <= K; ++i) pw[static_cast<size_t>(i)] = pw[static_cast<size_t>(i - 1)] * p;
    }

    static bool fits(unsigned long p_, int K_) {
        unsigned __int128 m = 1;
        for (int i = 0; i < K_; ++i) {
            m *= p_;
            if (m >= (static_cast<unsigned __int128>(1) << 62)) return false;
        }
        return true;
    }

    U mod(U a, int k) const { return a % pw[static_cast<size_t>(k)]; }
    U mulmod(U a, U b, int k) const {
        return static_cast<U>(static_cast<unsigned __int128>(a) * b % pw[static_cast<size_t>(k)]);
    }
    U addmod(U a, U b, int k) const {
        U m = pw[static_cast<size_t>(k)];
        U s = a + b;  // both < m <= 2^62, no overflow
        return s >= m ? s - m : s;
    }
    /// a^{-1} mod p^K by inverse mod p plus Hensel doubling.
    U invmod(U a) const {
        U x = inv_mod_prime(a % p, p);
        int prec = 1;
        while (prec < K) {
            prec = std::min(2 * prec, K);
            U ax = mulmod(a, x, prec);
            U two_minus = pw[static_cast<size_t>(prec)] + 2 - ax;
            if (two_minus >= pw[static_cast<size_t>(prec)]) two_minus -= pw[static_cast<size_t>(prec)];
            x = mulmod(x, two_minus, prec);
        }
        return x;
    }
    U powmod(U a, unsigned long e, int k) const {
        U r = 1 % pw[static_cast<size_t>(k)];
        U x = mod(a, k);
        while (e) {
            if (e & 1) r = mulmod(r, x, k);
            x = mulmod(x, x, k);
            e >>= 1;
        }
        return r;
    }
    bool is_zero(U a) const { return a == 0; }

    static U inv_mod_prime(U a, U m) {
        // extended Euclid on 64-bit values
        std::int64_t t = 0, nt = 1;
        std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        if (t < 0) t += static_cast<std::int64_t>(m);
        return static_cast<U>(t);
    }
};

struct MpzBackend {
    using U = Int;
    unsigned long p;
    int K;
    std::vector<Int> pw;

    MpzBackend(unsigned long p_, int K_) : p(p_), K(K_), pw(static_cast<size_t>(K_) + 1) {
        pw[0] = 1;
        for (int i = 1; i <= K; ++i) pw[static_cast<size_t>(i)] = pw[static_cast<size_t>(i - 1)] * static_cast<long>(p);
    }
    U mod(const U& a, int k) const { return a % pw[static_cast<size_t>(k)]; }
    U mulmod(const U& a, const U& b, int k) const { return a * b % pw[static_cast<size_t>(k)]; }
    U addmod(const U& a, const U& b, int k) const {
        U s = a + b;
        if (s >= pw[static_cast<size_t>(k)]) s -= pw[static_cast<size_t>(k)];
        return s;
    }
    U invmod(const U& a) const { return inv_mod(a, pw[static_cast<size_t>(K)]); }
    U powmod(const U& a, unsigned long e, int k) const {
        U r;
        mpz_powm_ui(r.get_mpz_t(), a.get_mpz_t(), e, pw[static_cast<size_t>(k)].get_mpz_t());
        return r;
    }
    bool is_zero(const U& a) const { return a == 0; }
};

template <class Backend>
struct PadicSweeper {
    using U = typename Backend::U;

    struct Cell {
        bool zero = true;
        long v = 0;
        U u{};
        int sig = 0;
    };

    Backend bk;

    PadicSweeper(unsigned long p, int K) : bk(p, K) {}

    Cell one() const { return Cell{false, 0, U(1), bk.K}; }

    Cell add(const Cell& a, const Cell& b) const {
        if (a.zero) return b;
        if (b.zero) return a;
        const Cell& lo = a.v <= b.v ? a : b;
        const Cell& hi = a.v <= b.v ? b : a;
        long top = std::min(lo.v + lo.sig, hi.v + hi.sig);
        long w = top - lo.v;
        if (w < 1) throw PrecisionUnderflow("sweep add: no overlapping digits", a.v, b.v);
        long d = hi.v - lo.v;
        U u = bk.mod(lo.u, static_cast<int>(w));
        if (d < w) {
            U scaled = bk.mulmod(hi.u, bk.pw[static_cast<size_t>(d)], static_cast<int>(w));
            u = bk.addmod(u, scaled, static_cast<int>(w));
        }
        if (bk.is_zero(u))
            throw PrecisionUnderflow("sweep add cancelled the whole window", a.v, b.v);
        Cell r{false, lo.v, u, static_cast<int>(w)};
        while (!bk.is_zero(r.u) && bk.is_zero(bk.mod(r.u, 1))) {
            // strip p factors exposed by cancellation
            r.u = divp(r.u);
            r.v += 1;
            r.sig -= 1;
        }
        if (r.sig < 1) throw PrecisionUnderflow("sweep add left no significant digit", a.v, b.v);
        return r;
    }

    Cell mul(const Cell& a, const Cell& b) const {
        if (a.zero || b.zero) return Cell{};
        int k = std::min(a.sig, b.sig);
        return Cell{false, a.v + b.v, bk.mulmod(bk.mod(a.u, k), bk.mod(b.u, k), k), k};
    }

    /// n^{-s} at full precision.
    Cell term(std::uint64_t n, int s) const {
        long e = 0;
        while (n % bk.p == 0) {
            n /= bk.p;
            ++e;
        }
        U inv = bk.invmod(U(n));
        U u = s == 1 ? inv : bk.powmod(inv, static_cast<unsigned long>(s), bk.K);
        return Cell{false, -e * s, u, bk.K};
    }

    /**
     * Prefix sweep of H over n = 1..n_end: maintains H(prefix_j; n) for all
     * prefixes of the composition, visiting the full-length value each step.
     * Visitor: void(std::uint64_t n, const Cell& h).
     */
    template <class Visitor>
    void run(const Composition& s, std::uint64_t n_end, Visitor&& visit) const {
        int l = s.length();
        std::vector<Cell> acc(static_cast<size_t>(l) + 1);
        acc[0] = one();
        // one inversion per n; per-part terms are small powers of it
        std::vector<Cell> tj(static_cast<size_t>(l));
        for (std::uint64_t n = 1; n <= n_end; ++n) {
            std::uint64_t m = n;
            long e = 0;
            while (m % bk.p == 0) {
                m /= bk.p;
                ++e;
            }
            U inv = bk.invmod(U(m));
            for (int j = 0; j < l; ++j) {
                int sj = s.parts[static_cast<size_t>(j)];
                if (j > 0 && sj == s.parts[static_cast<size_t>(j - 1)]) {
                    tj[static_cast<size_t>(j)] = tj[static_cast<size_t>(j - 1)];
                    continue;
                }
                U u = sj == 1 ? inv : bk.powmod(inv, static_cast<unsigned long>(sj), bk.K);
                tj[static_cast<size_t>(j)] = Cell{false, -e * sj, u, bk.K};
            }
            for (int j = l; j >= 1; --j)
                acc[static_cast<size_t>(j)] =
                    add(acc[static_cast<size_t>(j)], mul(acc[static_cast<size_t>(j - 1)], tj[static_cast<size_t>(j - 1)]));
            visit(n, acc[static_cast<size_t>(l)]);
        }
    }

private:
    U divp(const U& u) const {
        if constexpr (std::is_same_v<U, std::uint64_t>) {
            return u / bk.p;
        } else {
            return u / static_cast<long>(bk.p);
        }
    }
};

} // namespace detail

/// Evaluation result of one p-adic sweep position, backend-neutral.
struct PadicValue {
    bool zero = true;
    long v = 0;
    Int unit = 0;
    int sig = 0;

    Padic to_padic(unsigned long p) const {
        if (zero) return Padic::zero(p);
        return Padic::make(p, v, unit, sig, false);
    }
};

namespace detail {

template <class Backend>
PadicValue to_value(const typename PadicSweeper<Backend>::Cell& c) {
    PadicValue r;
    r.zero = c.zero;
    if (!c.zero) {
        r.v = c.v;
        r.sig = c.sig;
        if constexpr (std::is_same_v<typename Backend::U, std::uint64_t>)
            r.unit = Int(static_cast<unsigned long>(c.u));
        else
            r.unit = c.u;
    }
    return r;
}

template <class Fn>
auto with_backend(unsigned long p, int K, Fn&& fn) {
    if (U64Backend::fits(p, K)) {
        PadicSweeper<U64Backend> sw(p, K);
        return fn(sw);
    }
    PadicSweeper<MpzBackend> sw(p, K);
    return fn(sw);
}

template <class Fn>
auto with_retry(int k0, int k_cap, Fn&& fn) {
    int k = k0;
    for (;;) {
        try {
            return fn(k);
        } catch (const PrecisionUnderflow&) {
            if (2 * k > k_cap) throw;
            k *= 2;
        }
    }
}

} // namespace detail

/// H(s; n) as a valuation-tracked p-adic value; O(n * l) modular operations,
/// O(l) memory. Retries once at doubled precision on cancellation underflow.
inline Padic eval_padic(const Composition& s, std::uint64_t n, unsigned long p, int k) {
    if (n < static_cast<std::uint64_t>(s.length())) return Padic::zero(p);
    return detail::with_retry(k, 8 * k + 64, [&](int kk) {
        return detail::with_backend(p, kk, [&](auto& sw) {
            PadicValue out;
            sw.run(s, n, [&](std::uint64_t m, const auto& cell) {
                if (m == n) out = detail::to_value<std::decay_t<decltype(sw.bk)>>(cell);
            });
            return out;
        });
    }).to_padic(p);
}

} // namespace mhs

#endif
