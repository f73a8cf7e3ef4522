#ifndef MHS_STAR_SERIES_HPP
#define MHS_STAR_SERIES_HPP

#include <cstdint>
#include <vector>

#include "composition.hpp"
#include "rational.hpp"

namespace mhs {

/**
 * Evaluator for restricted sums H*(s; p*n) modulo p^M with n arbitrarily large.
 *
 * Grouping the sum into blocks (mp, (m+1)p) and expanding (mp+j)^{-s} as a
 * binomial series in mp/j gives the p-adically convergent form
 *
 *   H*(s; p n) = sum_{i>=0} (-1)^i C(s+i-1, i) p^i H(s+i; p-1) S_i(n),
 *   S_i(n) = sum_{m=0}^{n-1} m^i,
 *
 * where terms beyond i = M-1 vanish mod p^M. S_i(n) is reduced through the
 * binomial-coefficient basis: S_i(n) = sum_j S2(i,j) j! C(n, j+1), with the
 * C(n,k) built once per n as valuation-tracked products. Everything here is
 * p-integral, so values are plain residues mod p^M.
 */
class StarSeries {
public:
    StarSeries(unsigned long p, int s, int M) : p_(p), s_(s), M_(M), P_(pow_int(p, static_cast<unsigned long>(M))) {
        build_harmonic_tables();
        build_stirling();
        build_coefficients();
    }

    unsigned long prime() const { return p_; }
    int exponent() const { return s_; }
    int precision() const { return M_; }
    const Int& modulus() const { return P_; }

    /// H(s; r) mod p^M for 0 <= r <= p-1.
    const Int& h_initial(unsigned long r) const { return htab_[0][r]; }

    /// Per-n scratch: falling binomials C(n, k) and powers of pn.
    struct Point {
        Int n;
        std::vector<Int> choose;  // choose[k] = C(n, k) mod p^M, k = 0..M+1
        std::vector<Int> qpow;    // (p*n)^i mod p^M, i = 0..M-1
    };

    Point at(const Int& n) const {
        Point pt;
        pt.n = n;
        pt.choose.assign(static_cast<size_t>(M_) + 2, Int(0));
        pt.choose[0] = 1;
        // C(n,k) = C(n,k-1) * (n-k+1) / k with the p-part carried separately
        Int unit = 1;
        long vp_acc = 0;
        Int nred = n % (P_ * P_);  // headroom for stripped p factors
        for (int k = 1; k <= M_ + 1; ++k) {
            Int f = nred - (k - 1);
            if (f == 0) {
                // C(n,j) = 0 for j > n (only for tiny integer n)
                for (int j = k; j <= M_ + 1; ++j) pt.choose[static_cast<size_t>(j)] = 0;
                break;
            }
            while (f % static_cast<long>(p_) == 0) {
                f /= static_cast<long>(p_);
                ++vp_acc;
            }
            long kk = k;
            while (kk % static_cast<long>(p_) == 0) {
                kk /= static_cast<long>(p_);
                --vp_acc;
            }
            unit = unit * (f % P_) % P_;
            unit = unit * inv_mod(Int(kk), P_) % P_;
            if (unit < 0) unit += P_;
            if (vp_acc < 0) throw DomainError("binomial valuation went negative");
            Int val = vp_acc >= M_ ? Int(0) : unit * pow_int(p_, static_cast<unsigned long>(vp_acc)) % P_;
            pt.choose[static_cast<size_t>(k)] = val;
        }
        pt.qpow.assign(static_cast<size_t>(M_), Int(0));
        pt.qpow[0] = 1;
        Int q = n % P_ * static_cast<long>(p_) % P_;
        for (int i = 1; i < M_; ++i) pt.qpow[static_cast<size_t>(i)] = pt.qpow[static_cast<size_t>(i - 1)] * q % P_;
        return pt;
    }

    /// S_i(n) = sum_{m=0}^{n-1} m^i mod p^M (0^0 = 1).
    Int sum_powers(const Point& pt, int i) const {
        if (i == 0) {
            Int r = pt.n % P_;
            return r < 0 ? r + P_ : r;
        }
        Int acc(0);
        for (int j = 1; j <= i; ++j)
            acc += stirling_jfact_[static_cast<size_t>(i)][static_cast<size_t>(j)] * pt.choose[static_cast<size_t>(j + 1)];
        return acc % P_;
    }

    /// H*(s; p*n) mod p^M.
    Int star_pn(const Point& pt) const {
        Int acc(0);
        for (int i = 0; i < M_; ++i) {
            if (coef_w_[static_cast<size_t>(i)] == 0) continue;
            acc += coef_w_[static_cast<size_t>(i)] * sum_powers(pt, i);
        }
        return acc % P_;
    }

    /// sum_{j=1}^{r} (p*n + j)^{-s} mod p^M for 0 <= r <= p-1.
    Int tail(const Point& pt, unsigned long r) const {
        Int acc(0);
        for (int i = 0; i < M_; ++i) {
            const Int& h = htab_[static_cast<size_t>(i)][r];
            if (h == 0) continue;
            acc += coef_bare_[static_cast<size_t>(i)] * pt.qpow[static_cast<size_t>(i)] % P_ * h;
        }
        return acc % P_;
    }

    /// H*(s; p*n + r) mod p^M.
    Int star_at(const Point& pt, unsigned long r) const {
        return (star_pn(pt) + tail(pt, r)) % P_;
    }

private:
    unsigned long p_;
    int s_, M_;
    Int P_;
    std::vector<std::vector<Int>> htab_;             // htab_[i][r] = H(s+i; r) mod P
    std::vector<std::vector<Int>> stirling_jfact_;   // S2(i,j) * j! mod P
    std::vector<Int> coef_w_;                        // (-1)^i C(s+i-1,i) p^i H(s+i;p-1)
    std::vector<Int> coef_bare_;                     // (-1)^i C(s+i-1,i)

    void build_harmonic_tables() {
        htab_.assign(static_cast<size_t>(M_), std::vector<Int>(p_, Int(0)));
        std::vector<Int> invpow(p_);  // r^{-(s+i)} running
        for (unsigned long r = 1; r < p_; ++r) {
            Int inv = inv_mod(Int(r), P_);
            Int x;
            mpz_powm_ui(x.get_mpz_t(), inv.get_mpz_t(), static_cast<unsigned long>(s_), P_.get_mpz_t());
            invpow[r] = x;
        }
        std::vector<Int> invs(p_);
        for (unsigned long r = 1; r < p_; ++r) invs[r] = inv_mod(Int(r), P_);
        for (int i = 0; i < M_; ++i) {
            auto& row = htab_[static_cast<size_t>(i)];
            Int acc(0);
            for (unsigned long r = 1; r < p_; ++r) {
                acc = (acc + invpow[r]) % P_;
                row[r] = acc;
                invpow[r] = invpow[r] * invs[r] % P_;
            }
        }
    }

    void build_stirling() {
        // S2(i,j) * j! mod P by S2(i,j) = j S2(i-1,j) + S2(i-1,j-1)
        stirling_jfact_.assign(static_cast<size_t>(M_) + 1, {});
        std::vector<std::vector<Int>> s2(static_cast<size_t>(M_) + 1,
                                         std::vector<Int>(static_cast<size_t>(M_) + 2, Int(0)));
        s2[0][0] = 1;
        for (int i = 1; i <= M_; ++i)
            for (int j = 1; j <= i; ++j)
                s2[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    (Int(j) * s2[static_cast<size_t>(i - 1)][static_cast<size_t>(j)] +
                     s2[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)]) % P_;
        Int fact(1);
        std::vector<Int> facts(static_cast<size_t>(M_) + 2);
        facts[0] = 1;
        for (int j = 1; j <= M_ + 1; ++j) {
            fact = fact * j % P_;
            facts[static_cast<size_t>(j)] = fact;
        }
        for (int i = 0; i <= M_; ++i) {
            stirling_jfact_[static_cast<size_t>(i)].assign(static_cast<size_t>(i) + 1, Int(0));
            for (int j = 0; j <= i; ++j)
                stirling_jfact_[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    s2[static_cast<size_t>(i)][static_cast<size_t>(j)] * facts[static_cast<size_t>(j)] % P_;
        }
    }

    void build_coefficients() {
        coef_w_.assign(static_cast<size_t>(M_), Int(0));
        coef_bare_.assign(static_cast<size_t>(M_), Int(0));
        Int binom(1);  // C(s+i-1, i)
        Int ppow(1);
        for (int i = 0; i < M_; ++i) {
            Int c = binom % P_;
            if (i % 2 == 1) c = (P_ - c) % P_;
            coef_bare_[static_cast<size_t>(i)] = c;
            coef_w_[static_cast<size_t>(i)] = c * ppow % P_ * htab_[static_cast<size_t>(i)][p_ - 1] % P_;
            binom = binom * (s_ + i) / (i + 1);
            ppow = ppow * static_cast<long>(p_) % P_;
        }
    }
};

} // namespace mhs

#endif
