#include <catch2/catch.hpp>

#include <random>

#include "mhs/padic.hpp"
#include "mhs/rational.hpp"

using namespace mhs;

TEST_CASE("valuation of rationals") {
    CHECK(valuation(Rational(11, 24), 2) == -3);
    CHECK(valuation(Rational(7), 7) == 1);
    CHECK(valuation(Rational(1, 49), 7) == -2);
    CHECK_THROWS_AS(valuation(Rational(0), 5), DomainError);

    SECTION("vp is additive and ultrametric") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 500; ++i) {
            long an = static_cast<long>(rng() % 2000) - 1000;
            long bn = static_cast<long>(rng() % 2000) - 1000;
            unsigned long ad = rng() % 999 + 1, bd = rng() % 999 + 1;
            if (an == 0 || bn == 0) continue;
            Rational a(an, ad), b(bn, bd);
            unsigned long p = std::vector<unsigned long>{2, 3, 5, 7}[rng() % 4];
            CHECK(valuation(a * b, p) == valuation(a, p) + valuation(b, p));
            if (a + b != 0) {
                long va = valuation(a, p), vb = valuation(b, p);
                long vs = valuation(a + b, p);
                CHECK(vs >= std::min(va, vb));
                if (va != vb) CHECK(vs == std::min(va, vb));
            }
        }
    }
}

TEST_CASE("fractional part lives in (0,1]") {
    CHECK(fractional_part(Rational(35, 24)) == Rational(11, 24));
    CHECK(fractional_part(Rational(1)) == 1);
    CHECK(fractional_part(Rational(1, 2)) == Rational(1, 2));
    CHECK(fractional_part(Rational(7, 3)) == Rational(1, 3));
    CHECK(fractional_part(Rational(3)) == 1);
}

TEST_CASE("padic construction from rationals") {
    Padic x = Padic::from_rational(Rational(1, 2), 3, 2);
    CHECK(x.val() == 0);
    CHECK(x.unit() == 5);  // 2*5 = 1 (mod 9)

    Padic y = Padic::from_rational(Rational(9, 4), 3, 3);
    CHECK(y.val() == 2);
    CHECK(y.unit() == 7);  // 4*7 = 1 (mod 27)

    CHECK(Padic::from_rational(Rational(0), 5, 3).is_zero());

    SECTION("round-trip against the exact rational mod p^k") {
        std::mt19937_64 rng(11);
        for (int i = 0; i < 400; ++i) {
            unsigned long p = std::vector<unsigned long>{2, 3, 5, 7, 11}[rng() % 5];
            int k = 2 + static_cast<int>(rng() % 5);
            Int m = pow_int(p, static_cast<unsigned long>(k));
            unsigned long num = rng() % 10000 + 1;
            unsigned long den = rng() % 10000 + 1;
            while (den % p == 0) ++den;
            Rational q(num, den);
            Padic z = Padic::from_rational(q, p, k);
            if (z.val() < 0 || z.val() >= k) continue;
            CHECK(z.residue(k - static_cast<int>(z.val())) ==
                  rational_mod(q, pow_int(p, static_cast<unsigned long>(k - z.val()))));
        }
    }
}

TEST_CASE("padic arithmetic matches exact arithmetic where both live") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 400; ++i) {
        unsigned long p = std::vector<unsigned long>{3, 5, 7}[rng() % 3];
        int k = 6;
        Rational a(static_cast<long>(rng() % 500 + 1), rng() % 500 + 1);
        Rational b(static_cast<long>(rng() % 500 + 1), rng() % 500 + 1);
        Padic pa = Padic::from_rational(a, p, k);
        Padic pb = Padic::from_rational(b, p, k);
        Padic prod = pa.mul(pb);
        CHECK(prod.val() == valuation(a * b, p));
        Rational sum = a + b;
        if (sum != 0) {
            try {
                Padic ps = pa.add(pb);
                CHECK(ps.val() == valuation(sum, p));
            } catch (const PrecisionUnderflow&) {
                // the window really did cancel: the sum must sit above it
                CHECK(valuation(sum, p) >= std::min(valuation(a, p), valuation(b, p)) + k);
            }
        }
    }
}

TEST_CASE("padic special cases from the contract") {
    SECTION("near-cancellation drops precision but keeps the valuation honest") {
        unsigned long p = 5;
        // truncated operands: u = 1 and u = p-1 at two digits
        Padic a = Padic::make(p, 0, 1, 2, false);
        Padic b = Padic::make(p, 0, 4, 2, false);
        Padic s = a.add(b);  // 1 + 4 = 5: one digit survives
        CHECK(s.val() == 1);
        CHECK(s.precision() == 1);
    }
    SECTION("(v=-1) * (v=1) = v=0") {
        Padic a = Padic::make(7, -1, 1, 3, false);
        Padic b = Padic::make(7, 1, 1, 3, false);
        Padic c = a.mul(b);
        CHECK(c.val() == 0);
        CHECK(c.unit() == 1);
    }
    SECTION("inverse") {
        Padic y = Padic::from_rational(Rational(9, 4), 3, 3);
        Padic inv = y.inv();
        CHECK(inv.val() == -2);
        CHECK(inv.unit() == 4);
        CHECK_THROWS_AS(Padic::zero(3).inv(), DomainError);
    }
    SECTION("full cancellation of truncated values underflows, never zero") {
        Padic a = Padic::make(5, 0, 7, 3, false);
        Padic b = Padic::make(5, 0, 125 - 7, 3, false);
        CHECK_THROWS_AS(a.add(b), PrecisionUnderflow);
    }
    SECTION("exact operands recompute through the rationals") {
        // 3 + (5^3 - 3): both windows hold their full values; the sum is 5^3
        Padic a = Padic::from_rational(Rational(3), 5, 3);
        Padic b = Padic::from_rational(Rational(122), 5, 3);
        Padic s = a.add(b);
        CHECK(s.val() == 3);
        CHECK(s.unit() == 1);
    }
    SECTION("mismatched primes refuse to combine") {
        Padic a = Padic::from_rational(Rational(1), 3, 2);
        Padic b = Padic::from_rational(Rational(1), 5, 2);
        CHECK_THROWS_AS(a.add(b), DomainError);
    }
}
