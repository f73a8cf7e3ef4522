#include <catch2/catch.hpp>

#include "mhs/bernoulli.hpp"
#include "mhs/faulhaber.hpp"
#include "mhs/primes.hpp"

using namespace mhs;

TEST_CASE("exact Bernoulli numbers") {
    CHECK(bernoulli_exact(0) == 1);
    CHECK(bernoulli_exact(1) == Rational(-1, 2));
    CHECK(bernoulli_exact(2) == Rational(1, 6));
    CHECK(bernoulli_exact(4) == Rational(-1, 30));
    CHECK(bernoulli_exact(12) == Rational(-691, 2730));
    for (int m = 3; m <= 19; m += 2) CHECK(bernoulli_exact(m) == 0);
}

TEST_CASE("power-sum method agrees with the exact recurrence") {
    for (unsigned long p : primes_between(6, 51)) {
        for (int m = 2; m + 3 <= static_cast<int>(p); m += 2) {
            Rational exact = bernoulli_exact(m);
            Int want = rational_mod(exact, Int(static_cast<long>(p)));
            CHECK(Int(static_cast<long>(bernoulli_mod(m, p))) == want);
        }
    }
}

TEST_CASE("bernoulli_mod pinned values") {
    CHECK(bernoulli_mod(32, 37) == 0);  // the classical irregular pair (37, 32)
    CHECK(bernoulli_mod(2, 7) == 6);    // 1/6 = 6 (mod 7)
    CHECK(bernoulli_mod(4, 11) == Int(rational_mod(Rational(-1, 30), Int(11))).get_ui());
    CHECK_THROWS_AS(bernoulli_mod(3, 11), DomainError);   // odd index
    CHECK_THROWS_AS(bernoulli_mod(10, 11), DomainError);  // m = p-1 pole
}

TEST_CASE("irregular indices") {
    CHECK(irregular_indices(37) == std::vector<int>{32});
    CHECK(irregular_indices(7).empty());
    CHECK(irregular_indices(691) == std::vector<int>{12, 200});  // 691 | B_12
    CHECK(irregular_indices(157) == std::vector<int>{62, 110});
    SECTION("oracle agreement for p <= 50") {
        for (unsigned long p : primes_between(6, 51)) {
            std::vector<int> expect;
            for (int m = 2; m + 3 <= static_cast<int>(p); m += 2)
                if (rational_mod(bernoulli_exact(m), Int(static_cast<long>(p))) == 0) expect.push_back(m);
            CHECK(irregular_indices(p) == expect);
        }
    }
}

TEST_CASE("Faulhaber power sums mod p^k") {
    for (int i : {0, 1, 2, 3, 7}) {
        for (long n : {0L, 1L, 10L, 100L}) {
            Int direct(0);
            for (long m = 0; m < n; ++m) {
                if (i == 0) {
                    direct += 1;  // 0^0 = 1 convention
                    continue;
                }
                Int t(1);
                for (int j = 0; j < i; ++j) t *= m;
                direct += t;
            }
            for (unsigned long p : {2ul, 3ul, 7ul}) {
                Int got = sum_powers_mod(i, Int(n), p, 5);
                CHECK(got == direct % pow_int(p, 5));
            }
        }
    }
    SECTION("huge n reduces consistently") {
        Int n = pow_int(7, 30) + 12345;
        // S_i(n) mod 7^k depends only on n modulo a slightly larger power
        Int a = sum_powers_mod(3, n, 7, 4);
        Int b = sum_powers_mod(3, n + pow_int(7, 10), 7, 4);
        CHECK(a == b);
    }
}
