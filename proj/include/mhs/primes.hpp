#ifndef MHS_PRIMES_HPP
#define MHS_PRIMES_HPP

#include <cstdint>
#include <vector>

namespace mhs {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d : {2ull, 3ull, 5ull}) {
        if (n % d == 0) return n == d;
    }
    // trial division with 2/3 wheel; fine for the < 10^7 range this library scans
    for (std::uint64_t d = 7; d * d <= n; d += 6) {
        if (n % d == 0 || n % (d + 4) == 0) return false;
    }
    return true;
}

/// Primes p with lo < p < hi, ascending.
inline std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = lo + 1; n < hi; ++n)
        if (is_prime(n)) out.push_back(n);
    return out;
}

inline std::uint64_t next_prime(std::uint64_t n) {
    std::uint64_t m = n + 1;
    while (!is_prime(m)) ++m;
    return m;
}

} // namespace mhs

#endif
