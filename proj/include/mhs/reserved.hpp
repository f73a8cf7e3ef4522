#ifndef MHS_RESERVED_HPP
#define MHS_RESERVED_HPP

#include <algorithm>
#include <optional>
#include <sstream>

#include "composition.hpp"
#include "divisible.hpp"
#include "parallel.hpp"
#include "primes.hpp"

namespace mhs {

/// Polynomial in x with rational coefficients (ascending degree), integer-valued
/// at every odd prime argument.
struct ReservedPolynomial {
    std::vector<Rational> coef;

    Int eval_at(unsigned long p) const {
        Rational acc(0);
        for (size_t d = coef.size(); d-- > 0;) acc = acc * Rational(static_cast<long>(p)) + coef[d];
        if (acc.get_den() != 1 || acc < 0)
            throw DomainError("reserved polynomial not a non-negative integer at p = " + std::to_string(p));
        return Int(acc.get_num());
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (size_t d = coef.size(); d-- > 0;) {
            if (coef[d] == 0) continue;
            Rational c = coef[d];
            if (!first) os << (c > 0 ? "+" : "-");
            else if (c < 0) os << "-";
            Rational a = abs(c);
            if (a != 1 || d == 0) os << a.get_str();
            if (d >= 1) os << "x";
            if (d >= 2) os << "^" << d;
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }
};

struct ReservedSet {
    int case_id = 0;
    std::string pattern;             // human description of the matched case
    std::vector<ReservedPolynomial> polynomials;
    int segment_bound = 0;           // 0: full RJ; 8 or 10: RJ_8 / RJ_10 as published
    bool extrapolated = false;       // parameters outside the published bounds
};

namespace detail {

inline ReservedPolynomial rp(std::initializer_list<Rational> ascending) {
    return ReservedPolynomial{std::vector<Rational>(ascending)};
}

inline ReservedPolynomial rp_const(long c) { return rp({Rational(c)}); }
inline ReservedPolynomial rp_x() { return rp({Rational(0), Rational(1)}); }
inline ReservedPolynomial rp_x_minus_1() { return rp({Rational(-1), Rational(1)}); }
inline ReservedPolynomial rp_2x_minus_1() { return rp({Rational(-1), Rational(2)}); }
inline ReservedPolynomial rp_x2_minus_1() { return rp({Rational(-1), Rational(0), Rational(1)}); }
inline ReservedPolynomial rp_x2_minus_x() { return rp({Rational(0), Rational(-1), Rational(1)}); }
inline ReservedPolynomial rp_half_offset(int i) {
    // i + (x-1)/2
    return rp({Rational(i) - Rational(1, 2), Rational(1, 2)});
}

inline bool is_all_ones(const Composition& s) {
    return std::all_of(s.parts.begin(), s.parts.end(), [](int x) { return x == 1; });
}

/// (1^a, 2, 1^b) decomposition; nullopt when the shape does not match.
inline std::optional<std::pair<int, int>> single_two_shape(const Composition& s) {
    int a = -1;
    for (size_t i = 0; i < s.parts.size(); ++i) {
        if (s.parts[i] == 2) {
            if (a >= 0) return std::nullopt;
            a = static_cast<int>(i);
        } else if (s.parts[i] != 1) {
            return std::nullopt;
        }
    }
    if (a < 0) return std::nullopt;
    return std::make_pair(a, static_cast<int>(s.parts.size()) - a - 1);
}

} // namespace detail

/**
 * The published reserved-set catalog. Matching is most-specific-first; the
 * RJ_8 / RJ_10 segment qualifiers and the parameter bounds (r,s,t,l <= 5) are
 * carried as metadata -- queries outside the bounds return the pattern's set
 * flagged extrapolated rather than failing.
 */
inline ReservedSet reserved_set(const Composition& s) {
    using namespace detail;
    ReservedSet out;
    int l = s.length();
    auto finish = [&](int id, std::string pat, std::vector<ReservedPolynomial> polys, int seg) {
        out.case_id = id;
        out.pattern = std::move(pat);
        out.polynomials = std::move(polys);
        out.segment_bound = seg;
        bool in_bounds = l <= 5;
        for (int x : s.parts) in_bounds = in_bounds && x <= 5;
        out.extrapolated = !in_bounds;
        return out;
    };

    if (s == Composition{1})
        return finish(1, "(1)", {rp_const(0), rp_x_minus_1(), rp_x2_minus_1(), rp_x2_minus_x()}, 0);
    if (s == Composition{1, 2, 1})
        return finish(18, "(1,2,1)", {rp_const(0), rp_x_minus_1(), rp_2x_minus_1()}, 10);
    if (s == Composition{2, 1, 1})
        return finish(12, "(2,1,1)", {rp_const(0), rp_x_minus_1()}, 10);
    if (s == Composition{1, 1, 2} || s == Composition{4, 3, 5} || s == Composition{5, 3, 4})
        return finish(12, s.str(), {rp_const(0), rp_x_minus_1()}, 0);

    if (s.is_repeated()) {
        int part = s.parts[0];
        if (part == 1) {
            if (l % 2 == 0)
                return finish(17, "1^l, l even", {rp_const(0), rp_x_minus_1(), rp_x(), rp_2x_minus_1()}, 0);
            return finish(2, "1^l, odd l != 1", {rp_const(0), rp_x_minus_1()}, 10);
        }
        if (part % 2 != 0)  // s >= 3 odd
            return finish(3, "{s}^l, s odd >= 3", {rp_const(0), rp_x_minus_1()}, 10);
        std::vector<ReservedPolynomial> polys{rp_const(0)};
        for (int i = 0; i < l; ++i) polys.push_back(rp_half_offset(i));
        polys.push_back(rp_x_minus_1());
        return finish(4, "{s}^l, s even", std::move(polys), 8);
    }

    if (auto shape = detail::single_two_shape(s)) {
        auto [a, b] = *shape;
        if ((a + b) % 2 == 0)
            return finish(13, "(1^s,2,1^t), s+t even", {rp_const(0), rp_x_minus_1()}, 10);
    }

    if (l == 2) {
        int a = s.parts[0], b = s.parts[1];
        if (b == 1 && a % 2 != 0 && a >= 3)
            return finish(5, "(s,1), s odd >= 3", {rp_const(0), rp_x_minus_1(), rp_x()}, 0);
        if ((a + b) % 2 != 0) return finish(6, "(s,t), s+t odd", {rp_const(0)}, 0);
        if (a != b && b != 1) return finish(7, "(s,t), s != t, s+t even, t != 1", {rp_const(0), rp_x_minus_1()}, 0);
    }

    if (l == 3) {
        int r = s.parts[0], m = s.parts[1], t = s.parts[2];
        if (r == t && m % 2 != 0) return finish(10, "(r,s,r), s odd", {rp_const(0), rp_x_minus_1()}, 0);
        int w = r + m + t;
        if (w % 2 != 0 && w >= 5 && r >= 2 && m >= 2 && t >= 2 && r != t)
            return finish(9, "(r,s,t), odd weight >= 5, parts >= 2, r != t", {rp_const(0)}, 0);
        bool all_same = r == m && m == t;
        if (w % 2 == 0 && w >= 6 && r >= 2 && m >= 2 && t >= 2 && !all_same)
            return finish(11, "(r,s,t), even weight >= 6, parts >= 2, not all equal", {rp_const(0)}, 0);
    }

    if (l == 4 && s.parts[0] == s.parts[2] && s.parts[1] == s.parts[3]) {
        int a = s.parts[0], b = s.parts[1];
        if (a != b && (a + b) % 2 == 0 && b != 1)
            return finish(8, "(s,t,s,t), s != t, s+t even, t != 1", {rp_const(0), rp_x_minus_1()}, 0);
    }

    if (l >= 5) {
        // (1^a,2,1^a,2,1^a) and the two staggered variants
        auto match_three_blocks = [&](int da, int db, int dc) -> std::optional<int> {
            for (int a = 1; 3 * a + 2 + da + db + dc - 3 <= l + 2; ++a) {
                std::vector<int> want;
                auto block = [&](int len) { want.insert(want.end(), static_cast<size_t>(len), 1); };
                block(a + da);
                want.push_back(2);
                block(a + db);
                want.push_back(2);
                block(a + dc);
                if (want == s.parts) return a;
            }
            return std::nullopt;
        };
        if (auto a = match_three_blocks(0, 0, 0))
            return finish(14, "(1^s,2,1^s,2,1^s)", {rp_const(0), rp_x_minus_1()}, 10);
        if (auto a = match_three_blocks(0, -1, 1)) {
            if (*a % 2 == 0) return finish(15, "(1^s,2,1^{s-1},2,1^{s+1}), s even", {rp_const(0), rp_x_minus_1()}, 10);
        }
        if (auto a = match_three_blocks(1, -1, 0)) {
            if (*a % 2 == 0) return finish(16, "(1^{s+1},2,1^{s-1},2,1^s), s even", {rp_const(0), rp_x_minus_1()}, 10);
        }
    }

    throw DomainError("no known reserved set for (" + s.str() + ")");
}

/// Sorted values {f(p) : f in RJ(s)}, optionally restricted to f(p) < p^t.
inline std::vector<Int> reserved_values(const ReservedSet& rs, unsigned long p, int segment = 0) {
    std::vector<Int> vals;
    Int cap = segment > 0 ? pow_int(p, static_cast<unsigned long>(segment)) : Int(0);
    for (const auto& f : rs.polynomials) {
        Int v = f.eval_at(p);
        if (segment > 0 && v >= cap) continue;
        vals.push_back(v);
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

enum class Tristate { Yes, No, Undetermined };

inline const char* tristate_name(Tristate t) {
    switch (t) {
        case Tristate::Yes: return "yes";
        case Tristate::No: return "no";
        default: return "undetermined";
    }
}

/// p is reserved for s when the certified J(s|p) equals RJ(s;p) exactly.
/// The containment RJ(s;p) in J(s|p) is only guaranteed from p >= |s|+3 on,
/// but the comparison itself is well-defined below that and simply reads "no".
inline Tristate is_reserved_prime(const Composition& s, unsigned long p, const Budget& budget = {}) {
    ReservedSet rs = reserved_set(s);
    JSetReport rep = finiteness_verdict(s, p, budget);
    if (!rep.certified_finite()) return Tristate::Undetermined;
    return rep.flat_set() == reserved_values(rs, p) ? Tristate::Yes : Tristate::No;
}

// ---- density scans ----

struct DensityStat {
    Composition composition;
    std::uint64_t bound = 0;       // X
    int first_m = 0;               // 0 = full verdicts, else the m-th reserved density
    std::uint64_t reserved_count = 0;
    std::uint64_t prime_count = 0;
    std::uint64_t undetermined_count = 0;
    Rational density{0};
    std::vector<std::pair<unsigned long, Tristate>> ledger;  // keyed by prime
};

/**
 * Density of reserved primes below X. In first-m mode the comparison is the
 * practical proxy used in published counts: the union of J_t for t <= m
 * against the RJ_m segment, decided by one exact enumeration to p^m - 1 per
 * prime.
 */
inline DensityStat density_scan(const Composition& s, std::uint64_t X, int first_m = 0,
                                const Budget& budget = {}, int threads = 1) {
    DensityStat stat;
    stat.composition = s;
    stat.bound = X;
    stat.first_m = first_m;
    ReservedSet rs = reserved_set(s);
    auto ps = primes_between(static_cast<std::uint64_t>(s.weight()) + 2, X);
    auto classify = [&](std::uint64_t p) -> Tristate {
        if (first_m > 0) {
            Int bound = pow_int(p, static_cast<unsigned long>(first_m)) - 1;
            if (bound > budget.max_power)
                throw BudgetExceeded("density segment p^" + std::to_string(first_m) +
                                     " exceeds the sweep budget at p = " + std::to_string(p));
            auto members = enumerate_members(s, p, mpz_get_ui(bound.get_mpz_t()), budget);
            std::vector<Int> found{Int(0)};
            for (auto n : members) found.emplace_back(static_cast<unsigned long>(n));
            return found == reserved_values(rs, p, first_m) ? Tristate::Yes : Tristate::No;
        }
        return is_reserved_prime(s, p, budget);
    };
    auto verdicts = parallel_map(ps, classify, threads);
    for (size_t i = 0; i < ps.size(); ++i) {
        stat.ledger.emplace_back(ps[i], verdicts[i]);
        ++stat.prime_count;
        if (verdicts[i] == Tristate::Yes) ++stat.reserved_count;
        if (verdicts[i] == Tristate::Undetermined) ++stat.undetermined_count;
    }
    if (stat.prime_count > 0)
        stat.density = Rational(static_cast<unsigned long>(stat.reserved_count),
                                static_cast<unsigned long>(stat.prime_count));
    return stat;
}

} // namespace mhs

#endif
