#ifndef HSL_SCALAR_HPP
#define HSL_SCALAR_HPP

#include <gmpxx.h>
#include <cstdint>
#include <string>

namespace hsl {

// Exact rational scalar. mpq_class keeps fractions canonical (lowest terms,
// positive denominator), which is exactly the invariant we need.
using Scalar = mpq_class;

inline Scalar scalar(long num, long den = 1) {
    Scalar s(num, den);
    s.canonicalize();
    return s;
}

inline bool is_zero(const Scalar& s) { return sgn(s) == 0; }
inline bool is_one(const Scalar& s) { return s == 1; }

// s^e for any integer e; e < 0 inverts (s must be nonzero then).
inline Scalar pow_int(const Scalar& s, long e) {
    if (e == 0) return Scalar(1);
    Scalar base = e > 0 ? s : Scalar(1) / s;
    unsigned long k = e > 0 ? e : -e;
    Scalar acc(1);
    while (k) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

inline std::string to_string(const Scalar& s) { return s.get_str(); }

inline int cmp_scalar(const Scalar& a, const Scalar& b) {
    return mpq_cmp(a.get_mpq_t(), b.get_mpq_t());
}

// Deterministic 64-bit generator (splitmix64) for seeded evaluation points.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Small nonzero rational, numerator in [-range, range]\{0}, denominator in [1, dmax].
    Scalar rational(long range = 40, long dmax = 7) {
        long num = static_cast<long>(next() % (2 * range)) - range;
        if (num >= 0) num += 1;
        long den = static_cast<long>(next() % dmax) + 1;
        return scalar(num, den);
    }
};

} // namespace hsl

#endif
