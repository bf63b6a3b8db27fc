#pragma once

#include <cstdint>
#include <string>

#include "kh/errors.hpp"

namespace kh {

namespace detail {

inline __int128 i128_abs(__int128 v) { return v < 0 ? -v : v; }

inline __int128 i128_gcd(__int128 a, __int128 b) {
    a = i128_abs(a);
    b = i128_abs(b);
    while (b) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline __int128 checked_mul(__int128 a, __int128 b) {
    __int128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw precision_error("exact rational arithmetic overflowed 128 bits (cap exceeded)");
    return r;
}

inline __int128 checked_add(__int128 a, __int128 b) {
    __int128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw precision_error("exact rational arithmetic overflowed 128 bits (cap exceeded)");
    return r;
}

std::string i128_to_string(__int128 v);

} // namespace detail

// Exact rational on 128-bit integers: num/den, den > 0, reduced.  Overflow
// throws rather than wrapping; the caps in the discrepancy code keep all
// intermediate values in range.
struct Rat {
    __int128 num = 0;
    __int128 den = 1;

    static Rat of(__int128 n, __int128 d) {
        if (d == 0) throw config_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 g = detail::i128_gcd(n, d);
        if (g > 1) { n /= g; d /= g; }
        return Rat{n, d};
    }
    static Rat integer(__int128 n) { return Rat{n, 1}; }

    Rat operator+(const Rat& o) const {
        return of(detail::checked_add(detail::checked_mul(num, o.den),
                                      detail::checked_mul(o.num, den)),
                  detail::checked_mul(den, o.den));
    }
    Rat operator-(const Rat& o) const {
        return of(detail::checked_add(detail::checked_mul(num, o.den),
                                      -detail::checked_mul(o.num, den)),
                  detail::checked_mul(den, o.den));
    }
    Rat operator*(const Rat& o) const {
        return of(detail::checked_mul(num, o.num), detail::checked_mul(den, o.den));
    }
    Rat abs() const { return Rat{detail::i128_abs(num), den}; }

    int cmp(const Rat& o) const {
        __int128 l = detail::checked_mul(num, o.den);
        __int128 r = detail::checked_mul(o.num, den);
        return l < r ? -1 : (l > r ? 1 : 0);
    }
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rat& o) const { return cmp(o) < 0; }
    bool operator<=(const Rat& o) const { return cmp(o) <= 0; }

    double to_double() const {
        return double((long double)num / (long double)den);
    }
    std::string str() const {
        return detail::i128_to_string(num) + "/" + detail::i128_to_string(den);
    }
};

} // namespace kh
