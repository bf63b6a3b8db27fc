#pragma once

#include <cstdint>

#include "kh/errors.hpp"

namespace kh {

// Residues are stored in 16 bits; the characteristic is capped below 2^16 so
// products fit in 32 bits.
using res_t = std::uint16_t;

// Descriptor of a prime field F_p.  Cheap to copy; equality is equality of p.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (p < 2 || p >= (1u << 16))
            throw config_error("field characteristic must be a prime below 2^16");
        for (std::uint32_t d = 2; d * d <= p; ++d)
            if (p % d == 0)
                throw config_error("field characteristic must be prime");
    }

    std::uint32_t p() const { return p_; }

    res_t reduce(std::uint64_t v) const { return static_cast<res_t>(v % p_); }

    res_t add(res_t a, res_t b) const {
        std::uint32_t s = std::uint32_t(a) + b;
        return static_cast<res_t>(s >= p_ ? s - p_ : s);
    }

    res_t sub(res_t a, res_t b) const {
        return static_cast<res_t>(a >= b ? a - b : a + p_ - b);
    }

    res_t neg(res_t a) const { return static_cast<res_t>(a ? p_ - a : 0); }

    res_t mul(res_t a, res_t b) const {
        return static_cast<res_t>(std::uint32_t(a) * b % p_);
    }

    res_t pow(res_t a, std::uint64_t e) const {
        res_t r = 1;
        res_t base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    // Multiplicative inverse; a must be nonzero.
    res_t inv(res_t a) const {
        if (a == 0) throw config_error("inverse of zero");
        return pow(a, p_ - 2);
    }

    bool operator==(const PrimeField&) const = default;

private:
    std::uint32_t p_;
};

} // namespace kh
