#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kh/field.hpp"

namespace kh {

// Degree of a polynomial.  The zero polynomial gets a distinguished sentinel
// that orders below every finite degree; it is not the integer -1, so it
// cannot leak into arithmetic by accident.
class Degree {
public:
    static Degree neg_infinity() { return Degree(0, false); }
    static Degree of(int d) { return Degree(d, true); }

    bool is_finite() const { return finite_; }

    // Finite value; calling this on the sentinel is a logic error.
    int value() const {
        if (!finite_) throw config_error("degree of the zero polynomial has no value");
        return d_;
    }

    friend bool operator==(const Degree& a, const Degree& b) {
        return a.finite_ == b.finite_ && (!a.finite_ || a.d_ == b.d_);
    }
    friend std::strong_ordering operator<=>(const Degree& a, const Degree& b) {
        if (a.finite_ != b.finite_) return a.finite_ <=> b.finite_; // -inf first
        if (!a.finite_) return std::strong_ordering::equal;
        return a.d_ <=> b.d_;
    }

private:
    Degree(int d, bool finite) : d_(d), finite_(finite) {}
    int d_;
    bool finite_;
};

// Dense polynomial over F_p, little-endian coefficients in {0,...,p-1},
// highest stored coefficient nonzero (the zero polynomial stores nothing).
class Poly {
public:
    Poly() : F_(2) {}
    explicit Poly(PrimeField F) : F_(F) {}
    Poly(PrimeField F, std::vector<res_t> coeffs) : F_(F), c_(std::move(coeffs)) {
        for (res_t& v : c_)
            if (v >= F_.p()) v = F_.reduce(v);
        trim();
    }

    static Poly zero(PrimeField F) { return Poly(F); }
    static Poly constant(PrimeField F, res_t v) { return Poly(F, {v}); }
    static Poly one(PrimeField F) { return constant(F, 1); }
    static Poly x(PrimeField F) { return Poly(F, {0, 1}); }

    const PrimeField& field() const { return F_; }
    bool is_zero() const { return c_.empty(); }
    std::size_t size() const { return c_.size(); } // deg+1, or 0 for zero

    Degree degree() const {
        return c_.empty() ? Degree::neg_infinity() : Degree::of(int(c_.size()) - 1);
    }
    // Degree as int; requires a nonzero polynomial.
    int deg() const { return degree().value(); }

    res_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    res_t leading() const {
        if (c_.empty()) throw config_error("leading coefficient of zero");
        return c_.back();
    }
    const std::vector<res_t>& coeffs() const { return c_; }

    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(res_t k) const;        // k * this
    Poly shifted(int k) const;         // this * X^k, k >= 0
    Poly monic() const;                // unit multiple with leading 1; nonzero input

    bool operator==(const Poly& o) const { return F_ == o.F_ && c_ == o.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    void check_field(const Poly& o) const {
        if (!(F_ == o.F_)) throw config_error("polynomial field mismatch");
    }

    PrimeField F_;
    std::vector<res_t> c_;
};

// n written in base p as a polynomial: digit i of n becomes the coefficient
// of X^i.
Poly int_to_poly(std::uint64_t n, PrimeField F);

// Evaluate with coefficients lifted to {0,...,p-1} at an integer point, exact;
// throws config_error if the value would not fit in 64 bits.
std::uint64_t poly_eval_int(const Poly& a, std::uint64_t at);

// Division with remainder: a = q*b + r, deg r < deg b.
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);

// Monic gcd; gcd(0, 0) is an error.
Poly poly_gcd(Poly a, Poly b);

// Extended gcd: returns (g, s, t) with g monic and s*a + t*b = g.
struct XgcdResult {
    Poly g, s, t;
};
XgcdResult poly_xgcd(const Poly& a, const Poly& b);

// Digits of n(X) in base b(X): n = sum digits[i] * b^i with deg digits[i] <
// deg b.  b must be monic of degree >= 1.  Empty vector for n = 0.
std::vector<Poly> base_digits(const Poly& n, const Poly& b);

// Text format.  Parsing accepts either symbolic terms ("X^2+X+1", "2X^3",
// "2*X^3", any order, '-' allowed) or a little-endian coefficient list
// ("1,1,1").  Printing always emits the symbolic form, highest degree first.
Poly parse_poly(PrimeField F, const std::string& text);
std::string poly_to_string(const Poly& a);

} // namespace kh
