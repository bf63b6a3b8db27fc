#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kh/laurent.hpp"
#include "kh/matrix.hpp"
#include "kh/poly.hpp"

namespace kh {

// One point of an s-dimensional digital sequence: per coordinate the base-p
// digit string y_1 y_2 ... (value sum y_j p^{-j}).  The point *is* its digit
// string: digits beyond the stored precision are zero (truncation rounds
// down), so box membership at any resolution <= precision is exact.
struct DigitPoint {
    DigitPoint(PrimeField field, int prec) : F(field), precision(prec) {}

    double value(std::size_t dim) const;
    std::string digit_string(std::size_t dim) const;
    // Integer formed by the first k digits of a coordinate (value * p^k).
    std::uint64_t scaled(std::size_t dim, int k) const;

    PrimeField F;
    int precision; // requested precision; coordinates store at least this
    std::vector<std::vector<res_t>> coords;
};

// Van der Corput / Halton point in polynomial bases: expand n(X) in base
// b_j(X), each digit a_i (deg < e_j) contributes the e_j base-p digits of
// a_i(p) at positions e_j*i+1 .. e_j*i+e_j, most significant first.  Each
// coordinate precision is m rounded up to a multiple of e_j.  Bases must be
// monic, nonconstant and pairwise coprime.
DigitPoint halton_point(std::uint64_t n, const std::vector<Poly>& bases, int m);

// m x m Hankel slice of the generating matrix of {L}.
MatrixFp kronecker_matrix(const Series& L, int m);

// Digital Kronecker point: digits are the first m coefficients of
// {n(X) L + V}.  Equals the matrix route C * digits(n) when V = 0.
DigitPoint kronecker_point(std::uint64_t n, const Series& L, int m,
                           const Series* shift = nullptr);

// Hybrid spec: s Kronecker coordinates followed by t Halton coordinates,
// all over the same prime field.
struct HybridSpec {
    HybridSpec(PrimeField field, std::vector<Series> kron_, std::vector<Poly> halton_,
               int prec);

    PrimeField F;
    std::vector<Series> kron;
    std::vector<Poly> halton;
    int precision;
    std::vector<Series> shifts; // optional, per Kronecker coordinate

    std::size_t dims() const { return kron.size() + halton.size(); }
    std::string label() const;
};

// Precision rule used by the generators: ceil(log_p N) + 20.
int default_precision(PrimeField F, std::uint64_t N);

DigitPoint hybrid_point(std::uint64_t n, const HybridSpec& spec);

// Generate points n_begin..n_end-1.  Same values as hybrid_point, with the
// coefficient prefixes fetched once.
std::vector<DigitPoint> hybrid_block(const HybridSpec& spec, std::uint64_t n_begin,
                                     std::uint64_t n_end);

// All n in [K p^{u+e}, (K+1) p^{u+e}) with n(X) = k(X) B(X) + R(X) for some k
// (that is, n(X) = R mod B), deg(R) < deg(B) = e, B monic.  There are exactly
// p^u of them, and k(X) = r(X) + X^u C(X) with one fixed C and r running over
// all polynomials of degree < u; the construction is cross-checked against
// that decomposition.  Indices are returned sorted.
struct ResidueBlock {
    std::vector<std::uint64_t> indices;
    Poly C;
};
ResidueBlock residue_block_indices(std::uint64_t K, int u, const Poly& B, const Poly& R);

// Digit engine for one Kronecker coordinate; prefetches the coefficient
// prefix so per-point generation takes no locks.
class KronDigitGen {
public:
    KronDigitGen(const Series& L, int m, std::uint64_t max_n, const Series* shift = nullptr);
    void digits(std::uint64_t n, res_t* out) const; // writes m digits
    int m() const { return m_; }

private:
    PrimeField F_;
    int m_;
    std::vector<res_t> a_;     // a_1 .. a_{m + maxdigits}
    std::vector<res_t> shift_; // v_1 .. v_m
};

// Digit engine for one Halton coordinate (divmod chain with reused buffers).
class HaltonDigitGen {
public:
    HaltonDigitGen(const Poly& base, int m); // m rounded up to a multiple of e
    void digits(std::uint64_t n, res_t* out) const; // writes m_rounded digits
    int m_rounded() const { return mr_; }

private:
    PrimeField F_;
    Poly base_;
    int e_, mr_;
    mutable std::vector<res_t> cur_, next_;
};

} // namespace kh
