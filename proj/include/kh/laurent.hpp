#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kh/poly.hpp"

namespace kh {

namespace detail {
class SeriesImpl;
}

// Formal Laurent series over F_p in 1/X: L = sum_{i >= w} a_i X^{-i}.
// Index i addresses the coefficient of X^{-i}; i <= 0 is the polynomial part.
// A handle is a shared view of a memoized coefficient oracle; coefficient
// queries are thread safe (the memo prefix grows under an internal lock) and
// deterministic for every backing.
class Series {
public:
    // P/Q expanded at infinity.  Q must be nonzero.  P = 0 gives the zero series.
    static Series rational(const Poly& P, const Poly& Q);

    // Explicit coefficient window a_first..a_{first+len-1}; queries past the
    // window throw precision_error.
    static Series truncated(PrimeField F, long first_index, std::vector<res_t> coeffs);

    // Over F_2: coefficient 1 exactly at the indices 3*2^(n-1) - 2, n >= 1
    // (1, 4, 10, 22, 46, ...).
    static Series gap2();

    // Coefficients a_1, a_2, ... i.i.d. uniform on {0,...,p-1}, realized on
    // demand from a counter keyed by seed; the first `prewarm` are realized
    // eagerly.
    static Series haar(PrimeField F, std::uint64_t seed, long prewarm = 0);

    PrimeField field() const;
    res_t coeff(long i) const;
    // Coefficients a_lo..a_hi inclusive as a flat vector.
    std::vector<res_t> prefix(long lo, long hi) const;

    bool is_zero() const;           // exact zero (rational 0 only)
    long first_index() const;       // lower bound on the support
    std::optional<long> capacity() const; // largest queryable index, if bounded

    // First i with a_i != 0, scanning up to scan_limit.
    std::optional<long> first_nonzero(long scan_limit = 1 << 16) const;

    // Exposes (P, Q) when the backing is rational, otherwise nullptr.
    const std::pair<Poly, Poly>* rational_form() const;

    // Spec text this handle would be written as in file headers.
    const std::string& label() const;

    bool valid() const { return impl_ != nullptr; }

    friend Series frac_part(const Series& L);
    friend Series poly_times_series(const Poly& B, const Series& L);
    friend Series series_add(const Series& a, const Series& b);
    friend Series make_periodic_cf_series(const Poly& a0, std::vector<Poly> preperiod,
                                          std::vector<Poly> period, std::string label);

private:
    explicit Series(std::shared_ptr<const detail::SeriesImpl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const detail::SeriesImpl> impl_;
};

// Internal factory used by series_from_cf; callers must have validated the
// quotients (degrees >= 1) and pass a nonempty period.
Series make_periodic_cf_series(const Poly& a0, std::vector<Poly> preperiod,
                               std::vector<Poly> period, std::string label);

// Drop every coefficient with index <= 0.  Idempotent.
Series frac_part(const Series& L);

// B(X) * L as a series; rational backings stay rational.
Series poly_times_series(const Poly& B, const Series& L);

Series series_add(const Series& a, const Series& b);

// Series with i.i.d. Haar-uniform coefficients, the first M realized up
// front; reproducible from (p, seed).
Series sample_haar(PrimeField F, long M, std::uint64_t seed);

// Series mini-language:
//   rational:<P>/<Q>   e.g. rational:X+1/X^2
//   cf:<A1>,<A2>,...   partial quotients, symbolic polys; trailing '*' makes
//                      the list periodic, an optional '|' splits preperiod
//                      from period (e.g. cf:X|X^2,X*)
//   gap2
//   random:<seed>
Series parse_series(PrimeField F, const std::string& text);

} // namespace kh
