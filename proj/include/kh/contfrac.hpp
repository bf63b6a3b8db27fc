#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "kh/laurent.hpp"
#include "kh/poly.hpp"

namespace kh {

// Continued fraction data for a series L:
//   L = A_0 + 1/(A_1 + 1/(A_2 + ...)),  deg(A_h) >= 1 for h >= 1.
// Convergents follow P_h = A_h P_{h-1} + P_{h-2}, Q_h = A_h Q_{h-1} + Q_{h-2}
// with P_{-1} = 1, P_0 = A_0, Q_{-1} = 0, Q_0 = 1, and d_h = deg(Q_h) is the
// running degree sum of the quotients.  Only certified quotients are stored:
// ones proved correct either by exact rational expansion or by the prefix
// rule 2 d_h <= prefix length (a prefix of length 2 d_h pins the h-th
// convergent of every series sharing it).
class ContinuedFraction {
public:
    ContinuedFraction(PrimeField F, Poly a0) : F_(F), a0_(std::move(a0)) {
        p_.push_back(a0_);            // P_0
        q_.push_back(Poly::one(F_));  // Q_0
        d_.push_back(0);
    }

    PrimeField field() const { return F_; }
    const Poly& a0() const { return a0_; }
    const std::vector<Poly>& quotients() const { return quot_; }
    std::size_t certified_count() const { return quot_.size(); }
    bool exact() const { return exact_; }
    long prefix_used() const { return prefix_used_; }

    // deg(Q_h), 0 <= h <= certified_count().
    long d(std::size_t h) const { return d_.at(h); }

    // (P_h, Q_h); h beyond the certified range throws precision_error.
    std::pair<Poly, Poly> convergent(std::size_t h) const;

    // Internal to cf_expand.
    void push_quotient(Poly a);
    void mark_exact() { exact_ = true; }
    void set_prefix_used(long n) { prefix_used_ = n; }

private:
    PrimeField F_;
    Poly a0_;
    std::vector<Poly> quot_;  // A_1..A_k
    std::vector<Poly> p_, q_; // P_0..P_k, Q_0..Q_k
    std::vector<long> d_;
    bool exact_ = false;
    long prefix_used_ = 0;
};

// Expand L into certified partial quotients.  Rational backings run the
// Euclidean algorithm to exhaustion (all quotients certified, exact).  Every
// other backing is expanded from the coefficient prefix a_1..a_max of {L},
// treated as the rational T/X^max; quotient A_h is certified while
// 2 d_h <= max.  Truncated series clamp max to their capacity.  The zero
// series is an error.
ContinuedFraction cf_expand(const Series& L, long max_coeff);

// Series whose continued fraction is [a0; preperiod, period, period, ...].
// An empty period means the finite CF: the value is the exact rational
// convergent.  All quotients must have degree >= 1.
Series series_from_cf(const Poly& a0, std::vector<Poly> preperiod, std::vector<Poly> period);

// max_{1 <= d <= H} deg(A_d(L)); grows the expansion budget until H quotients
// are certified.  Throws precision_error if the backing cannot certify H
// quotients (truncated window too small, or a rational with a shorter CF).
int K_of(const Series& L, std::size_t H);

// cf_expand with a growth loop: expands until at least `want` quotients are
// certified or the budget cap is hit.
ContinuedFraction cf_expand_at_least(const Series& L, std::size_t want,
                                     long budget_cap = 1 << 20);

} // namespace kh
