#include "kh/contfrac.hpp"

#include <algorithm>
#include <sstream>

namespace kh {

void ContinuedFraction::push_quotient(Poly a) {
    if (a.is_zero() || a.deg() < 1)
        throw config_error("partial quotient must have degree >= 1");
    std::size_t h = quot_.size(); // becoming A_{h+1}
    Poly pn = a * p_[h] + (h == 0 ? Poly::one(F_) : p_[h - 1]);
    Poly qn = a * q_[h] + (h == 0 ? Poly(F_) : q_[h - 1]);
    d_.push_back(d_[h] + a.deg());
    p_.push_back(std::move(pn));
    q_.push_back(std::move(qn));
    quot_.push_back(std::move(a));
}

std::pair<Poly, Poly> ContinuedFraction::convergent(std::size_t h) const {
    if (h > quot_.size())
        throw precision_error("convergent index " + std::to_string(h) +
                              " beyond the certified range (" +
                              std::to_string(quot_.size()) + ")");
    return {p_[h], q_[h]};
}

namespace {

// Quotients of a/b where deg(b) < deg(a); every Euclid step then produces a
// quotient of degree >= 1.  Appends all of them to cf.
void euclid_quotients(ContinuedFraction& cf, Poly a, Poly b) {
    while (!b.is_zero()) {
        auto [q, r] = poly_divmod(a, b);
        cf.push_quotient(std::move(q));
        a = std::move(b);
        b = std::move(r);
    }
}

} // namespace

ContinuedFraction cf_expand(const Series& L, long max_coeff) {
    if (L.is_zero()) throw config_error("cf_expand: zero series");
    if (max_coeff < 1) throw config_error("cf_expand: need a positive coefficient budget");
    const PrimeField F = L.field();

    if (const auto* pq = L.rational_form()) {
        auto [a0, rem] = poly_divmod(pq->first, pq->second);
        ContinuedFraction cf(F, a0);
        // L = a0 + rem/Q; 1/(rem/Q) = Q/rem.
        if (!rem.is_zero()) euclid_quotients(cf, pq->second, rem);
        cf.mark_exact();
        cf.set_prefix_used(max_coeff);
        return cf;
    }

    long avail = max_coeff;
    if (auto cap = L.capacity()) avail = std::min(avail, *cap);

    // Polynomial part of L becomes A_0.
    std::vector<res_t> head;
    long lo = L.first_index();
    if (lo <= 0) head = L.prefix(lo, 0);
    std::vector<res_t> a0c;
    for (std::size_t k = 0; k < head.size(); ++k) a0c.push_back(head[head.size() - 1 - k]);
    ContinuedFraction cf(F, Poly(F, std::move(a0c)));

    if (avail < 1) { cf.set_prefix_used(0); return cf; }

    // Prefix of {L} as the exact rational T/X^avail.
    std::vector<res_t> pre = L.prefix(1, avail);
    std::vector<res_t> tc(std::size_t(avail), 0);
    for (long i = 1; i <= avail; ++i) tc[std::size_t(avail - i)] = pre[std::size_t(i - 1)];
    Poly T(F, std::move(tc));
    Poly M = Poly::one(F).shifted(int(avail));

    // Candidate quotients of T/M; certify A_h while 2 d_h <= avail.  Any L'
    // sharing the prefix satisfies nu(L' - P_h/Q_h) <= -(2 d_h + 1), so by
    // the best-approximation theorem P_h/Q_h is a convergent of L' too, and
    // no convergent of L' with a smaller denominator degree can be missing
    // from the run for the same reason.
    std::vector<Poly> cand;
    {
        Poly a = M, b = T;
        while (!b.is_zero()) {
            auto [q, r] = poly_divmod(a, b);
            cand.push_back(std::move(q));
            a = std::move(b);
            b = std::move(r);
        }
    }
    // Running degree sums d[k] = sum of deg(cand[0..k-1]) = deg(Q_k).
    std::vector<long> dsum(cand.size() + 1, 0);
    for (std::size_t k = 0; k < cand.size(); ++k) dsum[k + 1] = dsum[k] + cand[k].deg();
    for (std::size_t h = 1; h <= cand.size(); ++h) { // A_h = cand[h-1]
        if (2 * dsum[h] <= avail)
            cf.push_quotient(cand[h - 1]);
        else
            break;
    }
    cf.set_prefix_used(avail);
    return cf;
}

ContinuedFraction cf_expand_at_least(const Series& L, std::size_t want, long budget_cap) {
    long budget = std::max<long>(16, long(4 * want + 8));
    for (;;) {
        ContinuedFraction cf = cf_expand(L, budget);
        if (cf.certified_count() >= want) return cf;
        if (cf.exact())
            throw precision_error("continued fraction has only " +
                                  std::to_string(cf.certified_count()) +
                                  " quotients (rational input out of scope)");
        bool clamped = L.capacity() && budget >= *L.capacity();
        if (clamped || budget >= budget_cap)
            throw precision_error("cannot certify " + std::to_string(want) +
                                  " quotients within the coefficient budget");
        budget *= 2;
    }
}

Series series_from_cf(const Poly& a0, std::vector<Poly> preperiod, std::vector<Poly> period) {
    const PrimeField F = a0.field();
    for (const auto& lst : {preperiod, period})
        for (const Poly& a : lst) {
            if (!(a.field() == F)) throw config_error("series field mismatch");
            if (a.is_zero() || a.deg() < 1)
                throw config_error("partial quotient must have degree >= 1");
        }

    if (period.empty()) {
        // Finite CF: the value is the exact final convergent.
        ContinuedFraction cf(F, a0);
        for (Poly& a : preperiod) cf.push_quotient(std::move(a));
        auto [p, q] = cf.convergent(cf.certified_count());
        return Series::rational(p, q);
    }

    std::ostringstream label;
    label << "cf:";
    for (std::size_t i = 0; i < preperiod.size(); ++i)
        label << (i ? "," : "") << poly_to_string(preperiod[i]);
    if (!preperiod.empty()) label << "|";
    for (std::size_t i = 0; i < period.size(); ++i)
        label << (i ? "," : "") << poly_to_string(period[i]);
    label << "*";
    return make_periodic_cf_series(a0, std::move(preperiod), std::move(period), label.str());
}

int K_of(const Series& L, std::size_t H) {
    if (H == 0) throw config_error("K_of: need H >= 1");
    ContinuedFraction cf = cf_expand_at_least(L, H);
    int k = 0;
    for (std::size_t h = 0; h < H; ++h) k = std::max(k, cf.quotients()[h].deg());
    return k;
}

} // namespace kh
