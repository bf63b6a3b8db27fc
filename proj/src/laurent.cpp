#include "kh/laurent.hpp"

#include <algorithm>
#include <mutex>

#include "kh/contfrac.hpp"
#include "kh/util.hpp"

namespace kh {

namespace detail {

// Coefficient oracle with an append-only memo.  append_next() runs under the
// lock and must push the coefficient at index base + memo.size().
class SeriesImpl {
public:
    SeriesImpl(PrimeField F, long base, std::optional<long> cap, bool zero, std::string label)
        : F_(F), base_(base), cap_(cap), zero_(zero), label_(std::move(label)) {}
    virtual ~SeriesImpl() = default;

    PrimeField field() const { return F_; }
    long base() const { return base_; }
    std::optional<long> cap() const { return cap_; }
    bool zero() const { return zero_; }
    const std::string& label() const { return label_; }

    res_t coeff(long i) const {
        if (zero_ || i < base_) return 0;
        if (cap_ && i > *cap_)
            throw precision_error("series '" + label_ + "': coefficient index " +
                                  std::to_string(i) + " beyond stored precision");
        std::lock_guard<std::mutex> lk(mu_);
        while (base_ + long(memo_.size()) <= i) append_next();
        return memo_[std::size_t(i - base_)];
    }

protected:
    virtual void append_next() const = 0;
    long next_index() const { return base_ + long(memo_.size()); }
    // Proper-part coefficient already memoized (index >= 1 only).
    res_t proper(long i) const { return i >= 1 ? memo_[std::size_t(i - base_)] : 0; }

    PrimeField F_;
    long base_;
    std::optional<long> cap_;
    bool zero_;
    std::string label_;
    mutable std::mutex mu_;
    mutable std::vector<res_t> memo_;
};

namespace {

// Expansion of P/Q at infinity.  Indices <= 0 read the polynomial part
// S = P div Q; for i >= 1 the proper part T/Q = sum a_i X^{-i} satisfies
//   a_i = lead(Q)^{-1} (t_{dq-i} - sum_{j=1}^{min(i-1,dq)} q_{dq-j} a_{i-j}).
class RationalImpl final : public SeriesImpl {
public:
    RationalImpl(Poly P, Poly Q, std::string label)
        : SeriesImpl(P.field(),
                     1, // adjusted below
                     std::nullopt, P.is_zero(), std::move(label)),
          pq_(std::move(P), std::move(Q)) {
        auto [s, t] = poly_divmod(pq_.first, pq_.second);
        S_ = std::move(s);
        T_ = std::move(t);
        dq_ = pq_.second.deg();
        lead_inv_ = F_.inv(pq_.second.leading());
        if (!S_.is_zero()) base_ = -S_.deg();
    }

    const std::pair<Poly, Poly>& pq() const { return pq_; }

private:
    void append_next() const override {
        long i = next_index();
        if (i <= 0) {
            memo_.push_back(S_.coeff(std::size_t(-i)));
            return;
        }
        res_t s = 0;
        long jmax = std::min<long>(i - 1, dq_);
        for (long j = 1; j <= jmax; ++j)
            s = F_.add(s, F_.mul(pq_.second.coeff(std::size_t(dq_ - j)), proper(i - j)));
        res_t t = (i <= dq_) ? T_.coeff(std::size_t(dq_ - i)) : 0;
        memo_.push_back(F_.mul(lead_inv_, F_.sub(t, s)));
    }

    std::pair<Poly, Poly> pq_;
    Poly S_, T_;
    long dq_;
    res_t lead_inv_;
};

class TruncatedImpl final : public SeriesImpl {
public:
    TruncatedImpl(PrimeField F, long first, std::vector<res_t> coeffs, std::string label)
        : SeriesImpl(F, first, first + long(coeffs.size()) - 1, false, std::move(label)) {
        for (res_t& v : coeffs)
            if (v >= F.p()) v = F.reduce(v);
        memo_ = std::move(coeffs);
    }

private:
    void append_next() const override {
        throw precision_error("truncated series exhausted");
    }
};

class Gap2Impl final : public SeriesImpl {
public:
    Gap2Impl() : SeriesImpl(PrimeField(2), 1, std::nullopt, false, "gap2") {}

private:
    void append_next() const override {
        long i = next_index();
        long v = i + 2; // support at i = 3*2^(n-1) - 2
        bool on = v % 3 == 0 && ((v / 3) & (v / 3 - 1)) == 0;
        memo_.push_back(on ? 1 : 0);
    }
};

class HaarImpl final : public SeriesImpl {
public:
    HaarImpl(PrimeField F, std::uint64_t seed)
        : SeriesImpl(F, 1, std::nullopt, false, "random:" + std::to_string(seed)),
          seed_(seed) {}

private:
    void append_next() const override {
        long i = next_index();
        memo_.push_back(uniform_residue(seed_, std::uint64_t(i), F_.p()));
    }

    std::uint64_t seed_;
};

// Value of an eventually periodic continued fraction.  Coefficients come from
// the current convergent P_h/Q_h, valid through index
// deg(Q_h) + deg(Q_{h+1}) - 1; quotients are consumed as accuracy demands.
class PeriodicCfImpl final : public SeriesImpl {
public:
    PeriodicCfImpl(Poly a0, std::vector<Poly> pre, std::vector<Poly> per, std::string label)
        : SeriesImpl(a0.field(), a0.is_zero() ? 1 : -a0.deg(), std::nullopt, false,
                     std::move(label)),
          a0_(std::move(a0)), pre_(std::move(pre)), per_(std::move(per)),
          pprev_(Poly::one(F_)), pcur_(Poly(F_)),
          qprev_(Poly(F_)), qcur_(Poly::one(F_)),
          tcur_(Poly(F_)) {}

private:
    const Poly& quot(std::size_t t) const { // partial quotient A_t, t >= 1
        if (t <= pre_.size()) return pre_[t - 1];
        return per_[(t - 1 - pre_.size()) % per_.size()];
    }

    void advance() const { // consume A_{h+1}
        const Poly& a = quot(h_ + 1);
        Poly pn = a * pcur_ + pprev_;
        Poly qn = a * qcur_ + qprev_;
        pprev_ = std::move(pcur_); pcur_ = std::move(pn);
        qprev_ = std::move(qcur_); qcur_ = std::move(qn);
        ++h_;
        tcur_ = poly_divmod(pcur_, qcur_).second;
        dq_ = qcur_.deg();
        lead_inv_ = F_.inv(qcur_.leading());
    }

    void append_next() const override {
        long i = next_index();
        if (i <= 0) {
            memo_.push_back(a0_.coeff(std::size_t(-i)));
            return;
        }
        while (2 * dq_ + quot(h_ + 1).deg() <= i) advance();
        res_t s = 0;
        long jmax = std::min<long>(i - 1, dq_);
        for (long j = 1; j <= jmax; ++j)
            s = F_.add(s, F_.mul(qcur_.coeff(std::size_t(dq_ - j)), proper(i - j)));
        res_t t = (i <= dq_) ? tcur_.coeff(std::size_t(dq_ - i)) : 0;
        memo_.push_back(F_.mul(lead_inv_, F_.sub(t, s)));
    }

    Poly a0_;
    std::vector<Poly> pre_, per_;
    mutable std::size_t h_ = 0;
    mutable Poly pprev_, pcur_, qprev_, qcur_, tcur_;
    mutable long dq_ = 0;
    mutable res_t lead_inv_ = 1;
};

class ProductImpl final : public SeriesImpl {
public:
    ProductImpl(Poly B, std::shared_ptr<const SeriesImpl> inner)
        : SeriesImpl(inner->field(), inner->base() - B.deg(),
                     inner->cap() ? std::optional<long>(*inner->cap() - B.deg()) : std::nullopt,
                     false, "(" + poly_to_string(B) + ")*(" + inner->label() + ")"),
          B_(std::move(B)), inner_(std::move(inner)) {}

private:
    void append_next() const override {
        long i = next_index();
        res_t s = 0;
        for (int k = 0; k <= B_.deg(); ++k) {
            res_t b = B_.coeff(std::size_t(k));
            if (b) s = F_.add(s, F_.mul(b, inner_->coeff(i + k)));
        }
        memo_.push_back(s);
    }

    Poly B_;
    std::shared_ptr<const SeriesImpl> inner_;
};

class SumImpl final : public SeriesImpl {
public:
    SumImpl(std::shared_ptr<const SeriesImpl> a, std::shared_ptr<const SeriesImpl> b)
        : SeriesImpl(a->field(), std::min(a->base(), b->base()), min_cap(a->cap(), b->cap()),
                     false, "(" + a->label() + ")+(" + b->label() + ")"),
          a_(std::move(a)), b_(std::move(b)) {}

private:
    static std::optional<long> min_cap(std::optional<long> x, std::optional<long> y) {
        if (!x) return y;
        if (!y) return x;
        return std::min(*x, *y);
    }

    void append_next() const override {
        long i = next_index();
        memo_.push_back(F_.add(a_->coeff(i), b_->coeff(i)));
    }

    std::shared_ptr<const SeriesImpl> a_, b_;
};

class FracImpl final : public SeriesImpl {
public:
    explicit FracImpl(std::shared_ptr<const SeriesImpl> inner)
        : SeriesImpl(inner->field(), 1, inner->cap(), false, "frac(" + inner->label() + ")"),
          inner_(std::move(inner)) {}

private:
    void append_next() const override {
        memo_.push_back(inner_->coeff(next_index()));
    }

    std::shared_ptr<const SeriesImpl> inner_;
};

} // namespace

} // namespace detail

using detail::SeriesImpl;

Series Series::rational(const Poly& P, const Poly& Q) {
    if (!(P.field() == Q.field())) throw config_error("series field mismatch");
    if (Q.is_zero()) throw config_error("rational series with zero denominator");
    std::string label = "rational:" + poly_to_string(P) + "/" + poly_to_string(Q);
    return Series(std::make_shared<detail::RationalImpl>(P, Q, std::move(label)));
}

Series Series::truncated(PrimeField F, long first_index, std::vector<res_t> coeffs) {
    std::string label = "trunc:" + std::to_string(first_index) + ":" +
                        std::to_string(coeffs.size());
    return Series(std::make_shared<detail::TruncatedImpl>(F, first_index, std::move(coeffs),
                                                          std::move(label)));
}

Series Series::gap2() { return Series(std::make_shared<detail::Gap2Impl>()); }

Series Series::haar(PrimeField F, std::uint64_t seed, long prewarm) {
    Series s(std::make_shared<detail::HaarImpl>(F, seed));
    if (prewarm > 0) s.coeff(prewarm);
    return s;
}

PrimeField Series::field() const { return impl_->field(); }
res_t Series::coeff(long i) const { return impl_->coeff(i); }

std::vector<res_t> Series::prefix(long lo, long hi) const {
    std::vector<res_t> out;
    if (hi < lo) return out;
    out.reserve(std::size_t(hi - lo + 1));
    for (long i = lo; i <= hi; ++i) out.push_back(impl_->coeff(i));
    return out;
}

bool Series::is_zero() const { return impl_->zero(); }
long Series::first_index() const { return impl_->base(); }
std::optional<long> Series::capacity() const { return impl_->cap(); }

std::optional<long> Series::first_nonzero(long scan_limit) const {
    if (is_zero()) return std::nullopt;
    long hi = scan_limit;
    if (auto c = capacity()) hi = std::min(hi, *c);
    for (long i = first_index(); i <= hi; ++i)
        if (impl_->coeff(i) != 0) return i;
    return std::nullopt;
}

const std::pair<Poly, Poly>* Series::rational_form() const {
    if (auto* r = dynamic_cast<const detail::RationalImpl*>(impl_.get())) return &r->pq();
    return nullptr;
}

const std::string& Series::label() const { return impl_->label(); }

Series frac_part(const Series& L) {
    if (L.impl_->zero() || L.impl_->base() >= 1) return L;
    if (auto* pq = L.rational_form()) {
        Poly rem = poly_divmod(pq->first, pq->second).second;
        return Series::rational(rem, pq->second);
    }
    return Series(std::make_shared<detail::FracImpl>(L.impl_));
}

Series poly_times_series(const Poly& B, const Series& L) {
    if (!(B.field() == L.field())) throw config_error("series field mismatch");
    if (B.is_zero()) return Series::rational(Poly(B.field()), Poly::one(B.field()));
    if (L.impl_->zero()) return L;
    if (B.is_one()) return L;
    if (auto* pq = L.rational_form()) return Series::rational(B * pq->first, pq->second);
    return Series(std::make_shared<detail::ProductImpl>(B, L.impl_));
}

Series series_add(const Series& a, const Series& b) {
    if (!(a.field() == b.field())) throw config_error("series field mismatch");
    if (a.impl_->zero()) return b;
    if (b.impl_->zero()) return a;
    const auto* ra = a.rational_form();
    const auto* rb = b.rational_form();
    if (ra && rb)
        return Series::rational(ra->first * rb->second + rb->first * ra->second,
                                ra->second * rb->second);
    return Series(std::make_shared<detail::SumImpl>(a.impl_, b.impl_));
}

Series sample_haar(PrimeField F, long M, std::uint64_t seed) {
    return Series::haar(F, seed, M);
}

namespace {

std::vector<Poly> parse_quotient_list(PrimeField F, const std::string& body) {
    std::vector<Poly> out;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t comma = body.find(',', pos);
        std::string piece = body.substr(pos, comma == std::string::npos ? comma : comma - pos);
        out.push_back(parse_poly(F, piece));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

} // namespace

Series parse_series(PrimeField F, const std::string& text) {
    if (text == "gap2") {
        if (F.p() != 2) throw config_error("series 'gap2' is defined over F_2");
        return Series::gap2();
    }
    if (text.rfind("random:", 0) == 0) {
        std::uint64_t seed = 0;
        const std::string body = text.substr(7);
        if (body.empty()) throw config_error("random: needs a seed");
        for (char ch : body) {
            if (ch < '0' || ch > '9') throw config_error("bad seed in '" + text + "'");
            seed = seed * 10 + std::uint64_t(ch - '0');
        }
        return Series::haar(F, seed);
    }
    if (text.rfind("rational:", 0) == 0) {
        const std::string body = text.substr(9);
        std::size_t slash = body.find('/');
        if (slash == std::string::npos)
            throw config_error("rational: needs the form <P>/<Q>");
        Poly P = parse_poly(F, body.substr(0, slash));
        Poly Q = parse_poly(F, body.substr(slash + 1));
        if (Q.is_zero()) throw config_error("rational series with zero denominator");
        return Series::rational(P, Q);
    }
    if (text.rfind("cf:", 0) == 0) {
        std::string body = text.substr(3);
        bool periodic = !body.empty() && body.back() == '*';
        if (periodic) body.pop_back();
        if (body.empty()) throw config_error("cf: needs at least one quotient");
        std::vector<Poly> pre, per;
        std::size_t bar = body.find('|');
        if (bar != std::string::npos) {
            if (!periodic) throw config_error("cf preperiod marker '|' requires a trailing '*'");
            pre = parse_quotient_list(F, body.substr(0, bar));
            per = parse_quotient_list(F, body.substr(bar + 1));
        } else if (periodic) {
            per = parse_quotient_list(F, body);
        } else {
            pre = parse_quotient_list(F, body);
        }
        return series_from_cf(Poly::zero(F), pre, per);
    }
    throw config_error("unknown series spec '" + text +
                       "' (expected rational:<P>/<Q>, cf:..., gap2, random:<seed>)");
}

Series make_periodic_cf_series(const Poly& a0, std::vector<Poly> pre, std::vector<Poly> per,
                               std::string label) {
    return Series(std::make_shared<detail::PeriodicCfImpl>(a0, std::move(pre), std::move(per),
                                                           std::move(label)));
}

namespace {
int threads_cap = 1;
}

int max_threads() { return threads_cap; }
void set_max_threads(int n) { threads_cap = n < 1 ? 1 : n; }

} // namespace kh
