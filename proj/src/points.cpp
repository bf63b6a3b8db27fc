#include "kh/points.hpp"

#include <algorithm>
#include <sstream>

namespace kh {

double DigitPoint::value(std::size_t dim) const {
    const auto& d = coords.at(dim);
    double v = 0.0;
    double scale = 1.0;
    for (res_t y : d) {
        scale /= double(F.p());
        v += double(y) * scale;
    }
    return v;
}

std::string DigitPoint::digit_string(std::size_t dim) const {
    const auto& d = coords.at(dim);
    std::ostringstream out;
    const bool wide = F.p() > 10;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (wide && i) out << '-';
        if (wide) out << d[i];
        else out << char('0' + d[i]);
    }
    return out.str();
}

std::uint64_t DigitPoint::scaled(std::size_t dim, int k) const {
    const auto& d = coords.at(dim);
    if (k < 0 || std::size_t(k) > d.size())
        throw precision_error("resolution " + std::to_string(k) +
                              " exceeds stored precision " + std::to_string(d.size()));
    std::uint64_t v = 0;
    for (int i = 0; i < k; ++i) {
        if (v > (UINT64_MAX - d[std::size_t(i)]) / F.p())
            throw precision_error("scaled digit value exceeds 64 bits");
        v = v * F.p() + d[std::size_t(i)];
    }
    return v;
}

namespace {

void validate_halton_bases(const std::vector<Poly>& bases, PrimeField F) {
    for (const Poly& b : bases) {
        if (!(b.field() == F)) throw config_error("halton base field mismatch");
        if (b.is_zero() || b.deg() < 1 || !b.is_monic())
            throw config_error("halton base must be monic of degree >= 1");
    }
    for (std::size_t i = 0; i < bases.size(); ++i)
        for (std::size_t j = i + 1; j < bases.size(); ++j) {
            Poly g = poly_gcd(bases[i], bases[j]);
            if (!g.is_one())
                throw config_error("halton bases must be pairwise coprime; " +
                                   poly_to_string(bases[i]) + " and " +
                                   poly_to_string(bases[j]) + " share " + poly_to_string(g));
        }
}

} // namespace

HaltonDigitGen::HaltonDigitGen(const Poly& base, int m)
    : F_(base.field()), base_(base) {
    if (base.is_zero() || base.deg() < 1 || !base.is_monic())
        throw config_error("halton base must be monic of degree >= 1");
    e_ = base.deg();
    mr_ = (m + e_ - 1) / e_ * e_;
}

void HaltonDigitGen::digits(std::uint64_t n, res_t* out) const {
    std::fill(out, out + mr_, res_t(0));
    // cur_ holds the remaining quotient, little endian, no trailing zeros.
    cur_.clear();
    while (n) {
        cur_.push_back(res_t(n % F_.p()));
        n /= F_.p();
    }
    const int blocks = mr_ / e_;
    for (int block = 0; block < blocks && !cur_.empty(); ++block) {
        // divmod cur_ by base_, remainder digits land in this block.
        const std::size_t db = std::size_t(e_);
        if (cur_.size() <= db) {
            for (std::size_t k = 0; k < cur_.size(); ++k)
                out[std::size_t(block * e_) + std::size_t(e_ - 1) - k] = cur_[k];
            cur_.clear();
            break;
        }
        next_.assign(cur_.size() - db, 0);
        for (std::size_t i = cur_.size(); i-- > db;) {
            res_t f = cur_[i]; // base is monic
            if (f == 0) continue;
            next_[i - db] = f;
            for (std::size_t j = 0; j <= db; ++j)
                cur_[i - db + j] = F_.sub(cur_[i - db + j], F_.mul(f, base_.coeff(j)));
        }
        for (std::size_t k = 0; k < db; ++k)
            out[std::size_t(block * e_) + std::size_t(e_ - 1) - k] = cur_[k];
        while (!next_.empty() && next_.back() == 0) next_.pop_back();
        std::swap(cur_, next_);
    }
    // A leftover quotient only feeds digits below the precision window;
    // truncation drops them.
}

DigitPoint halton_point(std::uint64_t n, const std::vector<Poly>& bases, int m) {
    if (bases.empty()) throw config_error("halton_point: no bases");
    const PrimeField F = bases[0].field();
    validate_halton_bases(bases, F);
    if (m < 1) throw config_error("precision must be >= 1");
    DigitPoint pt(F, m);
    for (const Poly& b : bases) {
        HaltonDigitGen gen(b, m);
        std::vector<res_t> d(std::size_t(gen.m_rounded()), 0);
        gen.digits(n, d.data());
        pt.coords.push_back(std::move(d));
    }
    return pt;
}

MatrixFp kronecker_matrix(const Series& L, int m) {
    if (m < 1) throw config_error("precision must be >= 1");
    return GeneratingMatrix::kronecker(L).truncate(std::size_t(m), std::size_t(m));
}

KronDigitGen::KronDigitGen(const Series& L, int m, std::uint64_t max_n, const Series* shift)
    : F_(L.field()), m_(m) {
    if (m < 1) throw config_error("precision must be >= 1");
    int nd = 1;
    std::uint64_t v = max_n;
    while (v >= F_.p()) { v /= F_.p(); ++nd; }
    Series f = frac_part(L);
    a_ = f.prefix(1, m + nd - 1);
    if (shift) {
        if (!(shift->field() == F_)) throw config_error("shift series field mismatch");
        shift_ = frac_part(*shift).prefix(1, m);
    }
}

void KronDigitGen::digits(std::uint64_t n, res_t* out) const {
    // digit j = sum_k n_k a_{j+k} (+ shift_j); n_k are the base-p digits of n.
    res_t nd[64];
    int len = 0;
    while (n) {
        nd[len++] = res_t(n % F_.p());
        n /= F_.p();
    }
    if (len > 0 && std::size_t(m_ + len - 1) > a_.size())
        throw precision_error("kronecker digit engine built for smaller indices");
    for (int j = 1; j <= m_; ++j) {
        std::uint64_t acc = shift_.empty() ? 0 : shift_[std::size_t(j - 1)];
        for (int k = 0; k < len; ++k)
            acc += std::uint64_t(nd[k]) * a_[std::size_t(j + k - 1)]; // a_{j+k}
        out[j - 1] = res_t(acc % F_.p());
    }
}

DigitPoint kronecker_point(std::uint64_t n, const Series& L, int m, const Series* shift) {
    KronDigitGen gen(L, m, n, shift);
    DigitPoint pt(L.field(), m);
    pt.coords.emplace_back(std::size_t(m), 0);
    gen.digits(n, pt.coords[0].data());
    return pt;
}

HybridSpec::HybridSpec(PrimeField field, std::vector<Series> kron_, std::vector<Poly> halton_,
                       int prec)
    : F(field), kron(std::move(kron_)), halton(std::move(halton_)), precision(prec) {
    if (kron.empty() && halton.empty())
        throw config_error("hybrid spec needs at least one coordinate");
    if (precision < 1) throw config_error("precision must be >= 1");
    for (const Series& L : kron)
        if (!(L.field() == F)) throw config_error("kronecker series field mismatch");
    validate_halton_bases(halton, F);
}

std::string HybridSpec::label() const {
    std::ostringstream out;
    bool first = true;
    for (const Series& L : kron) {
        if (!first) out << ';';
        out << "kronecker:" << L.label();
        first = false;
    }
    for (const Poly& b : halton) {
        if (!first) out << ';';
        out << "halton:" << poly_to_string(b);
        first = false;
    }
    return out.str();
}

int default_precision(PrimeField F, std::uint64_t N) {
    int lg = 0;
    std::uint64_t v = 1;
    while (v < N) {
        if (v > UINT64_MAX / F.p()) { ++lg; break; }
        v *= F.p();
        ++lg;
    }
    return lg + 20;
}

DigitPoint hybrid_point(std::uint64_t n, const HybridSpec& spec) {
    auto block = hybrid_block(spec, n, n + 1);
    return std::move(block[0]);
}

std::vector<DigitPoint> hybrid_block(const HybridSpec& spec, std::uint64_t n_begin,
                                     std::uint64_t n_end) {
    std::vector<DigitPoint> out;
    if (n_end <= n_begin) return out;
    const std::uint64_t max_n = n_end - 1;
    std::vector<KronDigitGen> kgens;
    for (std::size_t i = 0; i < spec.kron.size(); ++i)
        kgens.emplace_back(spec.kron[i], spec.precision, max_n,
                           i < spec.shifts.size() ? &spec.shifts[i] : nullptr);
    std::vector<HaltonDigitGen> hgens;
    for (const Poly& b : spec.halton) hgens.emplace_back(b, spec.precision);

    out.reserve(std::size_t(n_end - n_begin));
    for (std::uint64_t n = n_begin; n < n_end; ++n) {
        DigitPoint pt(spec.F, spec.precision);
        pt.coords.reserve(spec.dims());
        for (const auto& g : kgens) {
            std::vector<res_t> d(std::size_t(g.m()), 0);
            g.digits(n, d.data());
            pt.coords.push_back(std::move(d));
        }
        for (const auto& g : hgens) {
            std::vector<res_t> d(std::size_t(g.m_rounded()), 0);
            g.digits(n, d.data());
            pt.coords.push_back(std::move(d));
        }
        out.push_back(std::move(pt));
    }
    return out;
}

ResidueBlock residue_block_indices(std::uint64_t K, int u, const Poly& B, const Poly& R) {
    const PrimeField F = B.field();
    if (!(R.field() == F)) throw config_error("residue field mismatch");
    if (B.is_zero() || !B.is_monic())
        throw config_error("residue modulus must be monic");
    const int e = B.deg();
    if (!R.is_zero() && R.deg() >= e)
        throw config_error("residue degree must be below the modulus degree");
    if (u < 0) throw config_error("block exponent u must be >= 0");

    // p^{u+e} and the block bounds, overflow checked.
    std::uint64_t pue = 1;
    for (int i = 0; i < u + e; ++i) {
        if (pue > UINT64_MAX / F.p()) throw config_error("block exceeds 64-bit indices");
        pue *= F.p();
    }
    if (K > 0 && pue > UINT64_MAX / K) throw config_error("block exceeds 64-bit indices");
    const std::uint64_t base = K * pue;
    if (base > UINT64_MAX - (pue - 1)) throw config_error("block exceeds 64-bit indices");

    // Solutions are base + value(v B + R'') with R'' = (R - base(X)) mod B and
    // v over all polynomials of degree < u.
    Poly base_poly = int_to_poly(base, F);
    Poly rr = poly_divmod(R - base_poly, B).second;
    std::uint64_t pu = 1;
    for (int i = 0; i < u; ++i) pu *= F.p();

    ResidueBlock out{std::vector<std::uint64_t>(), Poly(F)};
    out.indices.reserve(pu);
    bool have_c = false;
    for (std::uint64_t vi = 0; vi < pu; ++vi) {
        Poly v = int_to_poly(vi, F);
        Poly m = v * B + rr;
        std::uint64_t n = base + poly_eval_int(m, F.p());
        // Cross-check the decomposition n(X) = k(X) B + R, k = r + X^u C.
        Poly n_poly = int_to_poly(n, F);
        auto [k, rem] = poly_divmod(n_poly - R, B);
        if (!rem.is_zero()) throw error("internal: residue block congruence failed");
        auto [c, r_low] = poly_divmod(k, Poly::one(F).shifted(u));
        if (!have_c) {
            out.C = c;
            have_c = true;
        } else if (!(c == out.C)) {
            throw error("internal: residue block C(X) is not constant");
        }
        (void)r_low;
        out.indices.push_back(n);
    }
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

} // namespace kh
