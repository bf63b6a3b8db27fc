#include "kh/poly.hpp"

#include <cctype>
#include <sstream>

namespace kh {

Poly Poly::operator+(const Poly& o) const {
    check_field(o);
    std::vector<res_t> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = F_.add(coeff(i), o.coeff(i));
    return Poly(F_, std::move(r));
}

Poly Poly::operator-(const Poly& o) const {
    check_field(o);
    std::vector<res_t> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = F_.sub(coeff(i), o.coeff(i));
    return Poly(F_, std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
    check_field(o);
    if (is_zero() || o.is_zero()) return Poly(F_);
    std::vector<res_t> r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            r[i + j] = F_.add(r[i + j], F_.mul(c_[i], o.c_[j]));
    }
    return Poly(F_, std::move(r));
}

Poly Poly::scaled(res_t k) const {
    std::vector<res_t> r(c_);
    for (res_t& v : r) v = F_.mul(v, k);
    return Poly(F_, std::move(r));
}

Poly Poly::shifted(int k) const {
    if (k < 0) throw config_error("negative shift");
    if (is_zero()) return *this;
    std::vector<res_t> r(c_.size() + std::size_t(k), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i + std::size_t(k)] = c_[i];
    return Poly(F_, std::move(r));
}

Poly Poly::monic() const {
    if (is_zero()) throw config_error("monic normalization of zero");
    return scaled(F_.inv(leading()));
}

Poly int_to_poly(std::uint64_t n, PrimeField F) {
    std::vector<res_t> c;
    while (n) {
        c.push_back(static_cast<res_t>(n % F.p()));
        n /= F.p();
    }
    return Poly(F, std::move(c));
}

std::uint64_t poly_eval_int(const Poly& a, std::uint64_t at) {
    unsigned __int128 acc = 0;
    const auto& c = a.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) {
        acc = acc * at + c[i];
        if (acc > (unsigned __int128)UINT64_MAX)
            throw config_error("poly_eval_int: value exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
    if (!(a.field() == b.field())) throw config_error("polynomial field mismatch");
    if (b.is_zero()) throw config_error("polynomial division by zero");
    const PrimeField& F = a.field();
    if (a.is_zero() || a.deg() < b.deg()) return {Poly(F), a};

    std::vector<res_t> rem(a.coeffs());
    const int db = b.deg();
    std::vector<res_t> q(rem.size() - std::size_t(db), 0);
    const res_t lead_inv = F.inv(b.leading());
    for (int i = int(rem.size()) - 1; i >= db; --i) {
        res_t f = F.mul(rem[std::size_t(i)], lead_inv);
        if (f == 0) continue;
        q[std::size_t(i - db)] = f;
        for (int j = 0; j <= db; ++j)
            rem[std::size_t(i - db + j)] = F.sub(rem[std::size_t(i - db + j)], F.mul(f, b.coeff(std::size_t(j))));
    }
    return {Poly(F, std::move(q)), Poly(F, std::move(rem))};
}

Poly poly_gcd(Poly a, Poly b) {
    if (!(a.field() == b.field())) throw config_error("polynomial field mismatch");
    if (a.is_zero() && b.is_zero()) throw config_error("gcd(0, 0) is undefined");
    while (!b.is_zero()) {
        Poly r = poly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

XgcdResult poly_xgcd(const Poly& a, const Poly& b) {
    if (!(a.field() == b.field())) throw config_error("polynomial field mismatch");
    if (a.is_zero() && b.is_zero()) throw config_error("gcd(0, 0) is undefined");
    const PrimeField& F = a.field();
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::one(F), s1 = Poly(F);
    Poly t0 = Poly(F), t1 = Poly::one(F);
    while (!r1.is_zero()) {
        auto [q, r2] = poly_divmod(r0, r1);
        Poly s2 = s0 - q * s1;
        Poly t2 = t0 - q * t1;
        r0 = std::move(r1); r1 = std::move(r2);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    res_t u = F.inv(r0.leading());
    return {r0.scaled(u), s0.scaled(u), t0.scaled(u)};
}

std::vector<Poly> base_digits(const Poly& n, const Poly& b) {
    if (!(n.field() == b.field())) throw config_error("polynomial field mismatch");
    if (b.is_zero() || b.deg() < 1 || !b.is_monic())
        throw config_error("digit base must be monic of degree >= 1");
    std::vector<Poly> digits;
    Poly rest = n;
    while (!rest.is_zero()) {
        auto [q, r] = poly_divmod(rest, b);
        digits.push_back(std::move(r));
        rest = std::move(q);
    }
    return digits;
}

namespace {

Poly parse_coeff_list(PrimeField F, const std::string& text) {
    std::vector<res_t> c;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        std::size_t b = item.find_first_not_of(" \t");
        std::size_t e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw config_error("empty coefficient in list: '" + text + "'");
        item = item.substr(b, e - b + 1);
        std::uint64_t v = 0;
        for (char ch : item) {
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                throw config_error("bad coefficient '" + item + "'");
            v = v * 10 + std::uint64_t(ch - '0');
            if (v > (1ull << 40)) throw config_error("coefficient too large: '" + item + "'");
        }
        c.push_back(F.reduce(v));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return Poly(F, std::move(c));
}

// One symbolic term: [coeff][*][X[^exp]].  Returns (exp, coeff).
std::pair<int, res_t> parse_term(PrimeField F, const std::string& t) {
    std::size_t i = 0;
    std::uint64_t coeff = 1;
    bool saw_num = false;
    if (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
        coeff = 0;
        saw_num = true;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
            coeff = coeff * 10 + std::uint64_t(t[i] - '0');
            if (coeff > (1ull << 40)) throw config_error("coefficient too large in '" + t + "'");
            ++i;
        }
    }
    if (i < t.size() && t[i] == '*') ++i;
    if (i == t.size()) {
        if (!saw_num) throw config_error("empty term");
        return {0, F.reduce(coeff)};
    }
    if (t[i] != 'x' && t[i] != 'X') throw config_error("bad term '" + t + "'");
    ++i;
    int exp = 1;
    if (i < t.size()) {
        if (t[i] != '^') throw config_error("bad term '" + t + "'");
        ++i;
        if (i == t.size()) throw config_error("missing exponent in '" + t + "'");
        exp = 0;
        while (i < t.size()) {
            if (!std::isdigit(static_cast<unsigned char>(t[i])))
                throw config_error("bad exponent in '" + t + "'");
            exp = exp * 10 + (t[i] - '0');
            if (exp > 4096) throw config_error("exponent too large in '" + t + "'");
            ++i;
        }
    }
    return {exp, F.reduce(coeff)};
}

Poly parse_symbolic(PrimeField F, const std::string& text) {
    std::vector<res_t> c;
    std::string term;
    bool negate = false;
    bool any = false;
    auto flush = [&](bool next_negate) {
        if (term.empty()) {
            if (any || negate) throw config_error("dangling sign in '" + text + "'");
        } else {
            auto [exp, coeff] = parse_term(F, term);
            if (negate) coeff = F.neg(coeff);
            if (c.size() <= std::size_t(exp)) c.resize(std::size_t(exp) + 1, 0);
            c[std::size_t(exp)] = F.add(c[std::size_t(exp)], coeff);
            any = true;
            term.clear();
        }
        negate = next_negate;
    };
    for (char ch : text) {
        if (ch == ' ' || ch == '\t') continue;
        if (ch == '+') flush(false);
        else if (ch == '-') flush(true);
        else term.push_back(ch);
    }
    flush(false);
    if (!any) throw config_error("empty polynomial text");
    return Poly(F, std::move(c));
}

} // namespace

Poly parse_poly(PrimeField F, const std::string& text) {
    std::size_t b = text.find_first_not_of(" \t");
    if (b == std::string::npos) throw config_error("empty polynomial text");
    std::size_t e = text.find_last_not_of(" \t");
    std::string body = text.substr(b, e - b + 1);
    if (body.find(',') != std::string::npos) return parse_coeff_list(F, body);
    return parse_symbolic(F, body);
}

std::string poly_to_string(const Poly& a) {
    if (a.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = a.deg(); i >= 0; --i) {
        res_t v = a.coeff(std::size_t(i));
        if (v == 0) continue;
        if (!first) out << '+';
        first = false;
        if (i == 0) {
            out << v;
        } else {
            if (v != 1) out << v;
            out << 'X';
            if (i > 1) out << '^' << i;
        }
    }
    return out.str();
}

} // namespace kh
