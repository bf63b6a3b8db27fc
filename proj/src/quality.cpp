#include "kh/quality.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace kh {

namespace detail {

std::string i128_to_string(__int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? (unsigned __int128)(-v) : (unsigned __int128)v;
    char buf[48];
    int i = 48;
    while (u) {
        buf[--i] = char('0' + int(u % 10));
        u /= 10;
    }
    std::string s(buf + i, buf + 48);
    return neg ? "-" + s : s;
}

} // namespace detail

namespace {

__int128 ipow128(std::uint32_t p, int k) {
    __int128 v = 1;
    for (int i = 0; i < k; ++i) v = detail::checked_mul(v, p);
    return v;
}

std::uint64_t upow_checked(std::uint32_t p, int k, const char* what) {
    std::uint64_t v = 1;
    for (int i = 0; i < k; ++i) {
        if (v > UINT64_MAX / p) throw precision_error(std::string(what) + " exceeds 64 bits");
        v *= p;
    }
    return v;
}

std::string frac_str(std::uint64_t num, std::uint32_t p, int k) {
    if (k == 0) return std::to_string(num);
    return std::to_string(num) + "/" + detail::i128_to_string(ipow128(p, k));
}

} // namespace

Box::Box(PrimeField field, std::vector<Side> sides_) : F(field), sides(std::move(sides_)) {
    if (sides.empty()) throw config_error("box needs at least one side");
    for (const Side& s : sides) {
        if (s.lo_k < 0 || s.up_k < 0 || s.lo_k > 100 || s.up_k > 100)
            throw config_error("box resolution out of range");
        __int128 lo = detail::checked_mul(__int128(s.lo_num), ipow128(F.p(), s.up_k));
        __int128 up = detail::checked_mul(__int128(s.up_num), ipow128(F.p(), s.lo_k));
        if (lo >= up) throw config_error("box side is empty");
        if (__int128(s.up_num) > ipow128(F.p(), s.up_k))
            throw config_error("box extends beyond the unit cube");
    }
}

Box Box::elementary(PrimeField F, const std::vector<std::pair<int, std::uint64_t>>& cells) {
    std::vector<Side> sides;
    for (auto [d, a] : cells) {
        Side s;
        s.lo_num = a;
        s.lo_k = d;
        s.up_num = a + 1;
        s.up_k = d;
        sides.push_back(s);
    }
    return Box(F, std::move(sides));
}

bool Box::contains(const DigitPoint& pt) const {
    if (pt.coords.size() != sides.size())
        throw config_error("box/point dimension mismatch");
    for (std::size_t d = 0; d < sides.size(); ++d) {
        const Side& s = sides[d];
        // First k digits as an integer decide >= lo and < up exactly.
        std::uint64_t lo_scaled = pt.scaled(d, s.lo_k);
        if (lo_scaled < s.lo_num) return false;
        std::uint64_t up_scaled = pt.scaled(d, s.up_k);
        if (up_scaled > s.up_num) return false;
        if (up_scaled == s.up_num) {
            if (!s.up_closed) return false;
            const auto& digits = pt.coords[d];
            for (std::size_t i = std::size_t(s.up_k); i < digits.size(); ++i)
                if (digits[i] != 0) return false;
        }
    }
    return true;
}

Rat Box::volume() const {
    Rat v = Rat::integer(1);
    for (const Side& s : sides) {
        Rat up = Rat::of(__int128(s.up_num), ipow128(F.p(), s.up_k));
        Rat lo = Rat::of(__int128(s.lo_num), ipow128(F.p(), s.lo_k));
        v = v * (up - lo);
    }
    return v;
}

std::string Box::str() const {
    std::ostringstream out;
    for (std::size_t d = 0; d < sides.size(); ++d) {
        const Side& s = sides[d];
        if (d) out << "x";
        out << "[" << frac_str(s.lo_num, F.p(), s.lo_k) << ","
            << frac_str(s.up_num, F.p(), s.up_k) << (s.up_closed ? "]" : ")");
    }
    return out.str();
}

std::uint64_t count_in_box(std::span<const DigitPoint> pts, const Box& box) {
    std::uint64_t c = 0;
    for (const DigitPoint& pt : pts)
        if (box.contains(pt)) ++c;
    return c;
}

int rank_fp(MatrixFp m) {
    const PrimeField& F = m.F;
    int rank = 0;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.ncols && row < m.nrows; ++col) {
        std::size_t piv = row;
        while (piv < m.nrows && m.at(piv, col) == 0) ++piv;
        if (piv == m.nrows) continue;
        if (piv != row)
            for (std::size_t c = col; c < m.ncols; ++c)
                std::swap(m.at(piv, c), m.at(row, c));
        res_t inv = F.inv(m.at(row, col));
        for (std::size_t c = col; c < m.ncols; ++c) m.at(row, c) = F.mul(m.at(row, c), inv);
        for (std::size_t r = 0; r < m.nrows; ++r) {
            if (r == row) continue;
            res_t f = m.at(r, col);
            if (f == 0) continue;
            for (std::size_t c = col; c < m.ncols; ++c)
                m.at(r, c) = F.sub(m.at(r, c), F.mul(f, m.at(row, c)));
        }
        ++row;
        ++rank;
    }
    return rank;
}

namespace {

// All (d_1,...,d_s) >= 0 with sum = total.
void for_each_composition(int total, int s, std::vector<int>& d,
                          const std::function<void(const std::vector<int>&)>& fn) {
    if (int(d.size()) == s - 1) {
        d.push_back(total);
        fn(d);
        d.pop_back();
        return;
    }
    for (int v = 0; v <= total; ++v) {
        d.push_back(v);
        for_each_composition(total - v, s, d, fn);
        d.pop_back();
    }
}

bool stacked_full_rank(const std::vector<MatrixFp>& mats, const std::vector<int>& d, int cols) {
    int rows = 0;
    for (int di : d) rows += di;
    if (rows == 0) return true;
    MatrixFp stack(mats[0].F, std::size_t(rows), std::size_t(cols));
    std::size_t r = 0;
    for (std::size_t i = 0; i < mats.size(); ++i)
        for (int j = 0; j < d[i]; ++j, ++r)
            for (int c = 0; c < cols; ++c)
                stack.at(r, std::size_t(c)) = mats[i].at(std::size_t(j), std::size_t(c));
    return rank_fp(std::move(stack)) == rows;
}

} // namespace

int t_param(const std::vector<MatrixFp>& matrices, int m) {
    if (matrices.empty()) throw config_error("t_param: no matrices");
    if (int(matrices.size()) > 4 || m > 20 || m < 1)
        throw config_error("t_param is capped at s <= 4, 1 <= m <= 20");
    for (const MatrixFp& mat : matrices)
        if (mat.nrows < std::size_t(m) || mat.ncols < std::size_t(m))
            throw config_error("t_param: matrices must be at least m x m");
    const int s = int(matrices.size());
    for (int T = 0; T <= m; ++T) {
        bool ok = true;
        std::vector<int> d;
        for_each_composition(m - T, s, d, [&](const std::vector<int>& comp) {
            if (ok && !stacked_full_rank(matrices, comp, m)) ok = false;
        });
        if (ok) return T;
    }
    return m; // unreachable: T = m always passes (empty stack)
}

NetReport is_net(std::span<const DigitPoint> pts, int t, int m) {
    if (pts.empty()) throw config_error("is_net: empty point set");
    const PrimeField F = pts[0].F;
    const int s = int(pts[0].coords.size());
    if (t < 0 || t > m) throw config_error("is_net: need 0 <= t <= m");
    std::uint64_t pm = upow_checked(F.p(), m, "p^m");
    if (pts.size() != pm)
        throw config_error("is_net: cardinality mismatch, need p^m = " + std::to_string(pm) +
                           " points, got " + std::to_string(pts.size()));

    NetReport rep;
    rep.t = t;
    rep.m = m;
    rep.s = s;
    constexpr std::size_t kMaxViolations = 64;

    for (int j = 0; j <= m - t; ++j) {
        std::vector<int> d;
        for_each_composition(j, s, d, [&](const std::vector<int>& comp) {
            std::uint64_t cells = 1, expected = pts.size();
            for (int di : comp) {
                std::uint64_t pd = upow_checked(F.p(), di, "p^d");
                cells *= pd;
                expected /= pd;
            }
            std::unordered_map<std::uint64_t, std::uint64_t> counts;
            counts.reserve(cells * 2);
            for (const DigitPoint& pt : pts) {
                std::uint64_t key = 0;
                for (int dim = 0; dim < s; ++dim) {
                    std::uint64_t pd = upow_checked(F.p(), comp[std::size_t(dim)], "p^d");
                    key = key * pd + pt.scaled(std::size_t(dim), comp[std::size_t(dim)]);
                }
                ++counts[key];
            }
            bool fair = counts.size() == cells;
            if (fair)
                for (const auto& [key, cnt] : counts)
                    if (cnt != expected) { fair = false; break; }
            if (fair) return;
            for (std::uint64_t key = 0; key < cells; ++key) {
                auto it = counts.find(key);
                std::uint64_t observed = it == counts.end() ? 0 : it->second;
                if (observed == expected) continue;
                if (rep.violations.size() >= kMaxViolations) {
                    rep.violations_truncated = true;
                    break;
                }
                NetViolation v;
                v.d = comp;
                v.a.resize(std::size_t(s));
                std::uint64_t rest = key;
                for (int dim = s; dim-- > 0;) {
                    std::uint64_t pd = upow_checked(F.p(), comp[std::size_t(dim)], "p^d");
                    v.a[std::size_t(dim)] = rest % pd;
                    rest /= pd;
                }
                v.expected = expected;
                v.observed = observed;
                rep.violations.push_back(std::move(v));
            }
        });
    }
    rep.pass = rep.violations.empty() && !rep.violations_truncated;
    return rep;
}

std::vector<std::string> NetReport::to_lines(PrimeField F) const {
    std::vector<std::string> lines;
    std::ostringstream head;
    head << (pass ? "PASS" : "FAIL") << " t=" << t << " m=" << m << " s=" << s;
    lines.push_back(head.str());
    for (const NetViolation& v : violations) {
        std::ostringstream line;
        line << "interval=";
        for (std::size_t dim = 0; dim < v.d.size(); ++dim) {
            if (dim) line << "x";
            line << "[" << frac_str(v.a[dim], F.p(), v.d[dim]) << ","
                 << frac_str(v.a[dim] + 1, F.p(), v.d[dim]) << ")";
        }
        line << " expected=" << v.expected << " observed=" << v.observed;
        lines.push_back(line.str());
    }
    if (violations_truncated) lines.push_back("violations truncated");
    return lines;
}

Rat star_disc_1d(std::span<const DigitPoint> pts) {
    if (pts.empty()) throw config_error("star_disc_1d: empty point set");
    if (pts[0].coords.size() != 1) throw config_error("star_disc_1d: points must be 1-dimensional");
    const PrimeField F = pts[0].F;
    const std::uint64_t N = pts.size();

    std::vector<Rat> xs;
    xs.reserve(pts.size());
    for (const DigitPoint& pt : pts) {
        int len = int(pt.coords[0].size());
        xs.push_back(Rat::of(__int128(pt.scaled(0, len)), ipow128(F.p(), len)));
    }
    std::sort(xs.begin(), xs.end(), [](const Rat& a, const Rat& b) { return a < b; });

    Rat best = Rat::integer(0);
    for (std::uint64_t i = 1; i <= N; ++i) {
        const Rat& x = xs[std::size_t(i - 1)];
        Rat up = Rat::of(__int128(i), __int128(N)) - x;
        Rat dn = x - Rat::of(__int128(i - 1), __int128(N));
        if (best < up) best = up;
        if (best < dn) best = dn;
    }
    return best;
}

namespace {

struct CornerSweep {
    std::uint64_t N = 0;
    int s = 0;
    __int128 scale = 1; // product of P_d
    std::vector<std::vector<std::uint64_t>> vals; // [dim][point], master point order
    std::vector<std::vector<std::uint64_t>> grid; // [dim]: sorted unique values + P_d
    bool closed = false;
    __int128 best = 0;

    // subset: point indices, ordered by the last-dimension value.
    void run(const std::vector<std::uint32_t>& subset, int depth, __int128 gamma_prod) {
        if (depth == s - 1) {
            const auto& g = grid[std::size_t(depth)];
            const auto& v = vals[std::size_t(depth)];
            std::size_t ptr = 0;
            std::vector<std::uint32_t> sorted = subset; // already sorted by this dim
            for (std::uint64_t gamma : g) {
                while (ptr < sorted.size() &&
                       (closed ? v[sorted[ptr]] <= gamma : v[sorted[ptr]] < gamma))
                    ++ptr;
                __int128 vol_num = detail::checked_mul(gamma_prod, __int128(gamma));
                __int128 cand = closed
                    ? detail::checked_mul(__int128(ptr), scale) - detail::checked_mul(__int128(N), vol_num)
                    : detail::checked_mul(__int128(N), vol_num) - detail::checked_mul(__int128(ptr), scale);
                if (cand > best) best = cand;
            }
            return;
        }
        const auto& v = vals[std::size_t(depth)];
        std::vector<std::uint32_t> filtered;
        filtered.reserve(subset.size());
        for (std::uint64_t gamma : grid[std::size_t(depth)]) {
            filtered.clear();
            for (std::uint32_t idx : subset)
                if (closed ? v[idx] <= gamma : v[idx] < gamma) filtered.push_back(idx);
            run(filtered, depth + 1, detail::checked_mul(gamma_prod, __int128(gamma)));
        }
    }
};

} // namespace

Rat star_disc_exact(std::span<const DigitPoint> pts, std::size_t n_cap) {
    if (pts.empty()) throw config_error("star_disc_exact: empty point set");
    if (pts.size() > n_cap)
        throw precision_error("star_disc_exact: N=" + std::to_string(pts.size()) +
                              " exceeds the cap " + std::to_string(n_cap) +
                              "; use a sampled lower bound instead");
    const PrimeField F = pts[0].F;
    const int s = int(pts[0].coords.size());
    if (s < 1 || s > 3)
        throw config_error("star_disc_exact supports 1 to 3 dimensions");

    CornerSweep sweep;
    sweep.N = pts.size();
    sweep.s = s;
    sweep.vals.assign(std::size_t(s), {});
    sweep.grid.assign(std::size_t(s), {});

    __int128 scale = 1;
    const std::size_t sn = std::size_t(s);
    std::vector<std::uint64_t> P(sn);
    for (int d = 0; d < s; ++d) {
        std::size_t len = pts[0].coords[std::size_t(d)].size();
        for (const DigitPoint& pt : pts)
            if (pt.coords[std::size_t(d)].size() != len)
                throw config_error("star_disc_exact: mixed precisions in one dimension");
        P[std::size_t(d)] = upow_checked(F.p(), int(len), "p^precision");
        scale = detail::checked_mul(scale, __int128(P[std::size_t(d)]));
    }
    // All candidate numerators live below N * prod P_d; keep that within
    // 2^120 so the int128 products cannot overflow.
    {
        __int128 total = detail::checked_mul(scale, __int128(sweep.N));
        if (total > (__int128(1) << 120))
            throw precision_error("star_disc_exact: N * p^(sum precisions) exceeds 2^120");
    }
    sweep.scale = scale;

    // Points in master order sorted by the last dimension.
    std::vector<std::uint32_t> order(pts.size());
    for (std::uint32_t i = 0; i < pts.size(); ++i) order[i] = i;
    std::vector<std::vector<std::uint64_t>> raw(std::size_t(s),
                                                std::vector<std::uint64_t>(pts.size()));
    for (int d = 0; d < s; ++d)
        for (std::size_t i = 0; i < pts.size(); ++i)
            raw[std::size_t(d)][i] =
                pts[i].scaled(std::size_t(d), int(pts[i].coords[std::size_t(d)].size()));
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return raw[std::size_t(s - 1)][a] < raw[std::size_t(s - 1)][b];
    });
    for (int d = 0; d < s; ++d) {
        auto& v = sweep.vals[std::size_t(d)];
        v.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) v[i] = raw[std::size_t(d)][order[i]];
        std::vector<std::uint64_t> g = raw[std::size_t(d)];
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        g.push_back(P[std::size_t(d)]);
        sweep.grid[std::size_t(d)] = std::move(g);
    }

    std::vector<std::uint32_t> all(pts.size());
    for (std::uint32_t i = 0; i < pts.size(); ++i) all[i] = i;

    __int128 best = 0;
    sweep.closed = false;
    sweep.best = 0;
    sweep.run(all, 0, 1);
    best = sweep.best;
    sweep.closed = true;
    sweep.best = 0;
    sweep.run(all, 0, 1);
    if (sweep.best > best) best = sweep.best;

    __int128 den = detail::checked_mul(scale, __int128(sweep.N));
    return Rat::of(best, den);
}

Rat extreme_disc_lower_bound(std::span<const DigitPoint> pts, const Box& box) {
    if (pts.empty()) throw config_error("extreme_disc_lower_bound: empty point set");
    std::uint64_t a = count_in_box(pts, box);
    Rat freq = Rat::of(__int128(a), __int128(pts.size()));
    return (freq - box.volume()).abs();
}

} // namespace kh
