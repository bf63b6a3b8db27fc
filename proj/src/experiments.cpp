#include "kh/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "kh/util.hpp"

namespace kh {

namespace {

std::uint64_t upow64(std::uint32_t p, int k, const char* what) {
    std::uint64_t v = 1;
    for (int i = 0; i < k; ++i) {
        if (v > UINT64_MAX / p) throw precision_error(std::string(what) + " exceeds 64 bits");
        v *= p;
    }
    return v;
}

__int128 ipow128(std::uint32_t p, int k) {
    __int128 v = 1;
    for (int i = 0; i < k; ++i) v = detail::checked_mul(v, p);
    return v;
}

Poly power(const Poly& b, int k) {
    Poly r = Poly::one(b.field());
    for (int i = 0; i < k; ++i) r = r * b;
    return r;
}

std::string vec_str(const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

// Stacked first-d_i rows of the Hankel matrices of {B L_i}, u columns:
// full row rank sum(d) certifies fair counting at resolutions d.
bool fair_rank_ok(const HybridSpec& spec, const Poly& B, const std::vector<int>& d, int u) {
    int sum_d = 0;
    for (int di : d) sum_d += di;
    if (sum_d > u) return false;
    if (sum_d == 0) return true;
    MatrixFp stack(spec.F, std::size_t(sum_d), std::size_t(u));
    std::size_t r = 0;
    for (std::size_t i = 0; i < spec.kron.size(); ++i) {
        if (d[i] == 0) continue;
        MatrixFp block =
            GeneratingMatrix::kronecker(poly_times_series(B, spec.kron[i])).truncate(d[i], u);
        for (int j = 0; j < d[i]; ++j, ++r)
            for (int c = 0; c < u; ++c)
                stack.at(r, std::size_t(c)) = block.at(std::size_t(j), std::size_t(c));
    }
    return rank_fp(std::move(stack)) == sum_d;
}

Poly halton_modulus(const HybridSpec& spec, const std::vector<int>& l) {
    Poly B = Poly::one(spec.F);
    for (std::size_t j = 0; j < spec.halton.size(); ++j) B = B * power(spec.halton[j], l[j]);
    return B;
}

} // namespace

FairCount thm1_fair_count(const HybridSpec& spec,
                          const std::vector<std::pair<int, std::uint64_t>>& kron_cells,
                          const std::vector<std::pair<int, std::uint64_t>>& halton_cells,
                          int u, std::uint64_t K) {
    const PrimeField F = spec.F;
    if (kron_cells.size() != spec.kron.size() || halton_cells.size() != spec.halton.size())
        throw config_error("fair_count: cell list does not match the hybrid spec");
    if (u < 0) throw config_error("fair_count: u must be >= 0");

    std::vector<int> d, l;
    std::vector<std::pair<int, std::uint64_t>> cells;
    int sum_d = 0;
    for (auto [di, ai] : kron_cells) {
        if (di < 0 || di > spec.precision)
            throw config_error("fair_count: resolution d out of range");
        if (ai >= upow64(F.p(), di, "p^d")) throw config_error("fair_count: anchor out of range");
        d.push_back(di);
        sum_d += di;
        cells.emplace_back(di, ai);
    }
    int deg_b = 0;
    for (std::size_t j = 0; j < halton_cells.size(); ++j) {
        auto [lj, cj] = halton_cells[j];
        int ej = spec.halton[j].deg();
        if (lj < 0 || ej * lj > spec.precision)
            throw config_error("fair_count: resolution l out of range");
        if (cj >= upow64(F.p(), ej * lj, "p^(el)"))
            throw config_error("fair_count: anchor out of range");
        l.push_back(lj);
        deg_b += ej * lj;
        cells.emplace_back(ej * lj, cj);
    }

    Poly B = halton_modulus(spec, l);
    if (!fair_rank_ok(spec, B, d, u))
        throw config_error("fair_count: rank condition not verified for u=" + std::to_string(u));

    std::uint64_t block = upow64(F.p(), u + deg_b, "block length");
    if (K > 0 && block > UINT64_MAX / (K + 1)) throw config_error("fair_count: block beyond 64 bits");
    std::uint64_t lo = K * block, hi = (K + 1) * block;

    FairCount out;
    out.u = u;
    out.K = K;
    out.expected = upow64(F.p(), u - sum_d, "expected count");
    if (cells.empty()) {
        out.observed = block;
        return out;
    }
    Box box = Box::elementary(F, cells);
    std::uint64_t count = 0;
    const std::uint64_t chunk = 1 << 14;
    for (std::uint64_t b = lo; b < hi; b += chunk) {
        std::uint64_t e = std::min(hi, b + chunk);
        std::vector<DigitPoint> pts = hybrid_block(spec, b, e);
        count += count_in_box(pts, box);
    }
    out.observed = count;
    return out;
}

int find_fair_u(const HybridSpec& spec, const std::vector<int>& d, const std::vector<int>& l,
                int u_cap) {
    if (d.size() != spec.kron.size() || l.size() != spec.halton.size())
        throw config_error("find_fair_u: resolution list does not match the hybrid spec");
    Poly B = halton_modulus(spec, l);
    int sum_d = 0;
    for (int di : d) sum_d += di;
    for (int u = sum_d; u <= u_cap; ++u)
        if (fair_rank_ok(spec, B, d, u)) return u;
    throw precision_error("find_fair_u: no verified u up to " + std::to_string(u_cap));
}

FairGridReport thm1_grid(const HybridSpec& spec, int d_max, int l_max,
                         std::uint64_t k_blocks, int u_cap) {
    if (spec.kron.size() != 1 || spec.halton.size() != 1)
        throw config_error("fair grid runs on 1 Kronecker + 1 Halton coordinate");
    if (d_max < 0 || l_max < 0 || k_blocks < 1)
        throw config_error("fair grid: need d_max, l_max >= 0 and k_blocks >= 1");
    const PrimeField F = spec.F;
    const int e = spec.halton[0].deg();
    if (spec.precision < d_max || spec.precision < e * l_max)
        throw config_error("fair grid: spec precision below the resolution grid");

    FairGridReport rep;
    for (int d = 0; d <= d_max; ++d) {
        for (int l = 0; l <= l_max; ++l) {
            int u = find_fair_u(spec, {d}, {l}, u_cap);
            std::uint64_t block = upow64(F.p(), u + e * l, "block length");
            if (block > UINT64_MAX / k_blocks) throw config_error("fair grid: block beyond 64 bits");
            std::uint64_t total = k_blocks * block;
            std::uint64_t cells = upow64(F.p(), d + e * l, "cell count");
            std::uint64_t expected = upow64(F.p(), u - d, "expected count");
            std::uint64_t pel = upow64(F.p(), e * l, "p^(el)");

            std::vector<std::uint64_t> counts(k_blocks * cells, 0);
            const std::uint64_t chunk = 1 << 14;
            for (std::uint64_t b = 0; b < total; b += chunk) {
                std::uint64_t hi = std::min(total, b + chunk);
                std::vector<DigitPoint> pts = hybrid_block(spec, b, hi);
                for (std::uint64_t n = b; n < hi; ++n) {
                    const DigitPoint& pt = pts[std::size_t(n - b)];
                    std::uint64_t key = pt.scaled(0, d) * pel + pt.scaled(1, e * l);
                    ++counts[(n / block) * cells + key];
                }
            }
            bool fair = true;
            for (std::uint64_t c : counts)
                if (c != expected) { fair = false; break; }
            rep.rows.push_back({d, l, u, k_blocks, cells, fair});
        }
    }
    return rep;
}

bool FairGridReport::pass() const {
    for (const FairGridRow& row : rows)
        if (!row.fair) return false;
    return !rows.empty();
}

std::vector<std::string> FairGridReport::to_lines() const {
    std::vector<std::string> lines;
    for (const FairGridRow& row : rows) {
        std::ostringstream line;
        line << "d=" << row.d << " l=" << row.l << " u=" << row.u << " blocks=" << row.blocks
             << " cells=" << row.cells << " fair=" << (row.fair ? "true" : "false");
        lines.push_back(line.str());
    }
    return lines;
}

int rank_defect_t(const MatrixFp& c, int m) {
    if (m < 1 || c.nrows < std::size_t(m) || c.ncols < std::size_t(m))
        throw config_error("rank_defect_t: matrix smaller than m");
    const PrimeField& F = c.F;
    std::vector<std::vector<res_t>> basis;
    std::vector<std::size_t> pivot;
    const std::size_t mn = std::size_t(m);
    for (int r = 0; r < m; ++r) {
        std::vector<res_t> row(mn);
        for (int j = 0; j < m; ++j) row[std::size_t(j)] = c.at(std::size_t(r), std::size_t(j));
        for (std::size_t b = 0; b < basis.size(); ++b) {
            res_t f = row[pivot[b]];
            if (f == 0) continue;
            for (int j = 0; j < m; ++j)
                row[std::size_t(j)] = F.sub(row[std::size_t(j)], F.mul(f, basis[b][std::size_t(j)]));
        }
        std::size_t q = 0;
        while (q < row.size() && row[q] == 0) ++q;
        if (q == row.size()) return m - r; // rows 0..r-1 independent, row r is not
        res_t inv = F.inv(row[q]);
        for (int j = 0; j < m; ++j) row[std::size_t(j)] = F.mul(row[std::size_t(j)], inv);
        basis.push_back(std::move(row));
        pivot.push_back(q);
    }
    return 0;
}

Prop1Report prop1_check(const Series& L, const Poly& B, int m_max, int horizon) {
    const PrimeField F = L.field();
    if (!(B.field() == F)) throw config_error("prop1: field mismatch");
    if (B.is_zero()) throw config_error("prop1: B must be nonzero");
    if (m_max < 1) throw config_error("prop1: m_max must be >= 1");

    Prop1Report rep;
    rep.horizon = horizon;
    rep.K = K_of(L, std::size_t(horizon));
    rep.e = B.deg();
    rep.t_claim = rep.K + rep.e - 1;

    Series BL = poly_times_series(B, L);
    rep.rank_ok = true;
    for (int m = 1; m <= m_max; ++m) {
        int T = rank_defect_t(kronecker_matrix(BL, m), m);
        rep.T_of_m.emplace_back(m, T);
        if (T > rep.t_claim) rep.rank_ok = false;
    }

    int net_m = std::min(m_max, 12);
    while (net_m > 0 && ipow128(F.p(), net_m) > (1 << 20)) --net_m;
    rep.net_checked_m = net_m;
    rep.net_ok = true;
    for (int m = 1; m <= net_m; ++m) {
        std::uint64_t pm = upow64(F.p(), m, "p^m");
        HybridSpec spec(F, {BL}, {}, m);
        std::vector<DigitPoint> pts = hybrid_block(spec, 0, pm);
        int t = std::min(rep.t_claim, m);
        if (!is_net(pts, t, m).pass) rep.net_ok = false;
    }
    return rep;
}

std::vector<std::string> Prop1Report::to_lines() const {
    std::vector<std::string> lines;
    std::ostringstream head;
    head << "t_claim=" << t_claim << " K=" << K << " e=" << e << " horizon=" << horizon;
    lines.push_back(head.str());
    for (auto [m, T] : T_of_m)
        lines.push_back("m=" + std::to_string(m) + " T=" + std::to_string(T) + " ok=" +
                        (T <= t_claim ? "true" : "false"));
    lines.push_back("rank_ok=" + std::string(rank_ok ? "true" : "false"));
    lines.push_back("net_checked_m=" + std::to_string(net_checked_m) + " net_ok=" +
                    (net_ok ? "true" : "false"));
    return lines;
}

namespace {

void for_each_exponent(int t, int T, std::vector<int>& l,
                       const std::function<void(const std::vector<int>&)>& fn) {
    if (int(l.size()) == t) {
        fn(l);
        return;
    }
    for (int v = 1; v <= T; ++v) {
        l.push_back(v);
        for_each_exponent(t, T, l, fn);
        l.pop_back();
    }
}

} // namespace

Prop2Report prop2_bound(const Series& L, const std::vector<Poly>& bases, std::uint64_t N) {
    const PrimeField F = L.field();
    if (bases.empty()) throw config_error("prop2: need at least one base");
    for (const Poly& b : bases) {
        if (!(b.field() == F)) throw config_error("prop2: field mismatch");
        if (!b.is_monic() || b.deg() < 1)
            throw config_error("prop2: bases must be monic of degree >= 1");
    }
    if (N < 1) throw config_error("prop2: N must be >= 1");

    Prop2Report rep;
    rep.N = N;
    rep.t = int(bases.size());
    int T = 0;
    for (std::uint64_t v = F.p(); v <= N; v *= F.p()) {
        ++T;
        if (v > N / F.p()) break;
    }
    rep.T = T;
    std::uint64_t lt = 1;
    for (int i = 0; i < rep.t; ++i) lt *= std::uint64_t(std::max(1, T));
    rep.log_term = lt;
    rep.total = lt;

    if (T >= 1) {
        std::vector<int> l;
        for_each_exponent(rep.t, T, l, [&](const std::vector<int>& lv) {
            Poly Bl = Poly::one(F);
            for (std::size_t j = 0; j < bases.size(); ++j) Bl = Bl * power(bases[j], lv[j]);
            ContinuedFraction cf = [&] {
                try {
                    return cf_expand_at_least(poly_times_series(Bl, L), std::size_t(T));
                } catch (const precision_error& e) {
                    throw precision_error("prop2: l=" + vec_str(lv) + ": " + e.what());
                }
            }();
            for (int h = 1; h <= T; ++h) {
                int deg = cf.quotients()[std::size_t(h - 1)].deg();
                std::uint64_t pd = upow64(F.p(), deg, "p^deg(A_h)");
                if (std::uint64_t(deg) > UINT64_MAX / pd)
                    throw precision_error("prop2: term overflows 64 bits");
                std::uint64_t term = std::uint64_t(deg) * pd;
                if (term > UINT64_MAX - rep.total)
                    throw precision_error("prop2: bound overflows 64 bits");
                rep.total += term;
                rep.terms.push_back({lv, h, deg, term});
            }
        });
    }
    return rep;
}

std::vector<std::string> Prop2Report::to_lines() const {
    std::vector<std::string> lines;
    std::ostringstream head;
    head << "N=" << N << " T=" << T << " t=" << t << " log_term=" << log_term
         << " bound=" << total;
    lines.push_back(head.str());
    for (const Prop2Term& term : terms) {
        std::ostringstream line;
        line << "l=" << vec_str(term.l) << " h=" << term.h << " deg=" << term.deg
             << " term=" << term.term;
        lines.push_back(line.str());
    }
    return lines;
}

Thm3Witness thm3_witness(int level) {
    if (level < 1 || level > 3) throw config_error("witness level must be 1, 2 or 3");
    Thm3Witness w;
    w.level = level;
    w.r = 3 * (1 << (level - 1)) - 2;
    int n_exp = (1 << (level + 2)) - (1 << level) - 3;
    w.N = std::uint64_t(1) << n_exp;
    w.n_lambda = std::uint64_t(1) << w.r;
    w.exponent_identity = (2 * w.r == n_exp - 1); // 2^r = sqrt(N/2)

    PrimeField F(2);
    HybridSpec spec(F, {Series::gap2()}, {Poly::x(F)}, w.r + 2);
    Box box(F, {Box::Side{1, 1, 1, 0, false}, Box::Side{0, 0, 1, w.r, false}});
    w.box_label = box.str();

    const std::uint64_t chunk = 1 << 15;
    std::uint64_t count = 0;
    for (std::uint64_t b = 0; b < w.N; b += chunk) {
        std::uint64_t e = std::min(w.N, b + chunk);
        std::vector<DigitPoint> pts = hybrid_block(spec, b, e);
        count += count_in_box(pts, box);
    }
    w.count = count;
    return w;
}

std::vector<std::string> Thm3Witness::to_lines() const {
    std::vector<std::string> lines;
    std::ostringstream head;
    head << "level=" << level << " N=" << N << " box=" << box_label << " count=" << count
         << " expected_empty=" << (count == 0 ? "true" : "false") << " lower_bound=" << n_lambda
         << " exponent_identity=" << (exponent_identity ? "true" : "false");
    lines.push_back(head.str());
    return lines;
}

ScalingReport thm2_scaling(PrimeField F, const std::vector<Series>& kron,
                           const std::vector<Poly>& halton,
                           const std::vector<std::uint64_t>& Ns) {
    if (Ns.empty()) throw config_error("scaling: empty N list");
    ScalingReport rep;
    rep.t = int(halton.size());
    for (std::uint64_t N : Ns) {
        if (N < 1) throw config_error("scaling: N must be >= 1");
        HybridSpec spec(F, kron, halton, default_precision(F, N));
        std::vector<DigitPoint> pts = hybrid_block(spec, 0, N);
        Rat d = spec.dims() == 1 ? star_disc_1d(pts) : star_disc_exact(pts);
        ScalingRow row;
        row.N = N;
        row.dstar = d;
        double nd = double(N) * d.to_double();
        double logN = std::max(1.0, std::log(double(N)));
        row.ratio = nd / (std::sqrt(double(N)) * std::pow(logN, rep.t + 1));
        rep.rows.push_back(row);
    }
    if (rep.rows.size() >= 5) {
        bool grows = true;
        for (std::size_t i = rep.rows.size() - 4; i < rep.rows.size(); ++i)
            if (rep.rows[i].ratio <= 1.05 * rep.rows[i - 1].ratio) grows = false;
        rep.growth = grows;
    }
    return rep;
}

std::vector<std::string> ScalingReport::to_lines() const {
    std::vector<std::string> lines;
    lines.push_back("t=" + std::to_string(t) + " rows=" + std::to_string(rows.size()));
    for (const ScalingRow& row : rows) {
        std::ostringstream line;
        Rat nd = Rat::of(detail::checked_mul(row.dstar.num, __int128(row.N)), row.dstar.den);
        line << "N=" << row.N << " Dstar=" << row.dstar.str() << " Dstar_dec=" << row.dstar.to_double()
             << " NDstar=" << nd.str() << " ratio=" << row.ratio;
        lines.push_back(line.str());
    }
    lines.push_back(std::string("growth=") + (growth ? "true" : "false"));
    return lines;
}

CylinderReport lemma3_mc(PrimeField F, const std::vector<Poly>& quotients,
                         std::uint64_t samples, int M, std::uint64_t seed) {
    if (quotients.empty()) throw config_error("cylinder: need at least one quotient");
    int sum_deg = 0;
    for (const Poly& q : quotients) {
        if (!(q.field() == F)) throw config_error("cylinder: field mismatch");
        if (q.is_zero() || q.deg() < 1)
            throw config_error("cylinder: quotients must have degree >= 1");
        sum_deg += q.deg();
    }
    if (samples < 1) throw config_error("cylinder: need samples >= 1");
    if (M < 4 * sum_deg + 4) throw config_error("cylinder: coefficient budget too small");

    const std::size_t k = quotients.size();
    struct Part {
        std::uint64_t hits = 0, uncert = 0;
    };
    Part total = parallel_map_reduce(
        std::int64_t(0), std::int64_t(samples), Part{},
        [&](std::int64_t b, std::int64_t e) {
            Part part;
            for (std::int64_t i = b; i < e; ++i) {
                Series L = sample_haar(F, M, mix64(seed, std::uint64_t(i)));
                try {
                    ContinuedFraction cf = cf_expand(L, M);
                    if (cf.certified_count() < k) {
                        ++part.uncert;
                        continue;
                    }
                    bool hit = true;
                    for (std::size_t j = 0; j < k; ++j)
                        if (!(cf.quotients()[j] == quotients[j])) { hit = false; break; }
                    part.hits += hit;
                } catch (const config_error&) {
                    ++part.uncert; // the all-zero draw has no expansion
                }
            }
            return part;
        },
        [](Part a, Part b) {
            a.hits += b.hits;
            a.uncert += b.uncert;
            return a;
        });

    CylinderReport rep;
    rep.samples = samples;
    rep.uncertified = total.uncert;
    rep.certified = samples - total.uncert;
    rep.hits = total.hits;
    rep.measure = Rat::of(1, ipow128(F.p(), 2 * sum_deg));
    double mu = rep.measure.to_double();
    if (rep.certified == 0) {
        rep.freq = 0;
        rep.z = 1e9;
    } else {
        rep.freq = double(rep.hits) / double(rep.certified);
        rep.z = (rep.freq - mu) / std::sqrt(mu * (1 - mu) / double(rep.certified));
    }
    return rep;
}

std::vector<std::string> CylinderReport::to_lines() const {
    std::ostringstream line;
    line << "samples=" << samples << " certified=" << certified << " uncertified=" << uncertified
         << " hits=" << hits << " freq=" << freq << " measure=" << measure.str()
         << " measure_dec=" << measure.to_double() << " z=" << z;
    return {line.str()};
}

double chi2_threshold_99(int dof) {
    static const double table[] = {0,       6.6349, 9.2103, 11.3449, 13.2767,
                                   15.0863, 16.8119, 18.4753, 20.0902};
    if (dof >= 1 && dof <= 8) return table[dof];
    // Wilson-Hilferty
    double k = dof, z = 2.3263478740408408;
    double u = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    return k * u * u * u;
}

ChiReport lemma4_mc(const Poly& B, std::uint64_t samples, int M, std::uint64_t seed, int r) {
    const PrimeField F = B.field();
    if (B.is_zero()) throw config_error("pushforward: B must be nonzero");
    if (r < 1) throw config_error("pushforward: resolution must be >= 1");
    std::uint64_t cells = 1;
    for (int i = 0; i < r; ++i) {
        cells *= F.p();
        if (cells > (1 << 20)) throw config_error("pushforward: too many cells");
    }
    int deg_b = B.deg();
    if (M < r + deg_b + 1) throw config_error("pushforward: coefficient budget too small");
    if (samples < 10 * cells) throw config_error("pushforward: too few samples for the cell count");

    using Hist = std::vector<std::uint64_t>;
    Hist hist = parallel_map_reduce(
        std::int64_t(0), std::int64_t(samples), Hist(cells, 0),
        [&](std::int64_t b, std::int64_t e) {
            Hist part(cells, 0);
            for (std::int64_t i = b; i < e; ++i) {
                Series L = sample_haar(F, M, mix64(seed, std::uint64_t(i)));
                Series G = frac_part(poly_times_series(B, L));
                std::uint64_t key = 0;
                for (int j = 1; j <= r; ++j) key = key * F.p() + G.coeff(j);
                ++part[key];
            }
            return part;
        },
        [](Hist a, Hist b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
            return a;
        });

    ChiReport rep;
    rep.samples = samples;
    rep.cells = cells;
    rep.dof = int(cells) - 1;
    double expected = double(samples) / double(cells);
    double chi2 = 0;
    for (std::uint64_t c : hist) {
        double d = double(c) - expected;
        chi2 += d * d / expected;
    }
    rep.chi2 = chi2;
    rep.threshold = chi2_threshold_99(rep.dof);
    return rep;
}

std::vector<std::string> ChiReport::to_lines() const {
    std::ostringstream line;
    line << "samples=" << samples << " cells=" << cells << " dof=" << dof << " chi2=" << chi2
         << " threshold=" << threshold;
    return {line.str()};
}

GrowthReport prop3_growth_mc(PrimeField F, const std::vector<Poly>& bases, int samples,
                             int T_max, int M, std::uint64_t seed) {
    if (bases.empty()) throw config_error("growth: need at least one base");
    for (const Poly& b : bases)
        if (!(b.field() == F) || !b.is_monic() || b.deg() < 1)
            throw config_error("growth: bases must be monic of degree >= 1 over F_p");
    if (samples < 1 || T_max < 2) throw config_error("growth: need samples >= 1, T_max >= 2");
    if (M < 6 * T_max) throw config_error("growth: coefficient budget too small");

    GrowthReport rep;
    rep.t = int(bases.size());
    rep.samples = std::uint64_t(samples);
    const double eps = rep.epsilon;
    std::vector<double> maxr(std::size_t(T_max) + 1, 0), sumr(std::size_t(T_max) + 1, 0);
    std::uint64_t used = 0;

    for (int i = 0; i < samples; ++i) {
        Series L = sample_haar(F, M, mix64(seed ^ 0x70726f703367726full, std::uint64_t(i)));
        // deg(A_h(b^l L)) for every l vector and h <= T_max, or give up on
        // this sample when certification falls short.
        std::vector<std::vector<int>> lvs;
        std::vector<std::vector<int>> degs;
        bool certified = true;
        std::vector<int> l;
        try {
            for_each_exponent(rep.t, T_max, l, [&](const std::vector<int>& lv) {
                Poly Bl = Poly::one(F);
                for (std::size_t j = 0; j < bases.size(); ++j) Bl = Bl * power(bases[j], lv[j]);
                ContinuedFraction cf = cf_expand(poly_times_series(Bl, L), M);
                if (cf.certified_count() < std::size_t(T_max)) throw precision_error("short");
                std::vector<int> dv;
                for (int h = 0; h < T_max; ++h) dv.push_back(cf.quotients()[std::size_t(h)].deg());
                lvs.push_back(lv);
                degs.push_back(std::move(dv));
            });
        } catch (const kh::error&) {
            certified = false;
        }
        if (!certified) {
            ++rep.uncertified;
            continue;
        }
        ++used;
        for (int T = 1; T <= T_max; ++T) {
            double S = 0;
            for (std::size_t q = 0; q < lvs.size(); ++q) {
                bool in_range = true;
                for (int lj : lvs[q])
                    if (lj > T) { in_range = false; break; }
                if (!in_range) continue;
                for (int h = 0; h < T; ++h) {
                    double deg = degs[q][std::size_t(h)];
                    S += deg * std::pow(double(F.p()), deg);
                }
            }
            double logN = double(T) * std::log(double(F.p()));
            double ratio = S / std::pow(logN, rep.t + 1 + eps);
            maxr[std::size_t(T)] = std::max(maxr[std::size_t(T)], ratio);
            sumr[std::size_t(T)] += ratio;
        }
    }
    if (used == 0) throw precision_error("growth: no sample could be certified");
    for (int T = 1; T <= T_max; ++T)
        rep.rows.push_back({T, maxr[std::size_t(T)], sumr[std::size_t(T)] / double(used)});
    if (rep.rows.size() >= 5) {
        bool grows = true;
        for (std::size_t i = rep.rows.size() - 4; i < rep.rows.size(); ++i)
            if (rep.rows[i].max_ratio <= 1.05 * rep.rows[i - 1].max_ratio) grows = false;
        rep.growth = grows;
    }
    return rep;
}

std::vector<std::string> GrowthReport::to_lines() const {
    std::vector<std::string> lines;
    std::ostringstream head;
    head << "evidence=true t=" << t << " epsilon=" << epsilon << " samples=" << samples
         << " uncertified=" << uncertified;
    lines.push_back(head.str());
    for (const GrowthRow& row : rows) {
        std::ostringstream line;
        line << "T=" << row.T << " max_ratio=" << row.max_ratio << " mean_ratio=" << row.mean_ratio;
        lines.push_back(line.str());
    }
    lines.push_back(std::string("growth=") + (growth ? "true" : "false"));
    return lines;
}

Example2Report example2_bundle() {
    PrimeField F(2);
    Series L = Series::gap2();
    Example2Report rep;

    ContinuedFraction cf = cf_expand_at_least(L, 10);
    rep.cf_prefix = int(cf.certified_count());
    rep.cf_alternating = cf.a0().is_zero();
    Poly X = Poly::x(F);
    Poly X2 = X * X;
    for (std::size_t h = 0; h < cf.certified_count(); ++h) {
        const Poly& want = (h % 2 == 0) ? X : X2;
        if (!(cf.quotients()[h] == want)) rep.cf_alternating = false;
    }

    // L^2 + X^2 L + X = 0, checked by coefficient convolution through the
    // window (indices -1..window).
    rep.identity_window = 64;
    std::vector<res_t> a = L.prefix(1, rep.identity_window + 2);
    auto coeff = [&](long i) -> res_t {
        return (i >= 1 && i <= long(a.size())) ? a[std::size_t(i - 1)] : 0;
    };
    rep.identity_ok = true;
    for (long j = -1; j <= rep.identity_window; ++j) {
        int c = 0;
        for (long i = 1; i < j; ++i) c ^= coeff(i) & coeff(j - i); // L^2
        c ^= coeff(j + 2);                                        // X^2 L
        if (j == -1) c ^= 1;                                      // X
        if (c != 0) rep.identity_ok = false;
    }

    Prop1Report p1 = prop1_check(L, Poly::one(F), 12);
    rep.prop1_ok = p1.pass() && p1.t_claim == 1;
    rep.net_m = p1.net_checked_m;
    rep.net_ok = p1.net_ok;
    return rep;
}

std::vector<std::string> Example2Report::to_lines() const {
    std::vector<std::string> lines;
    std::ostringstream line;
    line << "cf_prefix=" << cf_prefix << " cf_alternating=" << (cf_alternating ? "true" : "false")
         << " identity_window=" << identity_window
         << " identity_ok=" << (identity_ok ? "true" : "false")
         << " t_claim_ok=" << (prop1_ok ? "true" : "false") << " net_m=" << net_m
         << " net_ok=" << (net_ok ? "true" : "false");
    lines.push_back(line.str());
    return lines;
}

NetsReport nets_consistency(int m_max) {
    if (m_max < 2 || m_max > 10) throw config_error("nets: m_max must be in 2..10");
    NetsReport rep;
    struct Case {
        std::string label;
        Series L;
    };
    PrimeField F2(2), F3(3);
    std::vector<Case> cases;
    cases.push_back({"gap2", Series::gap2()});
    cases.push_back({"cf[0;X*]p2", series_from_cf(Poly::zero(F2), {}, {Poly::x(F2)})});
    cases.push_back({"cf[0;X*]p3", series_from_cf(Poly::zero(F3), {}, {Poly::x(F3)})});
    {
        Poly X = Poly::x(F3);
        cases.push_back({"cf[0;X^2,X*]p3", series_from_cf(Poly::zero(F3), {X * X}, {X})});
    }
    for (const Case& c : cases) {
        const PrimeField F = c.L.field();
        int cap = m_max;
        while (cap > 2 && ipow128(F.p(), cap) > (1 << 16)) --cap;
        for (int m = 2; m <= cap; ++m) {
            NetsReport::Row row;
            row.label = c.label;
            row.m = m;
            row.t = t_param({kronecker_matrix(c.L, m)}, m);
            HybridSpec spec(F, {c.L}, {}, m);
            std::vector<DigitPoint> pts = hybrid_block(spec, 0, upow64(F.p(), m, "p^m"));
            row.pass_at_t = is_net(pts, row.t, m).pass;
            row.minimal = row.t == 0 || !is_net(pts, row.t - 1, m).pass;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

bool NetsReport::pass() const {
    for (const Row& row : rows)
        if (!row.pass_at_t || !row.minimal) return false;
    return !rows.empty();
}

std::vector<std::string> NetsReport::to_lines() const {
    std::vector<std::string> lines;
    for (const Row& row : rows) {
        std::ostringstream line;
        line << "series=" << row.label << " m=" << row.m << " t=" << row.t
             << " net_at_t=" << (row.pass_at_t ? "true" : "false")
             << " minimal=" << (row.minimal ? "true" : "false");
        lines.push_back(line.str());
    }
    return lines;
}

} // namespace kh
