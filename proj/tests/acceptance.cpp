// Acceptance gate: ten end-to-end criteria, one verdict line each.
// Exits nonzero when any criterion fails its check or its time budget.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "kh/experiments.hpp"
#include "kh/laurent.hpp"
#include "kh/util.hpp"

using namespace kh;

namespace {

int g_failures = 0;

using Clock = std::chrono::steady_clock;

void run_criterion(int k, const char* what, double budget_s, bool (*fn)(std::string&)) {
    std::string detail;
    bool ok = false;
    auto t0 = Clock::now();
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs > budget_s) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    std::printf("CRITERION %d %s: %s (%.2fs%s%s)\n", k, ok ? "PASS" : "FAIL", what, secs,
                detail.empty() ? "" : "; ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::uint64_t bit_reverse(std::uint64_t n, int m) {
    std::uint64_t r = 0;
    for (int i = 0; i < m; ++i) r |= ((n >> i) & 1) << (m - 1 - i);
    return r;
}

// C(k, j) mod 2 via the digit-domination rule.
int binom2(std::uint64_t k, std::uint64_t j) { return (k & j) == j ? 1 : 0; }

// 1. Base-X points equal the classical radical inverse (bit reversal).
bool crit1(std::string& detail) {
    PrimeField F(2);
    std::vector<Poly> base = {Poly::x(F)};
    for (std::uint64_t n = 0; n < 4096; ++n)
        if (halton_point(n, base, 12).scaled(0, 12) != bit_reverse(n, 12)) {
            detail = "mismatch at n=" + std::to_string(n);
            return false;
        }
    return true;
}

// 2. Base X+1 generating matrix is the Pascal matrix mod 2, and the first
// 2^10 points match the Pascal digital construction.
bool crit2(std::string& detail) {
    PrimeField F(2);
    std::vector<Poly> bases = {Poly::x(F), parse_poly(F, "X+1")};
    const int m = 16;
    for (int k = 0; k < m; ++k) {
        DigitPoint pt = halton_point(1ull << k, bases, m);
        for (int j = 0; j < m; ++j)
            if (int(pt.coords[1][std::size_t(j)]) != binom2(std::uint64_t(k), std::uint64_t(j))) {
                detail = "matrix entry (" + std::to_string(j) + "," + std::to_string(k) + ")";
                return false;
            }
    }
    for (std::uint64_t n = 0; n < 1024; ++n) {
        DigitPoint pt = halton_point(n, bases, 10);
        for (int j = 0; j < 10; ++j) {
            int want = 0;
            for (int k = 0; k < 10; ++k)
                if ((n >> k) & 1) want ^= binom2(std::uint64_t(k), std::uint64_t(j));
            if (int(pt.coords[1][std::size_t(j)]) != want) {
                detail = "point n=" + std::to_string(n);
                return false;
            }
        }
    }
    return true;
}

// 3. Gap-series bundle: alternating certified quotient prefix, the algebraic
// identity L^2 + X^2 L + X = 0 through index 64, quality claim t <= 1, and
// the (1,m,1)-net property for m <= 12.
bool crit3(std::string& detail) {
    PrimeField F(2);
    Series L = Series::gap2();

    ContinuedFraction cf = cf_expand(L, 64);
    if (cf.certified_count() < 10) {
        detail = "only " + std::to_string(cf.certified_count()) + " certified quotients";
        return false;
    }
    for (std::size_t h = 1; h <= cf.certified_count(); ++h)
        if (cf.quotients()[h - 1].deg() != (h % 2 ? 1 : 2)) {
            detail = "quotient degrees not alternating at h=" + std::to_string(h);
            return false;
        }

    // fractional coefficients of L^2 by direct convolution; the identity
    // forces coeff_i(L^2) = coeff_i(X^2 L) = L_{i+2} for every i >= 1
    for (long i = 1; i <= 64; ++i) {
        res_t conv = 0;
        for (long a = 1; a < i; ++a) conv = F.add(conv, F.mul(L.coeff(a), L.coeff(i - a)));
        if (conv != L.coeff(i + 2)) {
            detail = "identity fails at coefficient " + std::to_string(i);
            return false;
        }
    }

    Prop1Report rep = prop1_check(L, Poly::one(F), 12);
    if (!(rep.t_claim == 1 && rep.pass())) {
        detail = "quality claim not confirmed";
        return false;
    }
    for (int m = 1; m <= 12; ++m) {
        std::vector<DigitPoint> pts;
        pts.reserve(1ull << m);
        for (std::uint64_t n = 0; n < (1ull << m); ++n) pts.push_back(kronecker_point(n, L, m));
        if (!is_net(pts, 1, m).pass) {
            detail = "net property fails at m=" + std::to_string(m);
            return false;
        }
    }
    if (!example2_bundle().pass()) {
        detail = "bundled report disagrees";
        return false;
    }
    return true;
}

// 4. Quality parameter claim under polynomial factors, by rank and counting.
bool crit4(std::string& detail) {
    PrimeField F(2);
    for (const char* btext : {"X", "X+1", "X^2+X+1"}) {
        Poly B = parse_poly(F, btext);
        Prop1Report rep = prop1_check(Series::gap2(), B, 12);
        int want = 2 + B.deg() - 1;
        if (rep.t_claim != want || !rep.rank_ok || !rep.net_ok || rep.net_checked_m != 12) {
            detail = std::string("factor ") + btext + ": t_claim=" + std::to_string(rep.t_claim) +
                     " rank_ok=" + std::to_string(rep.rank_ok) +
                     " net_ok=" + std::to_string(rep.net_ok);
            return false;
        }
    }
    return true;
}

// 5. Empty-interval witness levels 1..3: exact zero counts and the integer
// exponent identity N lambda = sqrt(N/2).
bool crit5(std::string& detail) {
    const std::uint64_t wantN[] = {8, 512, 2097152};
    const std::uint64_t wantL[] = {2, 16, 1024};
    for (int n = 1; n <= 3; ++n) {
        Thm3Witness w = thm3_witness(n);
        if (w.N != wantN[n - 1] || w.n_lambda != wantL[n - 1] || w.count != 0 ||
            !w.exponent_identity) {
            detail = "level " + std::to_string(n) + ": N=" + std::to_string(w.N) +
                     " count=" + std::to_string(w.count) +
                     " lower_bound=" + std::to_string(w.n_lambda);
            return false;
        }
    }
    return true;
}

// 6. Scaling of exact N D*_N for the gap hybrid at N = 2^4..2^12 against the
// frozen regression values and the pinned normalized-ratio bound.
bool crit6(std::string& detail) {
    PrimeField F(2);
    struct Frozen {
        std::uint64_t N;
        std::int64_t num;
        std::int64_t den;
    };
    // first verified run, frozen since
    const Frozen frozen[] = {
        {16, 5132197, 33554432},      {32, 4083621, 33554432},
        {64, 6590217, 67108864},      {128, 10308501, 134217728},
        {256, 28095885, 536870912},   {512, 39156891, 1073741824},
        {1024, 4439183, 1073741824},  {2048, 15800115, 4294967296},
        {4096, 27815773, 8589934592},
    };
    std::vector<std::uint64_t> Ns;
    for (const Frozen& f : frozen) Ns.push_back(f.N);
    ScalingReport rep = thm2_scaling(F, {Series::gap2()}, {Poly::x(F)}, Ns);
    if (!rep.pass()) {
        detail = "ratio column flagged as growing";
        return false;
    }
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        if (!(rep.rows[i].dstar == Rat::of(frozen[i].num, frozen[i].den))) {
            detail = "D* changed at N=" + std::to_string(frozen[i].N) + ": now " +
                     rep.rows[i].dstar.str();
            return false;
        }
        if (rep.rows[i].ratio >= kThm2RatioBound) {
            detail = "normalized ratio " + std::to_string(rep.rows[i].ratio) + " at N=" +
                     std::to_string(frozen[i].N) + " exceeds the pinned bound";
            return false;
        }
    }
    return true;
}

// 7. Fair counts for all elementary intervals d <= 4, l <= 3, minimal
// verified u, blocks K < 8.
bool crit7(std::string& detail) {
    PrimeField F(2);
    HybridSpec spec(F, {Series::gap2()}, {Poly::x(F)}, 24);
    FairGridReport rep = thm1_grid(spec, 4, 3, 8);
    if (rep.rows.size() != 20) {
        detail = "expected 20 resolution pairs, got " + std::to_string(rep.rows.size());
        return false;
    }
    for (const FairGridRow& row : rep.rows) {
        if (!row.fair) {
            detail = "unfair cell at d=" + std::to_string(row.d) + " l=" + std::to_string(row.l);
            return false;
        }
        if (find_fair_u(spec, {row.d}, {row.l}) != row.u) {
            detail = "u not minimal at d=" + std::to_string(row.d) + " l=" + std::to_string(row.l);
            return false;
        }
    }
    return rep.pass();
}

// 8. Residue blocks equal brute-force filtering for 100 random instances.
bool crit8(std::string& detail) {
    for (std::uint64_t it = 0; it < 100; ++it) {
        std::uint32_t p = it % 2 ? 3 : 2;
        PrimeField F(p);
        int e = 1 + int(mix64(it, 1) % 3);
        int u = int(mix64(it, 2) % 7);
        std::uint64_t K = mix64(it, 3) % 5;
        Poly B = Poly::x(F);
        for (int i = 0; i < e - 1; ++i) B = B * Poly::x(F);
        for (int i = 0; i < e; ++i)
            B = B + Poly::constant(F, res_t(mix64(it, 10 + std::uint64_t(i)) % p)).shifted(i);
        Poly R = Poly::zero(F);
        for (int i = 0; i < e; ++i)
            R = R + Poly::constant(F, res_t(mix64(it, 20 + std::uint64_t(i)) % p)).shifted(i);

        ResidueBlock blk = residue_block_indices(K, u, B, R);
        std::uint64_t span = 1;
        for (int i = 0; i < u + e; ++i) span *= p;
        std::vector<std::uint64_t> brute;
        for (std::uint64_t n = K * span; n < (K + 1) * span; ++n) {
            auto [q, rem] = poly_divmod(int_to_poly(n, F), B);
            if (rem == R) brute.push_back(n);
        }
        std::uint64_t cells = 1;
        for (int i = 0; i < u; ++i) cells *= p;
        if (blk.indices != brute || blk.indices.size() != cells) {
            detail = "instance " + std::to_string(it) + " diverges from the brute filter";
            return false;
        }
    }
    return true;
}

// 9. Random-series structure: full row rank of the Hankel slice between
// convergent cuts, and the exact shifted-block discrepancy bound.
bool crit9(std::string& detail) {
    int rank_checked = 0, disc_checked = 0;
    for (std::uint32_t p : {2u, 3u}) {
        PrimeField F(p);
        const std::vector<int> rank_ms = {4, 8, 16};
        const std::vector<int> disc_ms = p == 2 ? std::vector<int>{4, 8, 10}
                                                : std::vector<int>{3, 5, 6};
        for (std::uint64_t it = 0; it < 100; ++it) {
            Series L = sample_haar(F, 64, 0xACC0 + p * 4096 + it);
            Series V = sample_haar(F, 64, 0xACC1 + p * 4096 + it);
            ContinuedFraction cf = cf_expand(L, 64);

            for (int m : rank_ms) {
                std::size_t H = 0;
                while (H + 1 <= cf.certified_count() && cf.d(H + 1) <= m) ++H;
                if (H + 1 > cf.certified_count()) continue;
                long dH = cf.d(H);
                if (dH == 0) { ++rank_checked; continue; }
                MatrixFp mat(F, std::size_t(dH), std::size_t(m));
                for (long r = 0; r < dH; ++r)
                    for (int c = 0; c < m; ++c)
                        mat.at(std::size_t(r), std::size_t(c)) = L.coeff(r + 1 + c);
                if (rank_fp(mat) != int(dH)) {
                    detail = "rank defect, p=" + std::to_string(p) + " sample " +
                             std::to_string(it) + " m=" + std::to_string(m);
                    return false;
                }
                ++rank_checked;
            }

            for (int m : disc_ms) {
                std::size_t H1 = 0;
                for (std::size_t h = 1; h <= cf.certified_count(); ++h)
                    if (cf.d(h) > m) { H1 = h; break; }
                if (H1 == 0) continue;
                int degA = cf.quotients()[H1 - 1].deg();
                std::uint64_t pm = 1, pda = 1;
                for (int i = 0; i < m; ++i) pm *= p;
                for (int i = 0; i < degA; ++i) pda *= p;
                std::vector<DigitPoint> pts;
                pts.reserve(pm);
                for (std::uint64_t n = 0; n < pm; ++n)
                    pts.push_back(kronecker_point(n, L, m, &V));
                if (!(star_disc_1d(pts) * Rat::integer(__int128(pm)) <=
                      Rat::integer(__int128(pda)))) {
                    detail = "block bound fails, p=" + std::to_string(p) + " sample " +
                             std::to_string(it) + " m=" + std::to_string(m);
                    return false;
                }
                ++disc_checked;
            }
        }
    }
    if (rank_checked < 570 || disc_checked < 500) {
        detail = "too many uncertifiable samples: rank=" + std::to_string(rank_checked) +
                 " disc=" + std::to_string(disc_checked);
        return false;
    }
    return true;
}

// 10. Statistical checks, seed-pinned: cylinder frequencies within |z| < 3
// of the product measure, and chi-square uniformity of the pushforward.
bool crit10(std::string& detail) {
    PrimeField F2(2), F3(3);
    struct Cyl {
        PrimeField F;
        std::vector<Poly> quot;
        Rat measure;
    };
    const Cyl cyls[] = {
        {F2, {Poly::x(F2)}, Rat::of(1, 4)},
        {F2, {Poly::x(F2), Poly::x(F2)}, Rat::of(1, 16)},
        {F3, {Poly::x(F3)}, Rat::of(1, 9)},
    };
    int idx = 0;
    for (const Cyl& c : cyls) {
        CylinderReport rep = lemma3_mc(c.F, c.quot, 100000, 48, 0xC11 + std::uint64_t(idx++));
        if (!(rep.measure == c.measure) || !rep.pass()) {
            detail = "cylinder " + std::to_string(idx) + ": z=" + std::to_string(rep.z);
            return false;
        }
    }
    int bidx = 0;
    for (const char* btext : {"X", "X+1", "X^2+X+1"}) {
        ChiReport rep = lemma4_mc(parse_poly(F2, btext), 100000, 48, 0xD11 + std::uint64_t(bidx++), 3);
        if (!rep.pass()) {
            detail = std::string("pushforward by ") + btext + ": chi2=" + std::to_string(rep.chi2) +
                     " threshold=" + std::to_string(rep.threshold);
            return false;
        }
    }
    return true;
}

} // namespace

int main() {
    run_criterion(1, "base-X points equal the radical-inverse bit reversal for n < 2^12", 1.0,
                  crit1);
    run_criterion(2, "base X+1 generating matrix is Pascal mod 2 through m=16, 2^10 points match",
                  5.0, crit2);
    run_criterion(3, "gap-series bundle: alternating quotients, algebraic identity, t<=1 net",
                  30.0, crit3);
    run_criterion(4, "quality claim under factors X, X+1, X^2+X+1 by rank and counting", 60.0,
                  crit4);
    run_criterion(5, "empty-interval witness levels 1..3 with the integer exponent identity", 60.0,
                  crit5);
    run_criterion(6, "frozen exact discrepancy scaling at N=2^4..2^12 under the pinned ratio bound",
                  600.0, crit6);
    run_criterion(7, "fair counts for all elementary intervals d<=4, l<=3, minimal u, K<8", 60.0,
                  crit7);
    run_criterion(8, "residue blocks equal brute-force filtering on 100 random instances", 5.0,
                  crit8);
    run_criterion(9, "Hankel rank and exact shifted-block bounds on 200 random series", 60.0,
                  crit9);
    run_criterion(10, "seed-pinned cylinder z-scores and pushforward chi-square", 60.0, crit10);

    if (g_failures) {
        std::printf("%d of 10 criteria failed\n", g_failures);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}
