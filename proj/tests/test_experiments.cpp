#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "kh/experiments.hpp"
#include "kh/laurent.hpp"
#include "kh/util.hpp"

using namespace kh;

namespace {

Poly xpow(PrimeField F, int k) {
    Poly r = Poly::one(F);
    for (int i = 0; i < k; ++i) r = r * Poly::x(F);
    return r;
}

struct ThreadGuard {
    int saved = max_threads();
    ~ThreadGuard() { set_max_threads(saved); }
};

} // namespace

TEST_SUITE("experiments") {

TEST_CASE("fair counts for the all-ones continued fraction") {
    PrimeField F(2);
    Series L = parse_series(F, "cf:X*");
    HybridSpec spec(F, {L}, {Poly::x(F)}, 16);
    for (std::uint64_t a = 0; a < 2; ++a)
        for (std::uint64_t c = 0; c < 2; ++c)
            for (std::uint64_t K : {0ull, 3ull}) {
                FairCount fc = thm1_fair_count(spec, {{1, a}}, {{1, c}}, 2, K);
                CHECK(fc.expected == 2);
                CHECK(fc.observed == 2);
                CHECK(fc.pass());
                CHECK(fc.u == 2);
                CHECK(fc.K == K);
            }
}

TEST_CASE("fair count of the whole cube is one point per unit block") {
    PrimeField F(2);
    HybridSpec spec(F, {Series::gap2()}, {Poly::x(F)}, 16);
    for (std::uint64_t K : {0ull, 1ull, 7ull}) {
        FairCount fc = thm1_fair_count(spec, {{0, 0}}, {{0, 0}}, 0, K);
        CHECK(fc.observed == 1);
        CHECK(fc.expected == 1);
    }
}

TEST_CASE("unverifiable u is rejected, the next u passes") {
    PrimeField F(2);
    HybridSpec spec(F, {Series::gap2()}, {Poly::x(F)}, 16);
    // {X*gap2} starts 0,0,1,...: the 1x2 slice is zero, rank condition fails
    CHECK_THROWS_AS(thm1_fair_count(spec, {{1, 0}}, {{1, 0}}, 2, 0), config_error);
    CHECK(find_fair_u(spec, {1}, {1}) == 3);
    FairCount fc = thm1_fair_count(spec, {{1, 0}}, {{1, 0}}, 3, 0);
    CHECK(fc.expected == 4);
    CHECK(fc.pass());
    // and for the all-ones CF the same resolution verifies already at u=2
    HybridSpec ones(F, {parse_series(F, "cf:X*")}, {Poly::x(F)}, 16);
    CHECK(find_fair_u(ones, {1}, {1}) == 2);
    CHECK(find_fair_u(spec, {0}, {0}) == 0);
}

TEST_CASE("fair-count input validation") {
    PrimeField F(2);
    HybridSpec spec(F, {Series::gap2()}, {Poly::x(F)}, 16);
    CHECK_THROWS_AS(thm1_fair_count(spec, {}, {{1, 0}}, 3, 0), config_error);
    CHECK_THROWS_AS(thm1_fair_count(spec, {{1, 2}}, {{1, 0}}, 3, 0), config_error); // anchor
    CHECK_THROWS_AS(thm1_fair_count(spec, {{-1, 0}}, {{1, 0}}, 3, 0), config_error);
    CHECK_THROWS_AS(thm1_fair_count(spec, {{20, 0}}, {{1, 0}}, 3, 0), config_error);
}

TEST_CASE("fair-count grid over small resolutions") {
    PrimeField F(2);
    HybridSpec spec(F, {Series::gap2()}, {Poly::x(F)}, 20);
    FairGridReport rep = thm1_grid(spec, 2, 2, 2);
    CHECK(rep.pass());
    CHECK(rep.rows.size() == 9); // (d,l) in {0,1,2}^2
    bool saw = false;
    for (const FairGridRow& row : rep.rows) {
        CHECK(row.fair);
        if (row.d == 1 && row.l == 1) {
            CHECK(row.u == 3);
            saw = true;
        }
    }
    CHECK(saw);
    CHECK(!rep.to_lines().empty());
}

TEST_CASE("rank defect of generating matrix prefixes") {
    Series g = Series::gap2();
    CHECK(rank_defect_t(kronecker_matrix(g, 2), 2) == 1);
    CHECK(rank_defect_t(kronecker_matrix(g, 4), 4) == 0);
    PrimeField F(2);
    CHECK(rank_defect_t(MatrixFp(F, 3, 3), 3) == 3);
    MatrixFp id(F, 5, 5);
    for (std::size_t i = 0; i < 5; ++i) id.at(i, i) = 1;
    CHECK(rank_defect_t(id, 5) == 0);
}

TEST_CASE("quality parameter claim for the gap series") {
    Prop1Report rep = prop1_check(Series::gap2(), Poly::one(PrimeField(2)), 12);
    CHECK(rep.t_claim == 1);
    CHECK(rep.K == 2);
    CHECK(rep.e == 0);
    CHECK(rep.pass());
    REQUIRE(rep.T_of_m.size() == 12);
    for (auto [m, T] : rep.T_of_m) CHECK(T <= 1);
    CHECK(rep.T_of_m[1].second == 1); // m=2 slice is rank-deficient
    CHECK(rep.net_checked_m == 12);
}

TEST_CASE("quality parameter claim for the gap series times X") {
    PrimeField F(2);
    Prop1Report rep = prop1_check(Series::gap2(), Poly::x(F), 10);
    CHECK(rep.t_claim == 2); // K=2, e=1
    CHECK(rep.pass());
}

TEST_CASE("all-ones continued fraction gives a perfect sequence") {
    PrimeField F(2);
    Prop1Report rep = prop1_check(parse_series(F, "cf:X*"), Poly::one(F), 10);
    CHECK(rep.t_claim == 0);
    CHECK(rep.pass());
    for (auto [m, T] : rep.T_of_m) CHECK(T == 0);
    CHECK(!rep.to_lines().empty());
}

TEST_CASE("rational series is out of scope for the quality claim") {
    PrimeField F(2);
    Series L = parse_series(F, "rational:1/X^2+X");
    CHECK_THROWS_AS(prop1_check(L, Poly::one(F), 8), precision_error);
}

TEST_CASE("discrepancy bound term at N=2") {
    PrimeField F(2);
    Prop2Report rep = prop2_bound(Series::gap2(), {Poly::x(F)}, 2);
    CHECK(rep.N == 2);
    CHECK(rep.T == 1);
    CHECK(rep.t == 1);
    CHECK(rep.log_term == 1);
    REQUIRE(rep.terms.size() == 1);
    CHECK(rep.terms[0].h == 1);
    CHECK(rep.terms[0].l == std::vector<int>{1});
    CHECK(rep.terms[0].deg == 3); // {X gap2} = 0,0,1,... so deg A_1 = 3
    CHECK(rep.terms[0].term == 24);
    CHECK(rep.total == 25);
}

TEST_CASE("discrepancy bound term below p is the bare log term") {
    PrimeField F(3);
    Prop2Report rep = prop2_bound(Series::haar(F, 64, 5), {Poly::x(F)}, 2);
    CHECK(rep.T == 0);
    CHECK(rep.terms.empty());
    CHECK(rep.total == 1);
}

TEST_CASE("discrepancy bound at N=2^10: frozen value and per-term recomputation") {
    PrimeField F(2);
    Series g = Series::gap2();
    Prop2Report rep = prop2_bound(g, {Poly::x(F)}, 1024);
    CHECK(rep.T == 10);
    CHECK(rep.log_term == 10);
    CHECK(rep.total == 699670);
    REQUIRE(rep.terms.size() == 100);
    std::uint64_t total = rep.log_term;
    for (int l = 1; l <= 10; ++l) {
        Series S = frac_part(poly_times_series(xpow(F, l), g));
        ContinuedFraction cf = cf_expand_at_least(S, 10);
        for (std::size_t h = 1; h <= 10; ++h) {
            int dg = cf.quotients()[h - 1].deg();
            total += std::uint64_t(dg) << dg;
        }
    }
    CHECK(total == rep.total);
}

TEST_CASE("exact discrepancy stays within the pinned constant of the bound") {
    PrimeField F(2);
    for (const char* spec_text : {"gap2", "cf:X*", "random:5"}) {
        Series L = parse_series(F, spec_text);
        for (std::uint64_t N : {1ull, 2ull, 8ull, 32ull, 128ull, 256ull}) {
            Prop2Report rep = prop2_bound(L, {Poly::x(F)}, N);
            HybridSpec spec(F, {L}, {Poly::x(F)}, default_precision(F, N));
            std::vector<DigitPoint> pts = hybrid_block(spec, 0, N);
            double nd = double(N) * star_disc_exact(pts).to_double();
            CHECK(nd <= kProp2ConsistencyC * double(rep.total));
        }
    }
}

TEST_CASE("empty-interval witness levels 1 and 2") {
    Thm3Witness w1 = thm3_witness(1);
    CHECK(w1.N == 8);
    CHECK(w1.r == 1);
    CHECK(w1.count == 0);
    CHECK(w1.n_lambda == 2);
    CHECK(w1.exponent_identity);
    CHECK(w1.pass());
    CHECK(w1.box_label.find("[1/2,1)") != std::string::npos);

    Thm3Witness w2 = thm3_witness(2);
    CHECK(w2.N == 512);
    CHECK(w2.r == 4);
    CHECK(w2.count == 0);
    CHECK(w2.n_lambda == 16);
    CHECK(w2.pass());

    CHECK_THROWS_AS(thm3_witness(0), config_error);
    CHECK_THROWS_AS(thm3_witness(4), config_error);

    auto lines = w1.to_lines();
    REQUIRE(!lines.empty());
    CHECK(lines[0].find("count=0") != std::string::npos);
    CHECK(lines[0].find("lower_bound=2") != std::string::npos);
}

TEST_CASE("scaling table: frozen discrepancies for the gap hybrid") {
    PrimeField F(2);
    ScalingReport rep = thm2_scaling(F, {Series::gap2()}, {Poly::x(F)}, {16, 32});
    CHECK(rep.t == 1);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].dstar == Rat::of(5132197, 33554432));
    CHECK(rep.rows[1].dstar == Rat::of(4083621, 33554432));
    CHECK(rep.pass());
    CHECK(rep.rows[0].ratio < kThm2RatioBound);
    CHECK(rep.rows[1].ratio < kThm2RatioBound);
}

TEST_CASE("scaling table: single point and exact power-of-two blocks") {
    PrimeField F(2);
    ScalingReport one = thm2_scaling(F, {Series::gap2()}, {Poly::x(F)}, {1});
    CHECK(one.rows[0].dstar == Rat::integer(1));
    CHECK(one.rows[0].ratio == doctest::Approx(1.0)); // log floored at 1

    // 1-dimensional base-X blocks of length 2^m: N D*_N is exactly 1
    std::vector<std::uint64_t> Ns;
    for (int m = 1; m <= 10; ++m) Ns.push_back(1ull << m);
    ScalingReport hal = thm2_scaling(F, {}, {Poly::x(F)}, Ns);
    for (const ScalingRow& row : hal.rows)
        CHECK(row.dstar == Rat::of(1, __int128(row.N)));
}

TEST_CASE("cylinder frequencies match the quotient-prefix measure") {
    PrimeField F2(2), F3(3);
    CylinderReport a = lemma3_mc(F2, {Poly::x(F2)}, 20000, 32, 11);
    CHECK(a.measure == Rat::of(1, 4));
    CHECK(a.samples == 20000);
    CHECK(a.certified + a.uncertified == a.samples);
    CHECK(a.uncertified < 200);
    CHECK(a.pass());

    CylinderReport b = lemma3_mc(F2, {Poly::x(F2), Poly::x(F2)}, 20000, 32, 12);
    CHECK(b.measure == Rat::of(1, 16));
    CHECK(b.pass());

    CylinderReport c = lemma3_mc(F3, {Poly::x(F3)}, 20000, 32, 13);
    CHECK(c.measure == Rat::of(1, 9));
    CHECK(c.pass());
    CHECK(!c.to_lines().empty());
}

TEST_CASE("cylinder statistics are deterministic across thread counts") {
    ThreadGuard guard;
    PrimeField F(2);
    set_max_threads(1);
    CylinderReport a = lemma3_mc(F, {Poly::x(F)}, 8000, 32, 99);
    set_max_threads(4);
    CylinderReport b = lemma3_mc(F, {Poly::x(F)}, 8000, 32, 99);
    CHECK(a.hits == b.hits);
    CHECK(a.certified == b.certified);
    CHECK(a.z == b.z);
}

TEST_CASE("pushforward by B preserves digit uniformity (chi-square)") {
    PrimeField F(2);
    ChiReport id = lemma4_mc(Poly::one(F), 20000, 32, 21, 3);
    CHECK(id.cells == 8);
    CHECK(id.dof == 7);
    CHECK(id.threshold == chi2_threshold_99(7));
    CHECK(id.pass());

    ChiReport bx = lemma4_mc(Poly::x(F), 20000, 32, 22, 3);
    CHECK(bx.pass());
    ChiReport bq = lemma4_mc(parse_poly(F, "X^2+X+1"), 20000, 32, 23, 3);
    CHECK(bq.pass());
    CHECK(!bq.to_lines().empty());

    CHECK_THROWS_AS(lemma4_mc(Poly::zero(F), 20000, 32, 1, 3), config_error);
    CHECK_THROWS_AS(lemma4_mc(Poly::one(F), 10, 32, 1, 3), config_error); // too few samples
}

TEST_CASE("pushforward statistics are deterministic across thread counts") {
    ThreadGuard guard;
    PrimeField F(2);
    set_max_threads(1);
    ChiReport a = lemma4_mc(Poly::x(F), 6000, 32, 77, 3);
    set_max_threads(4);
    ChiReport b = lemma4_mc(Poly::x(F), 6000, 32, 77, 3);
    CHECK(a.chi2 == b.chi2);
}

TEST_CASE("chi-square 99th percentile thresholds") {
    CHECK(chi2_threshold_99(1) == doctest::Approx(6.6349).epsilon(1e-4));
    CHECK(chi2_threshold_99(7) == doctest::Approx(18.4753).epsilon(1e-4));
    CHECK(chi2_threshold_99(8) == doctest::Approx(20.0902).epsilon(1e-4));
    // Wilson-Hilferty tail: true value 135.807
    CHECK(chi2_threshold_99(100) == doctest::Approx(135.807).epsilon(2e-3));
    for (int dof = 1; dof < 40; ++dof)
        CHECK(chi2_threshold_99(dof) < chi2_threshold_99(dof + 1));
}

TEST_CASE("degree-sum growth study stays below the normalized envelope") {
    PrimeField F(2);
    // T_max 8 clears the small-T transient where single large quotient
    // degrees (summand deg * p^deg is heavy-tailed) still dominate
    GrowthReport rep = prop3_growth_mc(F, {Poly::x(F)}, 1000, 8, 64, 1729);
    CHECK(rep.t == 1);
    CHECK(rep.samples == 1000);
    REQUIRE(rep.rows.size() == 8);
    for (const GrowthRow& row : rep.rows) {
        CHECK(row.max_ratio >= row.mean_ratio);
        CHECK(row.mean_ratio > 0);
    }
    CHECK(rep.pass());
    CHECK(!rep.to_lines().empty());
    CHECK_THROWS_AS(prop3_growth_mc(F, {Poly::x(F)}, 10, 6, 20, 5), config_error);
}

TEST_CASE("gap-series example bundle") {
    Example2Report rep = example2_bundle();
    CHECK(rep.cf_prefix >= 10);
    CHECK(rep.cf_alternating);
    CHECK(rep.identity_window >= 64);
    CHECK(rep.identity_ok);
    CHECK(rep.prop1_ok);
    CHECK(rep.net_ok);
    CHECK(rep.pass());
    CHECK(!rep.to_lines().empty());
}

TEST_CASE("net verdicts agree with the rank t-parameter") {
    NetsReport rep = nets_consistency(6);
    CHECK(rep.pass());
    CHECK(!rep.rows.empty());
    for (const auto& row : rep.rows) {
        CHECK(row.pass_at_t);
        CHECK(row.minimal);
    }
}

} // TEST_SUITE
