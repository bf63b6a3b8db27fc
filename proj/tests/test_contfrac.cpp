#include "doctest.h"

#include <cstdint>
#include <vector>

#include "kh/contfrac.hpp"
#include "kh/laurent.hpp"
#include "kh/poly.hpp"
#include "kh/util.hpp"

using namespace kh;

namespace {

Series neg_rational(const Poly& P, const Poly& Q) {
    return Series::rational(P.scaled(P.field().neg(1)), Q);
}

// Index of the first nonzero coefficient of L - P/Q, or 0 if there is a
// nonzero polynomial part.
long diff_first_nonzero(const Series& L, const Poly& P, const Poly& Q, long scan = 80) {
    Series d = series_add(L, neg_rational(P, Q));
    for (long i = -16; i <= scan; ++i)
        if (d.coeff(i) != 0) return i;
    return scan + 1;
}

} // namespace

TEST_SUITE("contfrac") {

TEST_CASE("rational expansions run Euclid to exhaustion") {
    PrimeField F(2);
    ContinuedFraction a = cf_expand(Series::rational(Poly::one(F), Poly::x(F)), 8);
    CHECK(a.exact());
    CHECK(a.a0().is_zero());
    REQUIRE(a.certified_count() == 1);
    CHECK(a.quotients()[0] == Poly::x(F));
    auto [p1, q1] = a.convergent(1);
    CHECK(p1 == Poly::one(F));
    CHECK(q1 == Poly::x(F));

    ContinuedFraction b = cf_expand(Series::rational(parse_poly(F, "X+1"), parse_poly(F, "X^2")), 8);
    CHECK(b.exact());
    REQUIRE(b.certified_count() == 2);
    CHECK(b.quotients()[0] == parse_poly(F, "X+1"));
    CHECK(b.quotients()[1] == parse_poly(F, "X+1"));
    auto [p2, q2] = b.convergent(2);
    CHECK(p2 == parse_poly(F, "X+1"));
    CHECK(q2 == parse_poly(F, "X^2"));
    CHECK(b.d(1) == 1);
    CHECK(b.d(2) == 2);
}

TEST_CASE("a0 absorbs the polynomial part") {
    PrimeField F(2);
    // (X^3+X+1)/X = X^2+1 + 1/X
    ContinuedFraction cf = cf_expand(Series::rational(parse_poly(F, "X^3+X+1"), Poly::x(F)), 8);
    CHECK(cf.a0() == parse_poly(F, "X^2+1"));
    REQUIRE(cf.certified_count() == 1);
    CHECK(cf.quotients()[0] == Poly::x(F));
}

TEST_CASE("gap series quotients alternate X and X^2") {
    ContinuedFraction cf = cf_expand(Series::gap2(), 14);
    PrimeField F(2);
    REQUIRE(cf.certified_count() == 5);
    std::vector<Poly> want = {Poly::x(F), parse_poly(F, "X^2"), Poly::x(F), parse_poly(F, "X^2"),
                              Poly::x(F)};
    CHECK(cf.quotients() == want);
    CHECK(!cf.exact());
    CHECK(cf.prefix_used() == 14);
    // degree sums 1, 3, 4, 6, 7
    CHECK(cf.d(1) == 1);
    CHECK(cf.d(2) == 3);
    CHECK(cf.d(5) == 7);
    auto [p2, q2] = cf.convergent(2);
    CHECK(p2 == parse_poly(F, "X^2"));
    CHECK(q2 == parse_poly(F, "X^3+1"));
}

TEST_CASE("certified count follows the half-prefix rule") {
    // gap degree sums d_h: 1, 3, 4, 6, 7, 9, ...; h certified iff 2 d_h <= budget
    Series g = Series::gap2();
    CHECK(cf_expand(g, 1).certified_count() == 0);
    CHECK(cf_expand(g, 2).certified_count() == 1);
    CHECK(cf_expand(g, 4).certified_count() == 1);
    CHECK(cf_expand(g, 6).certified_count() == 2);
    CHECK(cf_expand(g, 8).certified_count() == 3);
    CHECK(cf_expand(g, 12).certified_count() == 4);
    CHECK(cf_expand(g, 14).certified_count() == 5);
    CHECK(cf_expand(g, 18).certified_count() == 6);
}

TEST_CASE("certified quotients from a truncated window match the full oracle") {
    PrimeField F(2);
    Series g = Series::gap2();
    for (long M : {5L, 9L, 14L, 23L, 40L}) {
        Series trunc = Series::truncated(F, 1, g.prefix(1, M));
        ContinuedFraction a = cf_expand(trunc, 1000); // clamps to capacity M
        ContinuedFraction b = cf_expand(g, M);
        CHECK(a.prefix_used() == M);
        REQUIRE(a.certified_count() == b.certified_count());
        CHECK(a.quotients() == b.quotients());
    }
}

TEST_CASE("errors: zero series, bad budget, constant quotients") {
    PrimeField F(2);
    Series z = Series::rational(Poly::zero(F), Poly::one(F));
    CHECK_THROWS_AS(cf_expand(z, 10), config_error);
    CHECK_THROWS_AS(cf_expand(Series::gap2(), 0), config_error);
    ContinuedFraction cf(F, Poly::zero(F));
    CHECK_THROWS_AS(cf.push_quotient(Poly::one(F)), config_error);
    CHECK_THROWS_AS(cf.push_quotient(Poly::zero(F)), config_error);
}

TEST_CASE("convergent beyond the certified range is a precision error") {
    ContinuedFraction cf = cf_expand(Series::gap2(), 14);
    CHECK_NOTHROW(cf.convergent(5));
    CHECK_THROWS_AS(cf.convergent(6), precision_error);
}

TEST_CASE("series_from_cf spec values") {
    PrimeField F(2);
    Poly a0 = Poly::zero(F);
    // [0; X] = 1/X
    Series a = series_from_cf(a0, {Poly::x(F)}, {});
    CHECK(a.prefix(1, 5) == std::vector<res_t>{1, 0, 0, 0, 0});

    // [0; X, X^2, X, X^2, ...] is the gap series
    Series b = series_from_cf(a0, {}, {Poly::x(F), parse_poly(F, "X^2")});
    for (long i = 1; i <= 12; ++i)
        CHECK(b.coeff(i) == ((i == 1 || i == 4 || i == 10) ? 1 : 0));
    CHECK(b.prefix(1, 60) == Series::gap2().prefix(1, 60));

    // [0; X+1, X+1] = (X+1)/X^2
    Series c = series_from_cf(a0, {parse_poly(F, "X+1"), parse_poly(F, "X+1")}, {});
    CHECK(c.prefix(1, 4) == std::vector<res_t>{1, 1, 0, 0});
    const auto* pq = c.rational_form();
    REQUIRE(pq != nullptr);
    CHECK(pq->first == parse_poly(F, "X+1"));
    CHECK(pq->second == parse_poly(F, "X^2"));
}

TEST_CASE("series_from_cf validates quotient degrees") {
    PrimeField F(2);
    CHECK_THROWS_AS(series_from_cf(Poly::zero(F), {Poly::one(F)}, {}), config_error);
    CHECK_THROWS_AS(series_from_cf(Poly::zero(F), {}, {Poly::zero(F)}), config_error);
}

TEST_CASE("round trip: expansion of a periodic cf recovers its quotients") {
    for (std::uint32_t p : {2u, 3u}) {
        PrimeField F(p);
        for (std::uint64_t it = 0; it < 40; ++it) {
            auto rand_quot = [&](std::uint64_t k) {
                int deg = 1 + int(mix64(it * 97 + k, p) % 2);
                std::vector<res_t> c(std::size_t(deg) + 1);
                for (std::size_t i = 0; i <= std::size_t(deg); ++i)
                    c[i] = res_t(mix64(it * 131 + k, 1000 + i * p) % F.p());
                c[std::size_t(deg)] = res_t(1 + mix64(it, k) % (F.p() - 1 ? F.p() - 1 : 1));
                return Poly(F, std::move(c));
            };
            std::size_t pre_len = mix64(it, 61) % 3;
            std::size_t per_len = 1 + mix64(it, 62) % 3;
            std::vector<Poly> pre, per;
            for (std::size_t k = 0; k < pre_len; ++k) pre.push_back(rand_quot(k));
            for (std::size_t k = 0; k < per_len; ++k) per.push_back(rand_quot(100 + k));

            Series L = series_from_cf(Poly::zero(F), pre, per);
            ContinuedFraction cf = cf_expand(L, 60);
            REQUIRE(cf.certified_count() >= 3);
            for (std::size_t h = 0; h < cf.certified_count(); ++h) {
                const Poly& want = h < pre_len ? pre[h] : per[(h - pre_len) % per_len];
                CHECK(cf.quotients()[h] == want);
            }
        }
    }
}

TEST_CASE("convergent accuracy: the difference vanishes exactly through d_h + d_{h+1} - 1") {
    Series g = Series::gap2();
    ContinuedFraction cf = cf_expand(g, 40);
    REQUIRE(cf.certified_count() >= 7);
    for (std::size_t h = 1; h + 1 <= 7; ++h) {
        auto [P, Q] = cf.convergent(h);
        CHECK(diff_first_nonzero(g, P, Q) == cf.d(h) + cf.d(h + 1));
    }

    // same over F_3 with a periodic cf
    PrimeField F(3);
    Series L = series_from_cf(Poly::zero(F), {}, {parse_poly(F, "X+2"), parse_poly(F, "2X^2+1")});
    ContinuedFraction cf3 = cf_expand(L, 40);
    REQUIRE(cf3.certified_count() >= 5);
    for (std::size_t h = 1; h + 1 <= 5; ++h) {
        auto [P, Q] = cf3.convergent(h);
        CHECK(diff_first_nonzero(L, P, Q) == cf3.d(h) + cf3.d(h + 1));
    }
}

TEST_CASE("convergents are coprime and their degrees are the quotient degree sums") {
    Series g = Series::gap2();
    ContinuedFraction cf = cf_expand(g, 40);
    long want_d = 0;
    for (std::size_t h = 1; h <= cf.certified_count(); ++h) {
        want_d += cf.quotients()[h - 1].deg();
        auto [P, Q] = cf.convergent(h);
        CHECK(Q.deg() == want_d);
        CHECK(cf.d(h) == want_d);
        CHECK(poly_gcd(P, Q).is_one());
    }
}

TEST_CASE("no small fraction beats a convergent (exhaustive over F_2)") {
    PrimeField F(2);
    Series g = Series::gap2();
    ContinuedFraction cf = cf_expand(g, 40);
    for (std::size_t h : {1u, 2u, 3u}) {
        long bound = cf.d(h) + cf.d(h + 1);
        long kdeg_max = cf.d(h + 1) - 1;
        for (std::uint64_t k = 1; k < (1ull << (kdeg_max + 1)); ++k) {
            Poly K = int_to_poly(k, F);
            for (std::uint64_t b = 0; b <= k; ++b) {
                Poly B = int_to_poly(b, F);
                if (B.degree() > K.degree()) continue;
                CHECK(diff_first_nonzero(g, B, K) <= bound);
            }
        }
    }
}

TEST_CASE("K_of spec values") {
    PrimeField F(2);
    CHECK(K_of(Series::gap2(), 10) == 2);
    Series golden = series_from_cf(Poly::zero(F), {}, {Poly::x(F)});
    CHECK(K_of(golden, 10) == 1);
    Series r = Series::rational(parse_poly(F, "X+1"), parse_poly(F, "X^2"));
    CHECK(K_of(r, 2) == 1);
    CHECK_THROWS_AS(K_of(r, 3), precision_error); // finite cf exhausted
    CHECK_THROWS_AS(K_of(Series::gap2(), 0), config_error);
}

TEST_CASE("cf_expand_at_least grows the budget or reports exhaustion") {
    ContinuedFraction cf = cf_expand_at_least(Series::gap2(), 30);
    CHECK(cf.certified_count() >= 30);
    for (std::size_t h = 0; h < 30; ++h) CHECK(cf.quotients()[h].deg() == (h % 2 ? 2 : 1));

    PrimeField F(2);
    Series trunc = Series::truncated(F, 1, Series::gap2().prefix(1, 12));
    CHECK_THROWS_AS(cf_expand_at_least(trunc, 10), precision_error);
}

} // TEST_SUITE
