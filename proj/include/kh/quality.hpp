#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kh/matrix.hpp"
#include "kh/points.hpp"
#include "kh/rat.hpp"

namespace kh {

// Axis-parallel box with exact base-p rational endpoints num/p^k per side.
// Lower ends are closed; upper ends are half-open unless up_closed is set.
struct Box {
    struct Side {
        std::uint64_t lo_num = 0;
        int lo_k = 0;
        std::uint64_t up_num = 1;
        int up_k = 0;
        bool up_closed = false;
    };

    Box(PrimeField field, std::vector<Side> sides_);

    // Product of [a_i p^{-d_i}, (a_i+1) p^{-d_i}).
    static Box elementary(PrimeField F, const std::vector<std::pair<int, std::uint64_t>>& cells);

    bool contains(const DigitPoint& pt) const;
    Rat volume() const;
    std::string str() const;

    PrimeField F;
    std::vector<Side> sides;
};

std::uint64_t count_in_box(std::span<const DigitPoint> pts, const Box& box);

// Row rank over F_p; Gaussian elimination on a copy.
int rank_fp(MatrixFp m);

// Quality parameter of a set of generating matrices: the least T such that
// for every composition d_1+...+d_s = m - T (d_i >= 0) the matrix stacking
// the first d_i rows of each C_i (columns 0..m-1) has full row rank m - T.
// Exhaustive; capped at s <= 4, m <= 20.
int t_param(const std::vector<MatrixFp>& matrices, int m);

struct NetViolation {
    std::vector<int> d;
    std::vector<std::uint64_t> a;
    std::uint64_t expected = 0;
    std::uint64_t observed = 0;
};

struct NetReport {
    int t = 0, m = 0, s = 0;
    bool pass = false;
    std::vector<NetViolation> violations; // coarsest first, capped
    bool violations_truncated = false;
    std::vector<std::string> to_lines(PrimeField F) const;
};

// Verify that |points| = p^m and every elementary interval with resolution
// sum d_1+...+d_s <= m-t holds exactly p^{m-sum d} points.  (The coarser
// intervals are implied by the defining volume-p^{t-m} ones; checking them
// too lets failures surface at the coarsest witness.)
NetReport is_net(std::span<const DigitPoint> pts, int t, int m);

// Exact star discrepancy of 1-dimensional points via the sorted formula
//   D* = max_i max(x_(i) - (i-1)/N, i/N - x_(i)).
Rat star_disc_1d(std::span<const DigitPoint> pts);

// Exact star discrepancy for s <= 3 by critical-corner enumeration with the
// open and closed count variants.  N capped (default 4096).
Rat star_disc_exact(std::span<const DigitPoint> pts, std::size_t n_cap = 4096);

// |A(box)/N - volume|: a lower bound for the extreme discrepancy.
Rat extreme_disc_lower_bound(std::span<const DigitPoint> pts, const Box& box);

} // namespace kh
