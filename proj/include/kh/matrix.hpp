#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "kh/field.hpp"
#include "kh/laurent.hpp"

namespace kh {

// Dense matrix over F_p, row major.
struct MatrixFp {
    MatrixFp(PrimeField field, std::size_t rows, std::size_t cols)
        : F(field), nrows(rows), ncols(cols), a(rows * cols, 0) {}

    res_t at(std::size_t r, std::size_t c) const { return a[r * ncols + c]; }
    res_t& at(std::size_t r, std::size_t c) { return a[r * ncols + c]; }

    PrimeField F;
    std::size_t nrows, ncols;
    std::vector<res_t> a;
};

// Infinite generating matrix as an entry oracle.  Rows are 1-based, columns
// 0-based: entry(j, k) is the factor digit j of a point picks up from digit k
// of the index n.  The Kronecker backing is the Hankel matrix of {L}:
// entry(j, k) = a_{j+k}.
class GeneratingMatrix {
public:
    static GeneratingMatrix kronecker(const Series& L) {
        Series f = frac_part(L);
        return GeneratingMatrix([f](long j, long k) { return f.coeff(j + k); }, f.field());
    }

    static GeneratingMatrix from_oracle(std::function<res_t(long, long)> fn, PrimeField F) {
        return GeneratingMatrix(std::move(fn), F);
    }

    res_t entry(long j, long k) const {
        if (j < 1 || k < 0) throw config_error("generating matrix indices: row >= 1, col >= 0");
        return fn_(j, k);
    }

    MatrixFp truncate(std::size_t rows, std::size_t cols) const {
        MatrixFp m(F_, rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                m.at(r, c) = fn_(long(r) + 1, long(c));
        return m;
    }

    PrimeField field() const { return F_; }

private:
    GeneratingMatrix(std::function<res_t(long, long)> fn, PrimeField F)
        : fn_(std::move(fn)), F_(F) {}

    std::function<res_t(long, long)> fn_;
    PrimeField F_;
};

} // namespace kh
