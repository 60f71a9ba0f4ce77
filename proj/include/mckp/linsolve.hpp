#pragma once

#include <functional>
#include <map>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace mckp {

// A sparse exact linear system M x = b over the rationals.
struct LinearSystem {
    int ncols = 0;
    std::vector<std::map<int, Rational>> rows;
    std::vector<Rational> rhs;

    void add_row(std::map<int, Rational> coeffs, Rational b) {
        rows.push_back(std::move(coeffs));
        rhs.push_back(std::move(b));
    }
};

// Solve M x = b exactly by Gauss-Jordan elimination.  Columns without a
// pivot are free and receive values from `free_value`.  Throws Inconsistent
// when the system has no solution.
inline std::vector<Rational> solve_affine(const LinearSystem& sys,
                                          const std::function<Rational()>& free_value) {
    size_t nrows = sys.rows.size();
    int ncols = sys.ncols;
    std::vector<std::vector<Rational>> m(nrows, std::vector<Rational>(ncols, Rational(0)));
    std::vector<Rational> b = sys.rhs;
    for (size_t i = 0; i < nrows; ++i)
        for (const auto& [j, c] : sys.rows[i]) m[i][j] = c;

    std::vector<int> pivot_col(nrows, -1);
    std::vector<bool> col_used(static_cast<size_t>(ncols), false);
    size_t rank = 0;
    for (int j = 0; j < ncols && rank < nrows; ++j) {
        size_t p = rank;
        while (p < nrows && m[p][j] == 0) ++p;
        if (p == nrows) continue;
        std::swap(m[p], m[rank]);
        std::swap(b[p], b[rank]);
        Rational inv = Rational(1) / m[rank][j];
        for (int c = j; c < ncols; ++c) m[rank][c] *= inv;
        b[rank] *= inv;
        for (size_t i = 0; i < nrows; ++i) {
            if (i == rank || m[i][j] == 0) continue;
            Rational f = m[i][j];
            for (int c = j; c < ncols; ++c) m[i][c] -= f * m[rank][c];
            b[i] -= f * b[rank];
        }
        pivot_col[rank] = j;
        col_used[static_cast<size_t>(j)] = true;
        ++rank;
    }
    for (size_t i = rank; i < nrows; ++i)
        if (b[i] != 0)
            throw Inconsistent("linear system has no solution (contradictory row)");

    std::vector<Rational> x(static_cast<size_t>(ncols), Rational(0));
    for (int j = 0; j < ncols; ++j)
        if (!col_used[static_cast<size_t>(j)]) x[static_cast<size_t>(j)] = free_value();
    for (size_t i = 0; i < rank; ++i) {
        Rational v = b[i];
        for (int c = pivot_col[i] + 1; c < ncols; ++c)
            if (!col_used[static_cast<size_t>(c)]) v -= m[i][c] * x[static_cast<size_t>(c)];
        x[static_cast<size_t>(pivot_col[i])] = v;
    }
    return x;
}

} // namespace mckp
