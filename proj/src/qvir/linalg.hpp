// Copyright (c) 2026 The qvir project
// SPDX-License-Identifier: Apache-2.0
//
// Exact dense linear algebra over any field-like ring trait: rank,
// determinant, and null-space bases via fraction-free-ordered Gaussian
// elimination.  Deterministic pivoting (first nonzero entry in column
// order) keeps results reproducible across runs and platforms.

#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace qvir {

template <class S>
using Matrix = std::vector<std::vector<S>>;

namespace detail {

// Reduces `m` in place to row echelon form and returns the pivot columns
// in elimination order.  Row swaps are recorded through `sign` so callers
// computing determinants can track parity.
template <class Ring>
std::vector<std::size_t> echelonize(const Ring& ring, Matrix<typename Ring::S>& m,
                                    int& sign) {
    std::vector<std::size_t> pivots;
    sign = 1;
    if (m.empty()) return pivots;
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        while (piv < rows && ring.is_zero(m[piv][col])) ++piv;
        if (piv == rows) continue;
        if (piv != row) {
            std::swap(m[piv], m[row]);
            sign = -sign;
        }
        for (std::size_t r = row + 1; r < rows; ++r) {
            if (ring.is_zero(m[r][col])) continue;
            typename Ring::S factor = m[r][col] / m[row][col];
            for (std::size_t c = col; c < cols; ++c)
                m[r][c] = m[r][c] - factor * m[row][c];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace detail

template <class Ring>
std::size_t matrix_rank(const Ring& ring, Matrix<typename Ring::S> m) {
    int sign = 0;
    return detail::echelonize(ring, m, sign).size();
}

template <class Ring>
typename Ring::S matrix_det(const Ring& ring, Matrix<typename Ring::S> m) {
    if (m.empty()) return ring.integer(1);
    if (m.size() != m.front().size())
        throw std::invalid_argument("determinant of a non-square matrix");
    int sign = 0;
    auto pivots = detail::echelonize(ring, m, sign);
    if (pivots.size() < m.size()) return ring.integer(0);
    typename Ring::S det = ring.integer(sign);
    for (std::size_t i = 0; i < m.size(); ++i) det = det * m[i][i];
    return det;
}

// Basis of the right null space of `m`, one vector per free column.  Each
// basis vector carries 1 in its free column and the back-substituted pivot
// entries elsewhere, listed in increasing free-column order.
template <class Ring>
std::vector<std::vector<typename Ring::S>> kernel_basis(
    const Ring& ring, Matrix<typename Ring::S> m) {
    using S = typename Ring::S;
    std::vector<std::vector<S>> basis;
    if (m.empty()) return basis;
    const std::size_t cols = m.front().size();
    int sign = 0;
    auto pivots = detail::echelonize(ring, m, sign);
    // Normalize pivot rows and clear entries above the pivots.
    for (std::size_t r = pivots.size(); r-- > 0;) {
        const std::size_t pc = pivots[r];
        S inv = ring.integer(1) / m[r][pc];
        for (std::size_t c = pc; c < cols; ++c) m[r][c] = m[r][c] * inv;
        for (std::size_t up = 0; up < r; ++up) {
            if (ring.is_zero(m[up][pc])) continue;
            S factor = m[up][pc];
            for (std::size_t c = pc; c < cols; ++c)
                m[up][c] = m[up][c] - factor * m[r][c];
        }
    }
    std::vector<bool> is_pivot(cols, false);
    for (auto pc : pivots) is_pivot[pc] = true;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<S> vec(cols, ring.integer(0));
        vec[free] = ring.integer(1);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            vec[pivots[r]] = ring.integer(0) - m[r][free];
        basis.push_back(std::move(vec));
    }
    return basis;
}

}  // namespace qvir
