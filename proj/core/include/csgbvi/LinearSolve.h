#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "csgbvi/Rational.h"

namespace csgbvi {

/// Solves the square system a*x = b by Gauss-Jordan elimination in exact
/// rational arithmetic. Returns nullopt when a is singular.
inline std::optional<std::vector<Rational>> solveLinearSystem(std::vector<std::vector<Rational>> a,
                                                              std::vector<Rational> b) {
    size_t const n = a.size();
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot == n) {
            return std::nullopt;
        }
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        Rational const scale = Rational(1) / a[col][col];
        for (size_t j = col; j < n; ++j) {
            a[col][j] *= scale;
        }
        b[col] *= scale;
        for (size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) {
                continue;
            }
            Rational const factor = a[row][col];
            for (size_t j = col; j < n; ++j) {
                a[row][j] -= factor * a[col][j];
            }
            b[row] -= factor * b[col];
        }
    }
    return b;
}

}  // namespace csgbvi
