#pragma once

#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace csgbvi::lp {

enum class Relation { LessEq, Equal, GreaterEq };
enum class LpStatus { Optimal, Infeasible, Unbounded };

/*!
 * A linear program in the form
 *     maximize c·x  subject to  A x (<=|=|>=) b,  x >= 0.
 */
template <typename T>
struct LpProblem {
    std::vector<T> objective;
    std::vector<std::vector<T>> rows;
    std::vector<Relation> relations;
    std::vector<T> rhs;
};

template <typename T>
struct LpResult {
    LpStatus status{LpStatus::Infeasible};
    T objectiveValue{};
    std::vector<T> solution;
};

namespace detail {

template <typename T>
bool isPositive(T const& v) {
    if constexpr (std::is_floating_point_v<T>) {
        return v > 1e-11;
    } else {
        return v > 0;
    }
}

template <typename T>
bool isNegative(T const& v) {
    if constexpr (std::is_floating_point_v<T>) {
        return v < -1e-11;
    } else {
        return v < 0;
    }
}

template <typename T>
bool isZero(T const& v) {
    return !isPositive(v) && !isNegative(v);
}

/*!
 * Dense simplex tableau with Bland's anti-cycling rule. Exact when T is a
 * rational type; tolerance-based when T is floating point.
 */
template <typename T>
class Tableau {
   public:
    // rows: m x (totalCols), last column is the right-hand side.
    Tableau(std::vector<std::vector<T>> rows, std::vector<size_t> basis, size_t totalCols)
        : rows_(std::move(rows)), basis_(std::move(basis)), totalCols_(totalCols) {}

    // Runs the simplex on the given objective coefficients (maximization).
    // Returns false when the problem is unbounded in the improving direction.
    bool maximize(std::vector<T> const& objective, std::vector<bool> const& allowedCols) {
        buildObjectiveRow(objective);
        while (true) {
            size_t entering = totalCols_;
            for (size_t j = 0; j < totalCols_; j++) {
                if (allowedCols[j] && isNegative(objRow_[j])) {
                    entering = j;  // Bland: smallest improving index
                    break;
                }
            }
            if (entering == totalCols_) {
                return true;
            }
            size_t leaving = rows_.size();
            for (size_t i = 0; i < rows_.size(); i++) {
                if (!isPositive(rows_[i][entering])) {
                    continue;
                }
                if (leaving == rows_.size()) {
                    leaving = i;
                    continue;
                }
                T lhs = rhs(i) * rows_[leaving][entering];
                T rhsv = rhs(leaving) * rows_[i][entering];
                if (lhs < rhsv || (lhs == rhsv && basis_[i] < basis_[leaving])) {
                    leaving = i;
                }
            }
            if (leaving == rows_.size()) {
                return false;
            }
            pivot(leaving, entering);
        }
    }

    void pivot(size_t pivotRow, size_t pivotCol) {
        T const p = rows_[pivotRow][pivotCol];
        for (auto& v : rows_[pivotRow]) {
            v /= p;
        }
        for (size_t i = 0; i < rows_.size(); i++) {
            if (i == pivotRow || isZero(rows_[i][pivotCol])) {
                continue;
            }
            T factor = rows_[i][pivotCol];
            for (size_t j = 0; j <= totalCols_; j++) {
                rows_[i][j] -= factor * rows_[pivotRow][j];
            }
        }
        if (!objRow_.empty() && !isZero(objRow_[pivotCol])) {
            T factor = objRow_[pivotCol];
            for (size_t j = 0; j <= totalCols_; j++) {
                objRow_[j] -= factor * rows_[pivotRow][j];
            }
        }
        basis_[pivotRow] = pivotCol;
    }

    T const& rhs(size_t row) const { return rows_[row][totalCols_]; }
    T objectiveValue() const { return objRow_[totalCols_]; }
    std::vector<size_t> const& basis() const { return basis_; }
    std::vector<std::vector<T>>& rowData() { return rows_; }
    size_t totalCols() const { return totalCols_; }

   private:
    // objRow[j] = z_j - c_j; the rhs cell carries the current objective value.
    void buildObjectiveRow(std::vector<T> const& objective) {
        objRow_.assign(totalCols_ + 1, T{});
        for (size_t j = 0; j < objective.size(); j++) {
            objRow_[j] = -objective[j];
        }
        for (size_t i = 0; i < rows_.size(); i++) {
            size_t b = basis_[i];
            T coeff = b < objective.size() ? objective[b] : T{};
            if (!isZero(coeff)) {
                for (size_t j = 0; j <= totalCols_; j++) {
                    objRow_[j] += coeff * rows_[i][j];
                }
            }
        }
    }

    std::vector<std::vector<T>> rows_;
    std::vector<T> objRow_;
    std::vector<size_t> basis_;
    size_t totalCols_;
};

}  // namespace detail

/*!
 * Two-phase simplex. Exact for rational T (Bland's rule guarantees
 * termination); floating-point T uses small tolerances and is only meant for
 * the approximate guidance paths.
 */
template <typename T>
LpResult<T> solveLp(LpProblem<T> const& prob) {
    size_t const n = prob.objective.size();
    size_t const m = prob.rows.size();
    if (prob.relations.size() != m || prob.rhs.size() != m) {
        throw std::invalid_argument("inconsistent LP dimensions");
    }
    for (auto const& row : prob.rows) {
        if (row.size() != n) {
            throw std::invalid_argument("inconsistent LP row width");
        }
    }

    // Count extra columns: one slack/surplus per inequality, artificials for
    // rows that lack an initial basic variable.
    size_t slackCount = 0;
    for (auto rel : prob.relations) {
        if (rel != Relation::Equal) {
            slackCount++;
        }
    }

    std::vector<std::vector<T>> rows(m);
    std::vector<size_t> basis(m, 0);
    std::vector<size_t> artificialCols;

    size_t slackBase = n;
    size_t artBase = n + slackCount;

    // First pass to learn how many artificials are needed.
    size_t artCount = 0;
    {
        for (size_t i = 0; i < m; i++) {
            bool rhsNegative = detail::isNegative(prob.rhs[i]);
            Relation rel = prob.relations[i];
            if (rhsNegative) {
                rel = rel == Relation::LessEq    ? Relation::GreaterEq
                      : rel == Relation::GreaterEq ? Relation::LessEq
                                                   : Relation::Equal;
            }
            if (rel != Relation::LessEq) {
                artCount++;
            }
        }
    }
    size_t totalCols = n + slackCount + artCount;

    size_t slackIdx = 0;
    size_t artIdx = 0;
    for (size_t i = 0; i < m; i++) {
        std::vector<T> row(totalCols + 1, T{});
        T sign = detail::isNegative(prob.rhs[i]) ? T{-1} : T{1};
        for (size_t j = 0; j < n; j++) {
            row[j] = sign * prob.rows[i][j];
        }
        row[totalCols] = sign * prob.rhs[i];
        Relation rel = prob.relations[i];
        if (detail::isNegative(prob.rhs[i])) {
            rel = rel == Relation::LessEq    ? Relation::GreaterEq
                  : rel == Relation::GreaterEq ? Relation::LessEq
                                               : Relation::Equal;
        }
        if (rel == Relation::LessEq) {
            row[slackBase + slackIdx] = T{1};
            basis[i] = slackBase + slackIdx;
            slackIdx++;
        } else if (rel == Relation::GreaterEq) {
            row[slackBase + slackIdx] = T{-1};
            slackIdx++;
            row[artBase + artIdx] = T{1};
            basis[i] = artBase + artIdx;
            artificialCols.push_back(artBase + artIdx);
            artIdx++;
        } else {
            row[artBase + artIdx] = T{1};
            basis[i] = artBase + artIdx;
            artificialCols.push_back(artBase + artIdx);
            artIdx++;
        }
        rows[i] = std::move(row);
    }

    detail::Tableau<T> tableau(std::move(rows), std::move(basis), totalCols);
    std::vector<bool> allCols(totalCols, true);

    if (!artificialCols.empty()) {
        // Phase 1: maximize -(sum of artificials).
        std::vector<T> phase1(totalCols, T{});
        for (size_t c : artificialCols) {
            phase1[c] = T{-1};
        }
        tableau.maximize(phase1, allCols);
        if (detail::isNegative(tableau.objectiveValue()) ||
            detail::isPositive(tableau.objectiveValue())) {
            return {LpStatus::Infeasible, T{}, {}};
        }
        // Drive any remaining basic artificials out or drop their columns.
        std::vector<bool> isArtificial(totalCols, false);
        for (size_t c : artificialCols) {
            isArtificial[c] = true;
        }
        auto& data = tableau.rowData();
        for (size_t i = 0; i < data.size(); i++) {
            if (!isArtificial[tableau.basis()[i]]) {
                continue;
            }
            size_t col = totalCols;
            for (size_t j = 0; j < totalCols; j++) {
                if (!isArtificial[j] && !detail::isZero(data[i][j])) {
                    col = j;
                    break;
                }
            }
            if (col < totalCols) {
                tableau.pivot(i, col);
            }
            // A fully zero row is redundant; harmless to leave in place since
            // its artificial stays at value zero.
        }
        for (size_t c : artificialCols) {
            allCols[c] = false;
        }
    }

    std::vector<T> phase2(totalCols, T{});
    for (size_t j = 0; j < n; j++) {
        phase2[j] = prob.objective[j];
    }
    if (!tableau.maximize(phase2, allCols)) {
        return {LpStatus::Unbounded, T{}, {}};
    }

    LpResult<T> result;
    result.status = LpStatus::Optimal;
    result.objectiveValue = tableau.objectiveValue();
    result.solution.assign(n, T{});
    for (size_t i = 0; i < tableau.basis().size(); i++) {
        size_t b = tableau.basis()[i];
        if (b < n) {
            result.solution[b] = tableau.rhs(i);
        }
    }
    return result;
}

}  // namespace csgbvi::lp
