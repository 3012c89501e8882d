#include "csgbvi/MatrixGame.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "csgbvi/Simplex.h"

namespace csgbvi {

namespace {

template <typename T>
struct GenericSolution {
    T value{};
    std::vector<T> rowStrategy;
    std::vector<T> colStrategy;
};

template <typename T>
void checkShape(std::vector<std::vector<T>> const& payoff) {
    if (payoff.empty() || payoff.front().empty()) {
        throw std::invalid_argument("matrix game must have at least one row and one column");
    }
    for (auto const& row : payoff) {
        if (row.size() != payoff.front().size()) {
            throw std::invalid_argument("matrix game payoff is not rectangular");
        }
    }
}

// Pure saddle point: max of row minima meets min of column maxima.
template <typename T>
bool findSaddle(std::vector<std::vector<T>> const& payoff, GenericSolution<T>& out) {
    size_t const n = payoff.size();
    size_t const m = payoff.front().size();

    size_t bestRow = 0;
    T maximin{};
    for (size_t i = 0; i < n; i++) {
        T rowMin = payoff[i][0];
        for (size_t j = 1; j < m; j++) {
            rowMin = std::min(rowMin, payoff[i][j]);
        }
        if (i == 0 || rowMin > maximin) {
            maximin = rowMin;
            bestRow = i;
        }
    }
    size_t bestCol = 0;
    T minimax{};
    for (size_t j = 0; j < m; j++) {
        T colMax = payoff[0][j];
        for (size_t i = 1; i < n; i++) {
            colMax = std::max(colMax, payoff[i][j]);
        }
        if (j == 0 || colMax < minimax) {
            minimax = colMax;
            bestCol = j;
        }
    }
    if (!(maximin == minimax)) {
        return false;
    }
    out.value = maximin;
    out.rowStrategy.assign(n, T{});
    out.colStrategy.assign(m, T{});
    out.rowStrategy[bestRow] = T{1};
    out.colStrategy[bestCol] = T{1};
    return true;
}

// Full LP route: one LP per player, value variable split into v+ - v-.
template <typename T>
GenericSolution<T> solveGame(std::vector<std::vector<T>> const& payoff) {
    checkShape(payoff);
    GenericSolution<T> out;
    if (findSaddle(payoff, out)) {
        return out;
    }

    size_t const n = payoff.size();
    size_t const m = payoff.front().size();

    // Row player: maximize v st. sum_i x_i z_ij >= v for all j, sum x = 1.
    {
        lp::LpProblem<T> prob;
        prob.objective.assign(n + 2, T{});
        prob.objective[n] = T{1};
        prob.objective[n + 1] = T{-1};
        for (size_t j = 0; j < m; j++) {
            std::vector<T> row(n + 2, T{});
            for (size_t i = 0; i < n; i++) {
                row[i] = payoff[i][j];
            }
            row[n] = T{-1};
            row[n + 1] = T{1};
            prob.rows.push_back(std::move(row));
            prob.relations.push_back(lp::Relation::GreaterEq);
            prob.rhs.push_back(T{});
        }
        std::vector<T> sumRow(n + 2, T{});
        for (size_t i = 0; i < n; i++) {
            sumRow[i] = T{1};
        }
        prob.rows.push_back(std::move(sumRow));
        prob.relations.push_back(lp::Relation::Equal);
        prob.rhs.push_back(T{1});

        auto res = lp::solveLp(prob);
        if (res.status != lp::LpStatus::Optimal) {
            throw std::logic_error("matrix game row LP did not solve");
        }
        out.value = res.objectiveValue;
        out.rowStrategy.assign(res.solution.begin(), res.solution.begin() + n);
    }

    // Column player: minimize w st. sum_j y_j z_ij <= w for all i, sum y = 1.
    {
        lp::LpProblem<T> prob;
        prob.objective.assign(m + 2, T{});
        prob.objective[m] = T{-1};
        prob.objective[m + 1] = T{1};
        for (size_t i = 0; i < n; i++) {
            std::vector<T> row(m + 2, T{});
            for (size_t j = 0; j < m; j++) {
                row[j] = payoff[i][j];
            }
            row[m] = T{-1};
            row[m + 1] = T{1};
            prob.rows.push_back(std::move(row));
            prob.relations.push_back(lp::Relation::LessEq);
            prob.rhs.push_back(T{});
        }
        std::vector<T> sumRow(m + 2, T{});
        for (size_t j = 0; j < m; j++) {
            sumRow[j] = T{1};
        }
        prob.rows.push_back(std::move(sumRow));
        prob.relations.push_back(lp::Relation::Equal);
        prob.rhs.push_back(T{1});

        auto res = lp::solveLp(prob);
        if (res.status != lp::LpStatus::Optimal) {
            throw std::logic_error("matrix game column LP did not solve");
        }
        out.colStrategy.assign(res.solution.begin(), res.solution.begin() + m);
    }
    return out;
}

void checkSubset(std::vector<int> const& subset, size_t limit, char const* what) {
    if (subset.empty()) {
        throw std::invalid_argument(std::string(what) + " subset must not be empty");
    }
    std::set<int> seen;
    for (int idx : subset) {
        if (idx < 0 || static_cast<size_t>(idx) >= limit) {
            throw std::invalid_argument(std::string(what) + " index out of range");
        }
        if (!seen.insert(idx).second) {
            throw std::invalid_argument(std::string(what) + " subset has duplicates");
        }
    }
}

}  // namespace

GameSolution solve(MatrixGame const& game) {
    auto sol = solveGame<Rational>(game.payoff);

    // Exact self-check of both guarantee invariants; cheap at this scale.
    size_t const n = game.rowCount();
    size_t const m = game.colCount();
    for (size_t j = 0; j < m; j++) {
        Rational got = 0;
        for (size_t i = 0; i < n; i++) {
            got += sol.rowStrategy[i] * game.payoff[i][j];
        }
        if (got < sol.value) {
            throw std::logic_error("row strategy fails its guarantee");
        }
    }
    for (size_t i = 0; i < n; i++) {
        Rational got = 0;
        for (size_t j = 0; j < m; j++) {
            got += sol.colStrategy[j] * game.payoff[i][j];
        }
        if (got > sol.value) {
            throw std::logic_error("column strategy fails its guarantee");
        }
    }
    return GameSolution{sol.value, std::move(sol.rowStrategy), std::move(sol.colStrategy)};
}

Rational restrictedValue(MatrixGame const& game, std::vector<int> const& rows,
                         std::vector<int> const& cols) {
    checkSubset(rows, game.rowCount(), "row");
    checkSubset(cols, game.colCount(), "column");
    MatrixGame sub;
    for (int i : rows) {
        sub.rowLabels.push_back(game.rowLabels.empty() ? "" : game.rowLabels[i]);
        std::vector<Rational> row;
        for (int j : cols) {
            row.push_back(game.payoff[i][j]);
        }
        sub.payoff.push_back(std::move(row));
    }
    for (int j : cols) {
        sub.colLabels.push_back(game.colLabels.empty() ? "" : game.colLabels[j]);
    }
    return solve(sub).value;
}

bool optimalSupportExists(MatrixGame const& game, Side side, std::vector<int> const& support) {
    size_t const limit = side == Side::Row ? game.rowCount() : game.colCount();
    checkSubset(support, limit, side == Side::Row ? "row" : "column");
    Rational const value = solve(game).value;

    // Variables: one probability per support action, then t = min probability.
    size_t const k = support.size();
    lp::LpProblem<Rational> prob;
    prob.objective.assign(k + 1, 0);
    prob.objective[k] = 1;

    std::vector<Rational> sumRow(k + 1, 0);
    for (size_t a = 0; a < k; a++) {
        sumRow[a] = 1;
    }
    prob.rows.push_back(std::move(sumRow));
    prob.relations.push_back(lp::Relation::Equal);
    prob.rhs.push_back(1);

    size_t const opposing = side == Side::Row ? game.colCount() : game.rowCount();
    for (size_t o = 0; o < opposing; o++) {
        std::vector<Rational> row(k + 1, 0);
        for (size_t a = 0; a < k; a++) {
            row[a] = side == Side::Row ? game.payoff[support[a]][o] : game.payoff[o][support[a]];
        }
        prob.rows.push_back(std::move(row));
        prob.relations.push_back(side == Side::Row ? lp::Relation::GreaterEq
                                                   : lp::Relation::LessEq);
        prob.rhs.push_back(value);
    }
    for (size_t a = 0; a < k; a++) {
        std::vector<Rational> row(k + 1, 0);
        row[a] = 1;
        row[k] = -1;
        prob.rows.push_back(std::move(row));
        prob.relations.push_back(lp::Relation::GreaterEq);
        prob.rhs.push_back(0);
    }

    auto res = lp::solveLp(prob);
    return res.status == lp::LpStatus::Optimal && res.objectiveValue > 0;
}

Rational maxProbOnAction(MatrixGame const& game, Side side, std::vector<int> const& allowed,
                         int action) {
    size_t const limit = side == Side::Row ? game.rowCount() : game.colCount();
    checkSubset(allowed, limit, side == Side::Row ? "row" : "column");
    auto pos = std::find(allowed.begin(), allowed.end(), action);
    if (pos == allowed.end()) {
        throw std::invalid_argument("action must be contained in the allowed set");
    }
    Rational const value = solve(game).value;

    size_t const k = allowed.size();
    lp::LpProblem<Rational> prob;
    prob.objective.assign(k, 0);
    prob.objective[static_cast<size_t>(pos - allowed.begin())] = 1;

    std::vector<Rational> sumRow(k, 1);
    prob.rows.push_back(std::move(sumRow));
    prob.relations.push_back(lp::Relation::Equal);
    prob.rhs.push_back(1);

    size_t const opposing = side == Side::Row ? game.colCount() : game.rowCount();
    for (size_t o = 0; o < opposing; o++) {
        std::vector<Rational> row(k, 0);
        for (size_t a = 0; a < k; a++) {
            row[a] = side == Side::Row ? game.payoff[allowed[a]][o] : game.payoff[o][allowed[a]];
        }
        prob.rows.push_back(std::move(row));
        prob.relations.push_back(side == Side::Row ? lp::Relation::GreaterEq
                                                   : lp::Relation::LessEq);
        prob.rhs.push_back(value);
    }

    auto res = lp::solveLp(prob);
    if (res.status != lp::LpStatus::Optimal) {
        throw std::runtime_error("infeasible: no optimal strategy within the allowed actions");
    }
    return res.objectiveValue;
}

double solveApprox(std::vector<std::vector<double>> const& payoff,
                   std::vector<double>* rowStrategy) {
    try {
        auto sol = solveGame<double>(payoff);
        if (rowStrategy != nullptr) {
            *rowStrategy = sol.rowStrategy;
        }
        return sol.value;
    } catch (std::logic_error const&) {
        // Degenerate pivot sequences can defeat the tolerance-based tableau.
        // Doubles are dyadic rationals, so the exact solver can take over
        // losslessly; this path is rare and only costs time.
        std::vector<std::vector<Rational>> exact(payoff.size());
        for (size_t i = 0; i < payoff.size(); i++) {
            for (double entry : payoff[i]) {
                exact[i].emplace_back(entry);
            }
        }
        auto sol = solveGame<Rational>(exact);
        if (rowStrategy != nullptr) {
            rowStrategy->clear();
            for (Rational const& p : sol.rowStrategy) {
                rowStrategy->push_back(p.get_d());
            }
        }
        return sol.value.get_d();
    }
}

}  // namespace csgbvi
