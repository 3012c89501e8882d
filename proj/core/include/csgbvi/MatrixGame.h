#pragma once

#include <string>
#include <vector>

#include "csgbvi/Rational.h"

namespace csgbvi {

/// Zero-sum matrix game. Rows belong to the maximizing player (R),
/// columns to the minimizing player (S). Payoff entries must be in mpq
/// canonical form (mpq_class(n, d) does not reduce; call canonicalize()).
struct MatrixGame {
    std::vector<std::string> rowLabels;
    std::vector<std::string> colLabels;
    std::vector<std::vector<Rational>> payoff;

    size_t rowCount() const { return payoff.size(); }
    size_t colCount() const { return payoff.empty() ? 0 : payoff.front().size(); }
};

struct GameSolution {
    Rational value;
    std::vector<Rational> rowStrategy;  // indexed like rowLabels
    std::vector<Rational> colStrategy;  // indexed like colLabels
};

enum class Side { Row, Col };

/*!
 * Exact value and one optimal strategy per player.
 *
 * Pure saddle points are returned directly; otherwise both players' LPs are
 * solved with the exact simplex. The returned strategies are verified to
 * guarantee the value against every opposing pure action, exactly.
 */
GameSolution solve(MatrixGame const& game);

/// Value of the sub-game restricted to the given row/column index subsets.
/// @throws std::invalid_argument on empty or out-of-range subsets.
Rational restrictedValue(MatrixGame const& game, std::vector<int> const& rows,
                         std::vector<int> const& cols);

/*!
 * Whether the given player has an optimal strategy whose support is exactly
 * the given action set. Decided by the LP "maximize the minimum probability
 * over the support subject to optimality"; true iff the optimum is positive.
 */
bool optimalSupportExists(MatrixGame const& game, Side side, std::vector<int> const& support);

/*!
 * Maximum probability an optimal strategy restricted to `allowed` can place
 * on `action`. Zero means no such optimal strategy uses the action.
 *
 * @throws std::runtime_error ("infeasible") when no optimal strategy with
 *         support inside `allowed` exists at all.
 */
Rational maxProbOnAction(MatrixGame const& game, Side side, std::vector<int> const& allowed,
                         int action);

/// Floating-point value + row strategy, for the approximate guidance paths
/// (value-iteration heuristics). Never used for classification.
double solveApprox(std::vector<std::vector<double>> const& payoff,
                   std::vector<double>* rowStrategy = nullptr);

}  // namespace csgbvi
