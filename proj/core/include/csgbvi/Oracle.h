#pragma once

#include "csgbvi/Csg.h"
#include "csgbvi/Valuation.h"

namespace csgbvi {

/*!
 * Independent lower-bound estimate of the per-state value, for testing.
 *
 * A family of stationary row-player strategies with probabilities on the
 * 1/gridResolution grid is scored exactly: fixing the row strategy turns the
 * game into a column-player MDP, whose best response is computed by
 * enumerating every pure memoryless column policy and solving the induced
 * Markov chain as an exact rational linear system. The candidate family
 * combines value-iteration guidance at several horizons, the uniform
 * strategy, and (on very small games) every pure row profile; the result is
 * the component-wise maximum, a certified lower bound with one-sided error
 * on the order of 1/gridResolution when the family contains a near-optimal
 * strategy.
 *
 * @throws std::runtime_error ("size limits exceeded") when the normalized
 *         game has more than 8 non-sink states or more than 4 actions for
 *         either player at some non-sink state.
 * @throws std::invalid_argument when gridResolution < 1.
 */
Valuation oracleValue(NormalizedCsg const& norm, int gridResolution);

}  // namespace csgbvi
