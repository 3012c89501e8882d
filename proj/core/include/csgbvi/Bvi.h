#pragma once

#include <cstdint>
#include <vector>

#include "csgbvi/Bec.h"
#include "csgbvi/Csg.h"
#include "csgbvi/Valuation.h"

namespace csgbvi {

/// Expected next-step value at s when the players mix according to rho and
/// sigma over their enabled actions (one probability per action, in order).
Rational preLocal(Csg const& g, std::vector<Rational> const& v, int s, std::vector<Rational> const& rho,
                  std::vector<Rational> const& sigma);

/// One Bellman update: every state's value becomes the value of its one-shot
/// matrix game under v. Absorbing states, in particular the two sinks of a
/// normalized game, keep their value.
Valuation preOperator(Csg const& g, Valuation const& v);

/// k-fold Bellman iteration from L_0 (1 at the target sink, 0 elsewhere).
/// Converges to the game value from below.
Valuation runLower(NormalizedCsg const& norm, std::uint64_t iters);

/// k-fold Bellman iteration from U_0 (0 at the losing sink, 1 elsewhere).
/// Stalls above the value wherever a bloated end component exists; the
/// deflating iteration in bvi() is the fix.
Valuation runNaiveUpper(NormalizedCsg const& norm, std::uint64_t iters);

enum class IterationMode { Deflated, Naive, LowerOnly };

struct BviOptions {
    Rational epsilon = Rational(1, 1000000);
    std::uint64_t maxIters = 1000000;
    IterationMode mode = IterationMode::Deflated;
    /// Check convergence at the initial state only instead of every state.
    bool initialOnly = false;
    /// Run the Bellman updates in double precision, re-rationalizing each
    /// result via continued fractions (tolerance 1e-9) so the deflation
    /// classification stays exact. Profiling aid; bounds become approximate.
    bool floatBellman = false;
    bool recordTrace = true;
};

/// Snapshot of one iteration: bounds at the end of the iteration (lower
/// after the Bellman update, upper additionally after deflation) plus the
/// deflation events in application order.
struct IterationRecord {
    std::uint64_t iteration = 0;
    std::vector<Rational> lower;
    std::vector<Rational> upper;
    std::vector<DeflationEvent> deflations;
};

struct BviResult {
    Valuation lower;
    Valuation upper;
    std::uint64_t iterations = 0;
    Rational epsilon{0};
    bool converged = false;
    std::vector<IterationRecord> trace;
};

/// Bounded value iteration: per iteration, Bellman-update both bounds, then
/// deflate the upper bound inside every maximal end component (computed once
/// up front; the bloated-EC search inside them reruns every iteration since
/// it depends on the upper bound). Stops when U - L <= epsilon, component
/// wise by default or at the initial state only on request, or when maxIters
/// runs out (converged=false, bounds still sound).
///
/// Naive mode skips deflation and demonstrates the stall. LowerOnly mode
/// iterates just L and stops on the Cauchy residual |L_k - L_{k-1}| <=
/// epsilon, a heuristic without an error guarantee; the returned upper bound
/// stays at U_0. In every mode [L, U] brackets the game value (in float mode
/// up to the documented re-rationalization tolerance).
BviResult bvi(NormalizedCsg const& norm, BviOptions const& options = {});

}  // namespace csgbvi
