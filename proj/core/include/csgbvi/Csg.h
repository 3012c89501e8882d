#pragma once

#include <string>
#include <utility>
#include <vector>

#include "csgbvi/Rational.h"

namespace csgbvi {

/// Discrete probability distribution over state indices.
/// Entries are sorted by state index, strictly positive, and sum to exactly 1.
struct Distribution {
    std::vector<std::pair<int, Rational>> entries;

    /// True when every state in the support is flagged in `member`.
    bool supportWithin(std::vector<char> const& member) const;
};

/// Two-player concurrent stochastic game with a reachability objective.
///
/// Every state carries a nonempty list of actions per player; the joint choice
/// (row action, column action) selects a distribution over successor states.
/// Action lists keep the order of first appearance in the model file, which
/// fixes every iteration order in the solver.
struct Csg {
    std::vector<std::string> states;
    int initial = 0;
    std::vector<int> targets;  // sorted, duplicate-free

    std::vector<std::vector<std::string>> actionsReach;  // row player, per state
    std::vector<std::vector<std::string>> actionsSafe;   // column player, per state

    /// transitions[s][i][j] is the successor distribution for state s under
    /// (actionsReach[s][i], actionsSafe[s][j]).
    std::vector<std::vector<std::vector<Distribution>>> transitions;

    int stateCount() const { return static_cast<int>(states.size()); }
    bool isTarget(int s) const;
    Distribution const& dist(int s, int row, int col) const { return transitions[s][row][col]; }
};

/// Parses the JSON model format and validates it into a Csg.
///
/// Expected document shape:
///   {
///     "states": ["s0", ...],
///     "initial": "s0",
///     "targets": ["s1", ...],
///     "transitions": [
///       {"from": "s0", "aR": "a", "aS": "b", "to": [{"state": "s1", "prob": "1/3"}, ...]},
///       ...
///     ]
///   }
/// Probabilities may be strings ("1/3", "0.25") or JSON numbers; both are
/// converted to exact rationals. Throws std::invalid_argument with a message
/// naming the offending record on any validation failure.
Csg parseCsg(std::string const& text);

/// Reads a model file from disk and parses it; errors are prefixed with the path.
Csg loadCsgFile(std::string const& path);

/// Set W of states from which the column player can keep the play away from
/// the targets forever (value zero states). Computed by the monotone fixpoint
///   W_0 = S \ F,  W_{k+1} = { s in S \ F | some col action keeps every row
///                             action's successors inside W_k },
/// which stabilizes within |S| rounds. Result is sorted ascending.
std::vector<int> computeWinningRegion(Csg const& g);

/// Game with all targets collapsed into one absorbing target sink and the
/// whole winning region W collapsed into one absorbing losing sink. The two
/// sinks are the last two states and loop via a single ("-","-") action pair.
struct NormalizedCsg {
    Csg game;
    int targetSink = -1;
    int losingSink = -1;
    std::vector<int> winningRegion;  // indices into the ORIGINAL game, sorted
    std::vector<int> stateMap;       // original state index -> index in `game`
};

/// Collapses targets and the winning region into absorbing sinks, redirecting
/// and merging all inbound probability mass. Values of the remaining states
/// are unchanged by this transformation.
NormalizedCsg normalize(Csg const& g);

}  // namespace csgbvi
