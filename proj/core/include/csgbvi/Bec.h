#pragma once

#include <vector>

#include "csgbvi/Csg.h"
#include "csgbvi/MatrixGame.h"
#include "csgbvi/Mec.h"
#include "csgbvi/Rational.h"

namespace csgbvi {

/// Cap on the number of row actions a state may have before the support
/// enumeration in computeHazard refuses to run. Read from the environment
/// variable CSGBVI_SUPPORT_CAP, default 12.
int supportEnumerationCap();

/// The one-shot matrix game at state s under valuation v: entry (i, j) is the
/// expected value of the successor drawn by action pair (i, j).
MatrixGame matrixGameAt(Csg const& g, int s, std::vector<Rational> const& v);

/// True iff the row support escapes X against every column: for each column
/// action there is some row action in the support whose successors are not
/// all inside X. Leaving-ness of a mixed strategy depends only on its
/// support, because the destination set of a mixed pair is the union over the
/// pure pairs it mixes.
bool supportLeaves(Csg const& g, int s, std::vector<int> const& rowSupport, std::vector<char> const& inX);

/// Supports of the hazardous row strategies at s with respect to the state
/// set X under valuation v: optimal strategies that some column action traps
/// inside X and that no optimal leaving strategy weakly dominates. Returns
/// the empty list when no hazardous strategy exists. When X has no leaving
/// support at all, every optimal strategy is trivially hazardous and all
/// optimal supports are returned.
///
/// The test works on the finite polytopes of trapped optimal strategies: the
/// dominated ("covered") region is convex, so a hazardous strategy exists iff
/// some vertex of some per-column polytope is uncovered; the reported
/// supports are those of the uncovered vertices.
std::vector<std::vector<int>> computeHazard(Csg const& g, int s, std::vector<char> const& inX,
                                            std::vector<Rational> const& v);

/// Column actions usable by trapping strategies at s: optimal minimizer
/// strategies under which every hazardous action stays inside `stayWithin`.
/// Returns the union of their supports, empty when no optimal minimizer is
/// supported on the staying columns.
std::vector<int> computeTrap(Csg const& g, int s, std::vector<char> const& stayWithin,
                             std::vector<Rational> const& v, std::vector<int> const& hazardActions);

/// Everything the deflation step needs to know about one state.
struct StateClassification {
    int state = -1;
    std::vector<std::vector<int>> hazardSupports;  // row index sets, sorted
    std::vector<int> hazardActions;                // union of the supports
    std::vector<int> trapColumns;
    std::vector<int> deflRows;  // disjoint from hazardActions by construction
    bool hasExitValue = false;
    Rational exitValue{0};
};

/// Full hazard/trap/defl classification of s including its exit value. X is
/// the candidate state set; root is the end component the surrounding
/// deflation was started from (pass X itself for standalone use). The
/// staying test of trapping strategies runs against root, the escape tests
/// of leaving and deflating strategies against X.
StateClassification classifyState(Csg const& g, int s, std::vector<char> const& inX,
                                  std::vector<char> const& inRoot, std::vector<Rational> const& v);

/// The value the row player can still secure when leaving X at s: the value
/// of the matrix game when no hazard or no trap exists, otherwise the value
/// of the exiting sub-game on deflating rows versus trapping columns (0 when
/// no deflating row remains).
Rational exitValue(Csg const& g, int s, std::vector<char> const& inX, std::vector<char> const& inRoot,
                   std::vector<Rational> const& v);
Rational exitValue(Csg const& g, int s, std::vector<int> const& X, std::vector<Rational> const& v);

struct BestExit {
    Rational value{0};
    std::vector<int> states;  // all argmax states, ascending
};

/// Maximum exit value over the states of X together with every state
/// attaining it.
BestExit bestExit(Csg const& g, std::vector<int> const& X, std::vector<char> const& inRoot,
                  std::vector<Rational> const& v);
BestExit bestExit(Csg const& g, std::vector<int> const& X, std::vector<Rational> const& v);

/// The maximal bloated end components inside the given end component under
/// upper bound u: B collects the states with a nonempty hazard; if B is the
/// whole set it is itself a maximal BEC, if B is empty there is none, and
/// otherwise the search recurses into the maximal ECs of B. Results are
/// ordered by ascending minimum state index.
std::vector<std::vector<int>> findMbecs(Csg const& g, EcSet const& mec, std::vector<Rational> const& u);

struct DeflationEvent {
    std::vector<int> bec;
    Rational bestExitValue{0};
    std::vector<int> bestExits;
};

/// Lowers u inside every maximal BEC of mec to the BEC's best exit value,
/// then recurses into the maximal ECs left after removing the best-exit
/// states. Never increases any entry of u. Appends one event per processed
/// BEC to `events` when non-null, in application order.
void deflate(Csg const& g, EcSet const& mec, std::vector<Rational>& u,
             std::vector<DeflationEvent>* events = nullptr);

/// Standalone BEC analysis of one end component at a fixed valuation, as
/// exposed by the CLI: the maximal BECs with their best exits, plus a
/// per-state classification. States inside an MBEC are classified against
/// it; the remaining states of the MEC only get their hazard supports with
/// respect to the MEC and carry no exit value.
struct BecReport {
    std::vector<std::vector<int>> mbecs;
    std::vector<Rational> bestExitValues;          // parallel to mbecs
    std::vector<std::vector<int>> bestExitStates;  // parallel to mbecs
    std::vector<StateClassification> perState;     // all states of the MEC, ascending
};

BecReport analyzeBecs(Csg const& g, EcSet const& mec, std::vector<Rational> const& u);

}  // namespace csgbvi
