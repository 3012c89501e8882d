#pragma once

#include <utility>
#include <vector>

#include "csgbvi/Csg.h"

namespace csgbvi {

/// An end component of the game viewed as a one-player MDP whose actions are
/// the joint (row, col) pairs: a set of states together with, per state, the
/// pairs whose whole successor support stays inside the set. The set is
/// strongly connected through those pairs and every state keeps at least one.
struct EcSet {
    std::vector<int> states;  // ascending
    /// enabledPairs[k] lists the staying (rowIdx, colIdx) pairs of states[k],
    /// ordered lexicographically.
    std::vector<std::vector<std::pair<int, int>>> enabledPairs;
};

/// Maximal end components of the sub-game induced by restrictTo, computed by
/// the standard iterated SCC-and-prune decomposition. The result sets are
/// pairwise disjoint and ordered by ascending minimum state index.
std::vector<EcSet> findMecs(Csg const& g, std::vector<int> const& restrictTo);

/// True iff candidate is an end component: every state has at least one joint
/// action pair whose successors stay inside candidate, and the induced graph
/// over those pairs is strongly connected.
bool isEc(Csg const& g, std::vector<int> const& candidate);

}  // namespace csgbvi
