#pragma once

#include <vector>

#include "csgbvi/Csg.h"
#include "csgbvi/Rational.h"

namespace csgbvi {

/// Where a valuation came from. Deflation is only sound on valuations from
/// the valid upper-bound sequence (initial upper bound or deflate-after-
/// Bellman iterates); the tag lets debug builds assert that.
enum class Provenance { Lower, NaiveUpper, ValidUpper, Oracle };

/// Per-state value vector over a normalized game, each entry in [0, 1].
/// The target sink stays pinned to 1 and the losing sink to 0.
struct Valuation {
    std::vector<Rational> values;
    Provenance provenance = Provenance::Lower;
};

/// L_0: zero everywhere except 1 at the target sink.
Valuation initialLower(NormalizedCsg const& norm);

/// U_0: one everywhere except 0 at the losing sink.
Valuation initialUpper(NormalizedCsg const& norm);

}  // namespace csgbvi
