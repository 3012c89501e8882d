#pragma once

#include <string>
#include <vector>

#include "csgbvi/Bec.h"
#include "csgbvi/Bvi.h"
#include "csgbvi/Csg.h"
#include "csgbvi/Mec.h"
#include "csgbvi/Rational.h"

namespace csgbvi {

/*!
 * Parses a JSON valuation document, an object mapping original state names to
 * rationals ("p/q" strings, decimal strings, or numbers), into a per-state
 * vector over the normalized game. Every state that normalization kept must
 * be present; entries for collapsed states (targets and the winning region)
 * are range-checked and otherwise ignored since the sinks stay pinned to 1
 * and 0.
 *
 * @throws std::invalid_argument on malformed JSON, names not declared by the
 *         model, values outside [0, 1], or missing kept states.
 */
std::vector<Rational> parseValuationFile(std::string const& text, Csg const& original,
                                         NormalizedCsg const& norm);

/// JSON rendering of one end component's BEC analysis. States and actions
/// appear by name, rationals as "p/q" strings, absent exit values as null.
/// Field and element order is deterministic; indent < 0 emits one line.
std::string becReportToJson(Csg const& g, EcSet const& mec, BecReport const& report, int indent = 2);

/// One trace line: iteration number, per-state lower and upper bounds, and
/// the iteration's deflation events in application order. Single line, no
/// trailing newline.
std::string iterationRecordToJsonLine(Csg const& g, IterationRecord const& record);

/// CSV rendering of a full trace with header "iteration,state,lower,upper",
/// one row per (iteration, state), values as "p/q".
std::string traceToCsv(Csg const& g, std::vector<IterationRecord> const& trace);

}  // namespace csgbvi
