#pragma once

#include <gmpxx.h>

#include <string>

namespace csgbvi {

using Rational = mpq_class;

/*!
 * Parses an exact rational from text.
 *
 * Accepted forms: "p/q" fractions, integers, decimal literals and scientific
 * notation ("0.25", "1e-3", "2.5E-2"). Decimal input converts exactly
 * (0.2 becomes 1/5, never a binary double).
 *
 * @throws std::invalid_argument if the text is not a rational number or the
 *         denominator is zero.
 */
Rational parseRational(std::string const& text);

/// Canonical fraction rendering: "p/q", or plain "p" when the denominator is 1.
std::string toFraction(Rational const& value);

/*!
 * Decimal rendering with a fixed number of significant digits (half-up
 * rounding), computed in integer arithmetic. Used by the text output mode.
 */
std::string toDecimal(Rational const& value, int significantDigits = 12);

/*!
 * Nearest simple rational within the given tolerance of x, found by walking
 * the continued-fraction convergents. Used to re-rationalize floating-point
 * Bellman iterates before exact classification.
 */
Rational snapToRational(double x, double tolerance = 1e-9);

}  // namespace csgbvi
