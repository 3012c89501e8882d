#include "csgbvi/Bvi.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "csgbvi/MatrixGame.h"
#include "csgbvi/Mec.h"

namespace csgbvi {

namespace {

void checkStrategy(std::vector<Rational> const& strategy, size_t expected, char const* who) {
    if (strategy.size() != expected) {
        throw std::invalid_argument(std::string(who) + " strategy has " + std::to_string(strategy.size()) +
                                    " entries, expected " + std::to_string(expected));
    }
    Rational total(0);
    for (Rational const& p : strategy) {
        if (p < 0) {
            throw std::invalid_argument(std::string(who) + " strategy has a negative probability " + toFraction(p));
        }
        total += p;
    }
    if (total != 1) {
        throw std::invalid_argument(std::string(who) + " strategy sums to " + toFraction(total) + ", expected 1");
    }
}

Valuation bellmanExact(Csg const& g, Valuation const& v) {
    Valuation next = v;
    for (int s = 0; s < g.stateCount(); ++s) {
        next.values[static_cast<size_t>(s)] = solve(matrixGameAt(g, s, v.values)).value;
    }
    return next;
}

Valuation bellmanFloat(Csg const& g, Valuation const& v) {
    std::vector<double> approx(v.values.size());
    for (size_t i = 0; i < v.values.size(); ++i) {
        approx[i] = v.values[i].get_d();
    }
    Valuation next = v;
    for (int s = 0; s < g.stateCount(); ++s) {
        size_t const rows = g.actionsReach[static_cast<size_t>(s)].size();
        size_t const cols = g.actionsSafe[static_cast<size_t>(s)].size();
        std::vector<std::vector<double>> payoff(rows, std::vector<double>(cols, 0.0));
        for (size_t i = 0; i < rows; ++i) {
            for (size_t j = 0; j < cols; ++j) {
                double expected = 0.0;
                for (auto const& [to, prob] : g.dist(s, static_cast<int>(i), static_cast<int>(j)).entries) {
                    expected += prob.get_d() * approx[static_cast<size_t>(to)];
                }
                payoff[i][j] = expected;
            }
        }
        Rational snapped = snapToRational(solveApprox(payoff), 1e-9);
        if (snapped < 0) {
            snapped = 0;
        } else if (snapped > 1) {
            snapped = 1;
        }
        next.values[static_cast<size_t>(s)] = snapped;
    }
    return next;
}

}  // namespace

Valuation initialLower(NormalizedCsg const& norm) {
    Valuation v;
    v.provenance = Provenance::Lower;
    v.values.assign(static_cast<size_t>(norm.game.stateCount()), Rational(0));
    v.values[static_cast<size_t>(norm.targetSink)] = 1;
    return v;
}

Valuation initialUpper(NormalizedCsg const& norm) {
    Valuation v;
    v.provenance = Provenance::ValidUpper;
    v.values.assign(static_cast<size_t>(norm.game.stateCount()), Rational(1));
    v.values[static_cast<size_t>(norm.losingSink)] = 0;
    return v;
}

Rational preLocal(Csg const& g, std::vector<Rational> const& v, int s, std::vector<Rational> const& rho,
                  std::vector<Rational> const& sigma) {
    if (s < 0 || s >= g.stateCount()) {
        throw std::invalid_argument("preLocal: state index " + std::to_string(s) + " out of range");
    }
    if (v.size() != static_cast<size_t>(g.stateCount())) {
        throw std::invalid_argument("preLocal: valuation size does not match the game");
    }
    checkStrategy(rho, g.actionsReach[static_cast<size_t>(s)].size(), "row");
    checkStrategy(sigma, g.actionsSafe[static_cast<size_t>(s)].size(), "column");

    Rational total(0);
    for (size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] == 0) {
            continue;
        }
        for (size_t j = 0; j < sigma.size(); ++j) {
            if (sigma[j] == 0) {
                continue;
            }
            Rational expected(0);
            for (auto const& [to, prob] : g.dist(s, static_cast<int>(i), static_cast<int>(j)).entries) {
                expected += prob * v[static_cast<size_t>(to)];
            }
            total += rho[i] * sigma[j] * expected;
        }
    }
    return total;
}

Valuation preOperator(Csg const& g, Valuation const& v) {
    if (v.values.size() != static_cast<size_t>(g.stateCount())) {
        throw std::invalid_argument("preOperator: valuation size does not match the game");
    }
    return bellmanExact(g, v);
}

Valuation runLower(NormalizedCsg const& norm, std::uint64_t iters) {
    Valuation v = initialLower(norm);
    for (std::uint64_t k = 0; k < iters; ++k) {
        v = bellmanExact(norm.game, v);
    }
    return v;
}

Valuation runNaiveUpper(NormalizedCsg const& norm, std::uint64_t iters) {
    Valuation v = initialUpper(norm);
    v.provenance = Provenance::NaiveUpper;
    for (std::uint64_t k = 0; k < iters; ++k) {
        v = bellmanExact(norm.game, v);
    }
    return v;
}

BviResult bvi(NormalizedCsg const& norm, BviOptions const& options) {
    if (options.epsilon <= 0) {
        throw std::invalid_argument("epsilon must be positive, got " + toFraction(options.epsilon));
    }
    Csg const& g = norm.game;

    BviResult res;
    res.epsilon = options.epsilon;
    Valuation lower = initialLower(norm);
    Valuation upper = initialUpper(norm);
    if (options.mode != IterationMode::Deflated) {
        upper.provenance = Provenance::NaiveUpper;
    }

    std::vector<EcSet> mecs;
    if (options.mode == IterationMode::Deflated) {
        std::vector<int> nonSink;
        for (int s = 0; s < g.stateCount(); ++s) {
            if (s != norm.targetSink && s != norm.losingSink) {
                nonSink.push_back(s);
            }
        }
        mecs = findMecs(g, nonSink);
    }

    auto boundsMeet = [&](std::vector<Rational> const& lo, std::vector<Rational> const& hi) {
        if (options.initialOnly) {
            return hi[static_cast<size_t>(g.initial)] - lo[static_cast<size_t>(g.initial)] <= options.epsilon;
        }
        for (size_t i = 0; i < lo.size(); ++i) {
            if (hi[i] - lo[i] > options.epsilon) {
                return false;
            }
        }
        return true;
    };

    for (std::uint64_t k = 1; k <= options.maxIters; ++k) {
        std::vector<Rational> const previousLower = lower.values;
        lower = options.floatBellman ? bellmanFloat(g, lower) : bellmanExact(g, lower);
        if (options.mode != IterationMode::LowerOnly) {
            upper = options.floatBellman ? bellmanFloat(g, upper) : bellmanExact(g, upper);
        }

        IterationRecord record;
        record.iteration = k;
        if (options.mode == IterationMode::Deflated) {
            for (EcSet const& mec : mecs) {
                deflate(g, mec, upper.values, options.recordTrace ? &record.deflations : nullptr);
            }
        }
        res.iterations = k;
        if (options.recordTrace) {
            record.lower = lower.values;
            record.upper = upper.values;
            res.trace.push_back(std::move(record));
        }

        bool stop = false;
        if (options.mode == IterationMode::LowerOnly) {
            stop = true;
            for (size_t i = 0; i < lower.values.size(); ++i) {
                Rational diff = lower.values[i] - previousLower[i];
                if (diff < 0) {
                    diff = -diff;
                }
                if (diff > options.epsilon) {
                    stop = false;
                    break;
                }
            }
        } else {
            stop = boundsMeet(lower.values, upper.values);
        }
        if (stop) {
            res.converged = true;
            break;
        }
    }

    res.lower = std::move(lower);
    res.upper = std::move(upper);
    return res;
}

}  // namespace csgbvi
