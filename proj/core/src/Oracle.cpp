#include "csgbvi/Oracle.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

#include "csgbvi/LinearSolve.h"
#include "csgbvi/MatrixGame.h"

namespace csgbvi {

namespace {

/// Row strategy as grid numerators: grid[s][a] / resolution, summing to
/// resolution per state.
using GridStrategy = std::vector<std::vector<long>>;

std::vector<int> nonSinkStates(NormalizedCsg const& norm) {
    std::vector<int> states;
    for (int s = 0; s < norm.game.stateCount(); ++s) {
        if (s != norm.targetSink && s != norm.losingSink) {
            states.push_back(s);
        }
    }
    return states;
}

/// Largest-remainder rounding of a nonnegative weight vector onto the integer
/// grid summing to `resolution`. Ties go to the lowest index, so the result
/// is deterministic.
std::vector<long> snapWeights(std::vector<double> weights, long resolution) {
    size_t const n = weights.size();
    double total = 0;
    for (double& w : weights) {
        if (!(w > 0)) {
            w = 0;
        }
        total += w;
    }
    if (total <= 0) {
        weights.assign(n, 1.0);
        total = static_cast<double>(n);
    }

    std::vector<long> grid(n, 0);
    std::vector<std::pair<double, size_t>> remainders;
    long assigned = 0;
    for (size_t i = 0; i < n; ++i) {
        double const exact = weights[i] / total * static_cast<double>(resolution);
        long base = static_cast<long>(std::floor(exact));
        base = std::min(std::max(base, 0L), resolution);
        grid[i] = base;
        assigned += base;
        remainders.emplace_back(exact - static_cast<double>(base), i);
    }
    std::sort(remainders.begin(), remainders.end(), [](auto const& a, auto const& b) {
        if (a.first != b.first) {
            return a.first > b.first;
        }
        return a.second < b.second;
    });
    long leftover = resolution - assigned;
    for (size_t k = 0; leftover > 0; k = (k + 1) % n, --leftover) {
        ++grid[remainders[k].second];
    }
    for (size_t k = 0; leftover < 0; k = (k + 1) % n) {
        if (grid[remainders[n - 1 - k].second] > 0) {
            --grid[remainders[n - 1 - k].second];
            ++leftover;
        }
    }
    return grid;
}

/// Exact reach-to-target probabilities of the Markov chain induced by a grid
/// row strategy and a pure column policy.
std::vector<Rational> chainReachValues(NormalizedCsg const& norm, GridStrategy const& grid, long resolution,
                                       std::vector<int> const& policy) {
    Csg const& g = norm.game;
    int const n = g.stateCount();
    Rational const res(resolution);

    std::vector<std::vector<Rational>> p(static_cast<size_t>(n), std::vector<Rational>(static_cast<size_t>(n), Rational(0)));
    for (int s = 0; s < n; ++s) {
        int const col = policy[static_cast<size_t>(s)];
        auto const& row = grid[static_cast<size_t>(s)];
        for (size_t a = 0; a < row.size(); ++a) {
            if (row[a] == 0) {
                continue;
            }
            Rational const weight = Rational(row[a]) / res;
            for (auto const& [to, prob] : g.dist(s, static_cast<int>(a), col).entries) {
                p[static_cast<size_t>(s)][static_cast<size_t>(to)] += weight * prob;
            }
        }
    }

    // States with a positive-probability path to the target sink.
    std::vector<char> canReach(static_cast<size_t>(n), 0);
    canReach[static_cast<size_t>(norm.targetSink)] = 1;
    std::queue<int> queue;
    queue.push(norm.targetSink);
    while (!queue.empty()) {
        int const t = queue.front();
        queue.pop();
        for (int s = 0; s < n; ++s) {
            if (!canReach[static_cast<size_t>(s)] && p[static_cast<size_t>(s)][static_cast<size_t>(t)] > 0) {
                canReach[static_cast<size_t>(s)] = 1;
                queue.push(s);
            }
        }
    }

    std::vector<int> transient;
    for (int s = 0; s < n; ++s) {
        if (canReach[static_cast<size_t>(s)] && s != norm.targetSink) {
            transient.push_back(s);
        }
    }

    std::vector<Rational> values(static_cast<size_t>(n), Rational(0));
    values[static_cast<size_t>(norm.targetSink)] = 1;
    if (!transient.empty()) {
        size_t const m = transient.size();
        std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, Rational(0)));
        std::vector<Rational> b(m, Rational(0));
        for (size_t i = 0; i < m; ++i) {
            int const s = transient[i];
            a[i][i] += 1;
            for (size_t j = 0; j < m; ++j) {
                a[i][j] -= p[static_cast<size_t>(s)][static_cast<size_t>(transient[j])];
            }
            b[i] = p[static_cast<size_t>(s)][static_cast<size_t>(norm.targetSink)];
        }
        auto solved = solveLinearSystem(std::move(a), std::move(b));
        if (!solved) {
            throw std::logic_error("reach-probability system of an induced Markov chain was singular");
        }
        for (size_t i = 0; i < m; ++i) {
            values[static_cast<size_t>(transient[i])] = std::move((*solved)[i]);
        }
    }
    return values;
}

/// Exact best response of the column player against a fixed grid row
/// strategy: component-wise minimum over all pure memoryless column policies.
std::vector<Rational> bestResponseValues(NormalizedCsg const& norm, GridStrategy const& grid, long resolution) {
    Csg const& g = norm.game;
    int const n = g.stateCount();

    std::vector<int> policy(static_cast<size_t>(n), 0);
    std::vector<Rational> best;
    while (true) {
        std::vector<Rational> const values = chainReachValues(norm, grid, resolution, policy);
        if (best.empty()) {
            best = values;
        } else {
            for (int s = 0; s < n; ++s) {
                if (values[static_cast<size_t>(s)] < best[static_cast<size_t>(s)]) {
                    best[static_cast<size_t>(s)] = values[static_cast<size_t>(s)];
                }
            }
        }
        int pos = 0;
        while (pos < n) {
            int const cols = static_cast<int>(g.actionsSafe[static_cast<size_t>(pos)].size());
            if (policy[static_cast<size_t>(pos)] + 1 < cols) {
                ++policy[static_cast<size_t>(pos)];
                break;
            }
            policy[static_cast<size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n) {
            break;
        }
    }
    return best;
}

/// Double-precision value iteration from the zero valuation, recording each
/// state's maximin row strategy at the requested horizons.
std::vector<GridStrategy> guidedCandidates(NormalizedCsg const& norm, long resolution,
                                           std::vector<int> const& horizons) {
    Csg const& g = norm.game;
    int const n = g.stateCount();
    std::vector<double> vals(static_cast<size_t>(n), 0.0);
    vals[static_cast<size_t>(norm.targetSink)] = 1.0;

    GridStrategy current(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
        current[static_cast<size_t>(s)].assign(g.actionsReach[static_cast<size_t>(s)].size(), 0);
        current[static_cast<size_t>(s)].front() = resolution;
    }

    std::vector<GridStrategy> snapshots;
    int const maxHorizon = horizons.empty() ? 0 : *std::max_element(horizons.begin(), horizons.end());
    for (int k = 1; k <= maxHorizon; ++k) {
        std::vector<double> next = vals;
        for (int s = 0; s < n; ++s) {
            if (s == norm.targetSink || s == norm.losingSink) {
                continue;
            }
            size_t const rows = g.actionsReach[static_cast<size_t>(s)].size();
            size_t const cols = g.actionsSafe[static_cast<size_t>(s)].size();
            std::vector<std::vector<double>> payoff(rows, std::vector<double>(cols, 0.0));
            for (size_t i = 0; i < rows; ++i) {
                for (size_t j = 0; j < cols; ++j) {
                    double entry = 0.0;
                    for (auto const& [to, prob] : g.dist(s, static_cast<int>(i), static_cast<int>(j)).entries) {
                        entry += prob.get_d() * vals[static_cast<size_t>(to)];
                    }
                    payoff[i][j] = entry;
                }
            }
            std::vector<double> rowStrategy;
            next[static_cast<size_t>(s)] = solveApprox(payoff, &rowStrategy);
            current[static_cast<size_t>(s)] = snapWeights(rowStrategy, resolution);
        }
        vals = std::move(next);
        if (std::find(horizons.begin(), horizons.end(), k) != horizons.end()) {
            snapshots.push_back(current);
        }
    }
    return snapshots;
}

}  // namespace

Valuation oracleValue(NormalizedCsg const& norm, int gridResolution) {
    if (gridResolution < 1) {
        throw std::invalid_argument("grid resolution must be a positive integer, got " +
                                    std::to_string(gridResolution));
    }
    Csg const& g = norm.game;
    std::vector<int> const interior = nonSinkStates(norm);
    if (interior.size() > 8) {
        throw std::runtime_error("size limits exceeded: " + std::to_string(interior.size()) +
                                 " non-sink states, oracle supports at most 8");
    }
    for (int s : interior) {
        size_t const rows = g.actionsReach[static_cast<size_t>(s)].size();
        size_t const cols = g.actionsSafe[static_cast<size_t>(s)].size();
        if (rows > 4 || cols > 4) {
            throw std::runtime_error("size limits exceeded: state \"" + g.states[static_cast<size_t>(s)] +
                                     "\" has " + std::to_string(rows) + "x" + std::to_string(cols) +
                                     " actions, oracle supports at most 4 per player");
        }
    }

    long const resolution = gridResolution;
    int const n = g.stateCount();
    std::set<GridStrategy> candidates;

    GridStrategy uniform(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
        size_t const rows = g.actionsReach[static_cast<size_t>(s)].size();
        uniform[static_cast<size_t>(s)] = snapWeights(std::vector<double>(rows, 1.0), resolution);
    }
    candidates.insert(uniform);

    long pureCount = 1;
    for (int s : interior) {
        pureCount *= static_cast<long>(g.actionsReach[static_cast<size_t>(s)].size());
        if (pureCount > 256) {
            break;
        }
    }
    if (pureCount <= 256) {
        std::vector<int> choice(static_cast<size_t>(n), 0);
        while (true) {
            GridStrategy pure(static_cast<size_t>(n));
            for (int s = 0; s < n; ++s) {
                pure[static_cast<size_t>(s)].assign(g.actionsReach[static_cast<size_t>(s)].size(), 0);
                pure[static_cast<size_t>(s)][static_cast<size_t>(choice[static_cast<size_t>(s)])] = resolution;
            }
            candidates.insert(std::move(pure));
            int pos = 0;
            while (pos < n) {
                int const rows = static_cast<int>(g.actionsReach[static_cast<size_t>(pos)].size());
                if (choice[static_cast<size_t>(pos)] + 1 < rows) {
                    ++choice[static_cast<size_t>(pos)];
                    break;
                }
                choice[static_cast<size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == n) {
                break;
            }
        }
    }

    for (GridStrategy& snapshot : guidedCandidates(norm, resolution, {5, 10, 25, 50, 100, 200})) {
        candidates.insert(std::move(snapshot));
    }

    Valuation result;
    result.provenance = Provenance::Oracle;
    result.values.assign(static_cast<size_t>(n), Rational(0));
    result.values[static_cast<size_t>(norm.targetSink)] = 1;
    for (GridStrategy const& candidate : candidates) {
        std::vector<Rational> const scored = bestResponseValues(norm, candidate, resolution);
        for (int s = 0; s < n; ++s) {
            if (scored[static_cast<size_t>(s)] > result.values[static_cast<size_t>(s)]) {
                result.values[static_cast<size_t>(s)] = scored[static_cast<size_t>(s)];
            }
        }
    }
    return result;
}

}  // namespace csgbvi
