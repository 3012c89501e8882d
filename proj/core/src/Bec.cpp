#include "csgbvi/Bec.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>

#include "csgbvi/LinearSolve.h"
#include "csgbvi/Simplex.h"

namespace csgbvi {

namespace {

std::vector<char> memberFlags(int n, std::vector<int> const& states) {
    std::vector<char> flags(static_cast<size_t>(n), 0);
    for (int s : states) {
        flags[static_cast<size_t>(s)] = 1;
    }
    return flags;
}

int rowCountAt(Csg const& g, int s) {
    return static_cast<int>(g.actionsReach[static_cast<size_t>(s)].size());
}

int colCountAt(Csg const& g, int s) {
    return static_cast<int>(g.actionsSafe[static_cast<size_t>(s)].size());
}

/// Row actions whose successors under column b all stay inside X.
std::vector<int> stayingRows(Csg const& g, int s, int b, std::vector<char> const& inX) {
    std::vector<int> rows;
    for (int a = 0; a < rowCountAt(g, s); ++a) {
        if (g.dist(s, a, b).supportWithin(inX)) {
            rows.push_back(a);
        }
    }
    return rows;
}

/// w_j = sum_i rho_i * z_ij, the payoff rho secures against each pure column.
std::vector<Rational> guaranteeVector(MatrixGame const& z, std::vector<Rational> const& rho) {
    std::vector<Rational> w(static_cast<size_t>(z.colCount()), Rational(0));
    for (int j = 0; j < z.colCount(); ++j) {
        for (int i = 0; i < z.rowCount(); ++i) {
            w[static_cast<size_t>(j)] += rho[static_cast<size_t>(i)] * z.payoff[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    }
    return w;
}

/// Vertices of the polytope { rho in Delta(stay) : rho^T Z >= val per column },
/// i.e. the optimal row strategies a single column can trap on `stay`.
/// Returned as full-length strategy vectors with zeros off `stay`. Vertices
/// are found exactly by enumerating bases: each vertex makes k-1 of the k+m
/// inequality constraints tight on the simplex hyperplane.
std::vector<std::vector<Rational>> trappedOptimalVertices(MatrixGame const& z, Rational const& val,
                                                          std::vector<int> const& stay) {
    int const k = static_cast<int>(stay.size());
    int const m = z.colCount();
    int const total = k + m;
    std::set<std::vector<Rational>> found;

    std::vector<int> comb(static_cast<size_t>(k - 1));
    for (int i = 0; i < k - 1; ++i) {
        comb[static_cast<size_t>(i)] = i;
    }
    while (true) {
        std::vector<std::vector<Rational>> a;
        std::vector<Rational> b;
        a.emplace_back(static_cast<size_t>(k), Rational(1));  // simplex hyperplane
        b.emplace_back(1);
        for (int c : comb) {
            std::vector<Rational> row(static_cast<size_t>(k), Rational(0));
            if (c < k) {
                row[static_cast<size_t>(c)] = 1;  // rho_c = 0
                b.emplace_back(0);
            } else {
                int const j = c - k;  // guarantee against column j tight at val
                for (int i = 0; i < k; ++i) {
                    row[static_cast<size_t>(i)] =
                        z.payoff[static_cast<size_t>(stay[static_cast<size_t>(i)])][static_cast<size_t>(j)];
                }
                b.emplace_back(val);
            }
            a.push_back(std::move(row));
        }

        if (auto point = solveLinearSystem(std::move(a), std::move(b))) {
            bool feasible = true;
            for (Rational const& p : *point) {
                if (p < 0) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                std::vector<Rational> full(static_cast<size_t>(z.rowCount()), Rational(0));
                for (int i = 0; i < k; ++i) {
                    full[static_cast<size_t>(stay[static_cast<size_t>(i)])] = (*point)[static_cast<size_t>(i)];
                }
                for (int j = 0; j < m && feasible; ++j) {
                    Rational got(0);
                    for (int i = 0; i < z.rowCount(); ++i) {
                        got += full[static_cast<size_t>(i)] * z.payoff[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    }
                    feasible = got >= val;
                }
                if (feasible) {
                    found.insert(std::move(full));
                }
            }
        }

        // next (k-1)-combination out of `total` positions
        int pos = k - 2;
        while (pos >= 0 && comb[static_cast<size_t>(pos)] == total - (k - 1) + pos) {
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++comb[static_cast<size_t>(pos)];
        for (int q = pos + 1; q < k - 1; ++q) {
            comb[static_cast<size_t>(q)] = comb[static_cast<size_t>(q - 1)] + 1;
        }
    }
    return {found.begin(), found.end()};
}

/// True when some optimal strategy supported exactly on one of the leaving
/// supports secures at least `guarantee` against every column, i.e. weakly
/// dominates the strategy that produced `guarantee`.
bool vertexCovered(MatrixGame const& z, std::vector<Rational> const& guarantee,
                   std::vector<std::vector<int>> const& leavingSupports) {
    for (auto const& support : leavingSupports) {
        int const q = static_cast<int>(support.size());
        lp::LpProblem<Rational> lp;
        // variables: rho over `support`, then t = min probability on the support
        lp.objective.assign(static_cast<size_t>(q + 1), Rational(0));
        lp.objective.back() = 1;

        std::vector<Rational> sumRow(static_cast<size_t>(q + 1), Rational(1));
        sumRow.back() = 0;
        lp.rows.push_back(sumRow);
        lp.relations.push_back(lp::Relation::Equal);
        lp.rhs.emplace_back(1);

        for (int idx = 0; idx < q; ++idx) {
            std::vector<Rational> row(static_cast<size_t>(q + 1), Rational(0));
            row[static_cast<size_t>(idx)] = 1;
            row.back() = -1;
            lp.rows.push_back(std::move(row));
            lp.relations.push_back(lp::Relation::GreaterEq);
            lp.rhs.emplace_back(0);
        }
        for (int j = 0; j < z.colCount(); ++j) {
            std::vector<Rational> row(static_cast<size_t>(q + 1), Rational(0));
            for (int idx = 0; idx < q; ++idx) {
                row[static_cast<size_t>(idx)] =
                    z.payoff[static_cast<size_t>(support[static_cast<size_t>(idx)])][static_cast<size_t>(j)];
            }
            lp.rows.push_back(std::move(row));
            lp.relations.push_back(lp::Relation::GreaterEq);
            lp.rhs.push_back(guarantee[static_cast<size_t>(j)]);
        }

        auto result = lp::solveLp(lp);
        if (result.status == lp::LpStatus::Optimal && result.objectiveValue > 0) {
            return true;
        }
    }
    return false;
}

std::vector<int> supportUnion(std::vector<std::vector<int>> const& supports) {
    std::set<int> all;
    for (auto const& support : supports) {
        all.insert(support.begin(), support.end());
    }
    return {all.begin(), all.end()};
}

std::vector<int> maskToSupport(unsigned mask, int rows) {
    std::vector<int> support;
    for (int a = 0; a < rows; ++a) {
        if (mask & (1u << a)) {
            support.push_back(a);
        }
    }
    return support;
}

}  // namespace

int supportEnumerationCap() {
    char const* raw = std::getenv("CSGBVI_SUPPORT_CAP");
    if (raw == nullptr || *raw == '\0') {
        return 12;
    }
    std::string text(raw);
    for (char ch : text) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
            throw std::invalid_argument("CSGBVI_SUPPORT_CAP must be a positive integer, got \"" + text + "\"");
        }
    }
    int const cap = std::stoi(text);
    if (cap < 1) {
        throw std::invalid_argument("CSGBVI_SUPPORT_CAP must be a positive integer, got \"" + text + "\"");
    }
    return cap;
}

MatrixGame matrixGameAt(Csg const& g, int s, std::vector<Rational> const& v) {
    if (v.size() != static_cast<size_t>(g.stateCount())) {
        throw std::invalid_argument("valuation has " + std::to_string(v.size()) + " entries for a game with " +
                                    std::to_string(g.stateCount()) + " states");
    }
    MatrixGame z;
    z.rowLabels = g.actionsReach[static_cast<size_t>(s)];
    z.colLabels = g.actionsSafe[static_cast<size_t>(s)];
    z.payoff.assign(z.rowLabels.size(), std::vector<Rational>(z.colLabels.size(), Rational(0)));
    for (int i = 0; i < static_cast<int>(z.rowLabels.size()); ++i) {
        for (int j = 0; j < static_cast<int>(z.colLabels.size()); ++j) {
            Rational expected(0);
            for (auto const& [to, prob] : g.dist(s, i, j).entries) {
                expected += prob * v[static_cast<size_t>(to)];
            }
            z.payoff[static_cast<size_t>(i)][static_cast<size_t>(j)] = std::move(expected);
        }
    }
    return z;
}

bool supportLeaves(Csg const& g, int s, std::vector<int> const& rowSupport, std::vector<char> const& inX) {
    if (rowSupport.empty()) {
        throw std::invalid_argument("supportLeaves needs a nonempty row support");
    }
    for (int j = 0; j < colCountAt(g, s); ++j) {
        bool escapes = false;
        for (int a : rowSupport) {
            if (!g.dist(s, a, j).supportWithin(inX)) {
                escapes = true;
                break;
            }
        }
        if (!escapes) {
            return false;
        }
    }
    return true;
}

std::vector<std::vector<int>> computeHazard(Csg const& g, int s, std::vector<char> const& inX,
                                            std::vector<Rational> const& v) {
    int const rows = rowCountAt(g, s);
    int const cap = supportEnumerationCap();
    if (rows > cap) {
        throw std::runtime_error("support enumeration limit exceeded at state \"" +
                                 g.states[static_cast<size_t>(s)] + "\": " + std::to_string(rows) +
                                 " row actions, cap " + std::to_string(cap) +
                                 " (set CSGBVI_SUPPORT_CAP to raise)");
    }
    MatrixGame const z = matrixGameAt(g, s, v);
    Rational const val = solve(z).value;

    std::vector<std::vector<int>> leavingSupports;
    for (unsigned mask = 1; mask < (1u << rows); ++mask) {
        std::vector<int> support = maskToSupport(mask, rows);
        if (supportLeaves(g, s, support, inX)) {
            leavingSupports.push_back(std::move(support));
        }
    }

    if (leavingSupports.empty()) {
        // No support escapes X at all: every optimal strategy is trapped, so
        // all optimal supports are hazardous.
        std::set<std::vector<int>> all;
        for (unsigned mask = 1; mask < (1u << rows); ++mask) {
            std::vector<int> support = maskToSupport(mask, rows);
            if (optimalSupportExists(z, Side::Row, support)) {
                all.insert(std::move(support));
            }
        }
        return {all.begin(), all.end()};
    }

    std::set<std::vector<Rational>> vertices;
    for (int b = 0; b < colCountAt(g, s); ++b) {
        std::vector<int> const stay = stayingRows(g, s, b, inX);
        if (stay.empty()) {
            continue;
        }
        for (auto& vertex : trappedOptimalVertices(z, val, stay)) {
            vertices.insert(std::move(vertex));
        }
    }

    std::set<std::vector<int>> hazardous;
    for (auto const& vertex : vertices) {
        if (!vertexCovered(z, guaranteeVector(z, vertex), leavingSupports)) {
            std::vector<int> support;
            for (int i = 0; i < rows; ++i) {
                if (vertex[static_cast<size_t>(i)] > 0) {
                    support.push_back(i);
                }
            }
            hazardous.insert(std::move(support));
        }
    }
    return {hazardous.begin(), hazardous.end()};
}

std::vector<int> computeTrap(Csg const& g, int s, std::vector<char> const& stayWithin,
                             std::vector<Rational> const& v, std::vector<int> const& hazardActions) {
    MatrixGame const z = matrixGameAt(g, s, v);
    Rational const val = solve(z).value;

    std::vector<int> staying;
    for (int b = 0; b < colCountAt(g, s); ++b) {
        bool keepsAll = true;
        for (int a : hazardActions) {
            if (!g.dist(s, a, b).supportWithin(stayWithin)) {
                keepsAll = false;
                break;
            }
        }
        if (keepsAll) {
            staying.push_back(b);
        }
    }
    if (staying.empty()) {
        return {};
    }

    std::vector<int> allRows(static_cast<size_t>(z.rowCount()));
    for (int i = 0; i < z.rowCount(); ++i) {
        allRows[static_cast<size_t>(i)] = i;
    }
    if (restrictedValue(z, allRows, staying) != val) {
        // No optimal minimizer lives on the staying columns.
        return {};
    }

    std::vector<int> trap;
    for (int b : staying) {
        if (maxProbOnAction(z, Side::Col, staying, b) > 0) {
            trap.push_back(b);
        }
    }
    return trap;
}

StateClassification classifyState(Csg const& g, int s, std::vector<char> const& inX,
                                  std::vector<char> const& inRoot, std::vector<Rational> const& v) {
    StateClassification c;
    c.state = s;
    c.hasExitValue = true;
    c.hazardSupports = computeHazard(g, s, inX, v);
    c.hazardActions = supportUnion(c.hazardSupports);

    MatrixGame const z = matrixGameAt(g, s, v);
    Rational const val = solve(z).value;
    if (c.hazardSupports.empty()) {
        c.exitValue = val;
        return c;
    }
    c.trapColumns = computeTrap(g, s, inRoot, v, c.hazardActions);
    if (c.trapColumns.empty()) {
        c.exitValue = val;
        return c;
    }
    for (int a = 0; a < rowCountAt(g, s); ++a) {
        if (std::binary_search(c.hazardActions.begin(), c.hazardActions.end(), a)) {
            continue;
        }
        bool escapesSomeTrap = false;
        for (int b : c.trapColumns) {
            if (!g.dist(s, a, b).supportWithin(inX)) {
                escapesSomeTrap = true;
                break;
            }
        }
        if (escapesSomeTrap) {
            c.deflRows.push_back(a);
        }
    }
    if (c.deflRows.empty()) {
        c.exitValue = 0;
    } else {
        c.exitValue = std::max(Rational(0), restrictedValue(z, c.deflRows, c.trapColumns));
    }
    return c;
}

Rational exitValue(Csg const& g, int s, std::vector<char> const& inX, std::vector<char> const& inRoot,
                   std::vector<Rational> const& v) {
    return classifyState(g, s, inX, inRoot, v).exitValue;
}

Rational exitValue(Csg const& g, int s, std::vector<int> const& X, std::vector<Rational> const& v) {
    std::vector<char> const flags = memberFlags(g.stateCount(), X);
    return exitValue(g, s, flags, flags, v);
}

BestExit bestExit(Csg const& g, std::vector<int> const& X, std::vector<char> const& inRoot,
                  std::vector<Rational> const& v) {
    if (X.empty()) {
        throw std::invalid_argument("bestExit needs a nonempty state set");
    }
    std::vector<int> sorted = X;
    std::sort(sorted.begin(), sorted.end());
    std::vector<char> const inX = memberFlags(g.stateCount(), sorted);

    BestExit best;
    for (int s : sorted) {
        Rational const exit = exitValue(g, s, inX, inRoot, v);
        if (best.states.empty() || exit > best.value) {
            best.value = exit;
            best.states = {s};
        } else if (exit == best.value) {
            best.states.push_back(s);
        }
    }
    return best;
}

BestExit bestExit(Csg const& g, std::vector<int> const& X, std::vector<Rational> const& v) {
    return bestExit(g, X, memberFlags(g.stateCount(), X), v);
}

namespace {

void findMbecsRec(Csg const& g, std::vector<int> const& candidate, std::vector<Rational> const& u,
                  std::vector<std::vector<int>>& out) {
    std::vector<char> const inX = memberFlags(g.stateCount(), candidate);
    std::vector<int> hazardous;
    for (int s : candidate) {
        if (!computeHazard(g, s, inX, u).empty()) {
            hazardous.push_back(s);
        }
    }
    if (hazardous.size() == candidate.size()) {
        out.push_back(candidate);
        return;
    }
    if (hazardous.empty()) {
        return;
    }
    for (EcSet const& sub : findMecs(g, hazardous)) {
        findMbecsRec(g, sub.states, u, out);
    }
}

}  // namespace

std::vector<std::vector<int>> findMbecs(Csg const& g, EcSet const& mec, std::vector<Rational> const& u) {
    std::vector<std::vector<int>> out;
    findMbecsRec(g, mec.states, u, out);
    std::sort(out.begin(), out.end(),
              [](std::vector<int> const& a, std::vector<int> const& b) { return a.front() < b.front(); });
    return out;
}

namespace {

void deflateSet(Csg const& g, std::vector<int> const& bec, std::vector<char> const& inRoot,
                std::vector<Rational>& u, std::vector<DeflationEvent>* events) {
    BestExit const best = bestExit(g, bec, inRoot, u);
    for (int s : bec) {
        if (best.value < u[static_cast<size_t>(s)]) {
            u[static_cast<size_t>(s)] = best.value;
        }
    }
    if (events != nullptr) {
        events->push_back({bec, best.value, best.states});
    }
    std::vector<int> rest;
    for (int s : bec) {
        if (!std::binary_search(best.states.begin(), best.states.end(), s)) {
            rest.push_back(s);
        }
    }
    for (EcSet const& sub : findMecs(g, rest)) {
        for (auto const& inner : findMbecs(g, sub, u)) {
            deflateSet(g, inner, inRoot, u, events);
        }
    }
}

}  // namespace

void deflate(Csg const& g, EcSet const& mec, std::vector<Rational>& u, std::vector<DeflationEvent>* events) {
    std::vector<char> const inRoot = memberFlags(g.stateCount(), mec.states);
    for (auto const& bec : findMbecs(g, mec, u)) {
        deflateSet(g, bec, inRoot, u, events);
    }
}

BecReport analyzeBecs(Csg const& g, EcSet const& mec, std::vector<Rational> const& u) {
    BecReport report;
    report.mbecs = findMbecs(g, mec, u);
    std::vector<char> const inRoot = memberFlags(g.stateCount(), mec.states);
    for (auto const& bec : report.mbecs) {
        BestExit const best = bestExit(g, bec, inRoot, u);
        report.bestExitValues.push_back(best.value);
        report.bestExitStates.push_back(best.states);
    }
    for (int s : mec.states) {
        auto owner = std::find_if(report.mbecs.begin(), report.mbecs.end(), [s](std::vector<int> const& bec) {
            return std::binary_search(bec.begin(), bec.end(), s);
        });
        if (owner != report.mbecs.end()) {
            report.perState.push_back(classifyState(g, s, memberFlags(g.stateCount(), *owner), inRoot, u));
        } else {
            StateClassification c;
            c.state = s;
            c.hazardSupports = computeHazard(g, s, inRoot, u);
            c.hazardActions = supportUnion(c.hazardSupports);
            report.perState.push_back(std::move(c));
        }
    }
    return report;
}

}  // namespace csgbvi
