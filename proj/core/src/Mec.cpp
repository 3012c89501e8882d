#include "csgbvi/Mec.h"

#include <algorithm>
#include <stdexcept>

namespace csgbvi {

namespace {

/// Joint action pairs of state s whose successor support stays inside `member`.
std::vector<std::pair<int, int>> stayingPairs(Csg const& g, int s, std::vector<char> const& member) {
    std::vector<std::pair<int, int>> pairs;
    size_t const rows = g.actionsReach[static_cast<size_t>(s)].size();
    size_t const cols = g.actionsSafe[static_cast<size_t>(s)].size();
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) {
            if (g.dist(s, static_cast<int>(i), static_cast<int>(j)).supportWithin(member)) {
                pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    return pairs;
}

/// Tarjan's algorithm, iterative. Nodes are positions 0..n-1 into some state
/// list; adj holds successor positions. Returns the SCCs as position lists.
std::vector<std::vector<int>> stronglyConnectedComponents(std::vector<std::vector<int>> const& adj) {
    int const n = static_cast<int>(adj.size());
    std::vector<int> index(static_cast<size_t>(n), -1);
    std::vector<int> lowlink(static_cast<size_t>(n), 0);
    std::vector<char> onStack(static_cast<size_t>(n), 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    struct Frame {
        int node;
        size_t child;
    };
    std::vector<Frame> frames;

    for (int root = 0; root < n; ++root) {
        if (index[static_cast<size_t>(root)] != -1) {
            continue;
        }
        index[static_cast<size_t>(root)] = lowlink[static_cast<size_t>(root)] = counter++;
        stack.push_back(root);
        onStack[static_cast<size_t>(root)] = 1;
        frames.push_back({root, 0});
        while (!frames.empty()) {
            Frame& top = frames.back();
            int const v = top.node;
            if (top.child < adj[static_cast<size_t>(v)].size()) {
                int const w = adj[static_cast<size_t>(v)][top.child++];
                if (index[static_cast<size_t>(w)] == -1) {
                    index[static_cast<size_t>(w)] = lowlink[static_cast<size_t>(w)] = counter++;
                    stack.push_back(w);
                    onStack[static_cast<size_t>(w)] = 1;
                    frames.push_back({w, 0});
                } else if (onStack[static_cast<size_t>(w)]) {
                    lowlink[static_cast<size_t>(v)] =
                        std::min(lowlink[static_cast<size_t>(v)], index[static_cast<size_t>(w)]);
                }
                continue;
            }
            frames.pop_back();
            if (!frames.empty()) {
                int const parent = frames.back().node;
                lowlink[static_cast<size_t>(parent)] =
                    std::min(lowlink[static_cast<size_t>(parent)], lowlink[static_cast<size_t>(v)]);
            }
            if (lowlink[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
                std::vector<int> scc;
                while (true) {
                    int const w = stack.back();
                    stack.pop_back();
                    onStack[static_cast<size_t>(w)] = 0;
                    scc.push_back(w);
                    if (w == v) {
                        break;
                    }
                }
                std::sort(scc.begin(), scc.end());
                sccs.push_back(std::move(scc));
            }
        }
    }
    return sccs;
}

std::vector<int> cleanStateSet(Csg const& g, std::vector<int> const& states, char const* what) {
    std::vector<int> cleaned = states;
    std::sort(cleaned.begin(), cleaned.end());
    cleaned.erase(std::unique(cleaned.begin(), cleaned.end()), cleaned.end());
    for (int s : cleaned) {
        if (s < 0 || s >= g.stateCount()) {
            throw std::invalid_argument(std::string(what) + " contains invalid state index " + std::to_string(s));
        }
    }
    return cleaned;
}

/// Builds, for a candidate set X given as a sorted state list, the per-state
/// staying pairs and the successor adjacency (positions into X). States keep
/// their position in X; adjacency lists are sorted and duplicate-free.
void buildSubgraph(Csg const& g, std::vector<int> const& X,
                   std::vector<std::vector<std::pair<int, int>>>& pairs,
                   std::vector<std::vector<int>>& adj) {
    std::vector<char> member(static_cast<size_t>(g.stateCount()), 0);
    std::vector<int> position(static_cast<size_t>(g.stateCount()), -1);
    for (size_t k = 0; k < X.size(); ++k) {
        member[static_cast<size_t>(X[k])] = 1;
        position[static_cast<size_t>(X[k])] = static_cast<int>(k);
    }
    pairs.assign(X.size(), {});
    adj.assign(X.size(), {});
    for (size_t k = 0; k < X.size(); ++k) {
        pairs[k] = stayingPairs(g, X[k], member);
        std::vector<int>& out = adj[k];
        for (auto const& [i, j] : pairs[k]) {
            for (auto const& [to, prob] : g.dist(X[k], i, j).entries) {
                out.push_back(position[static_cast<size_t>(to)]);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
}

}  // namespace

std::vector<EcSet> findMecs(Csg const& g, std::vector<int> const& restrictTo) {
    std::vector<std::vector<int>> queue;
    queue.push_back(cleanStateSet(g, restrictTo, "restrictTo"));
    std::vector<EcSet> result;

    while (!queue.empty()) {
        std::vector<int> X = std::move(queue.back());
        queue.pop_back();
        if (X.empty()) {
            continue;
        }
        std::vector<std::vector<std::pair<int, int>>> pairs;
        std::vector<std::vector<int>> adj;
        buildSubgraph(g, X, pairs, adj);

        std::vector<int> kept;
        for (size_t k = 0; k < X.size(); ++k) {
            if (!pairs[k].empty()) {
                kept.push_back(X[k]);
            }
        }
        if (kept.size() != X.size()) {
            queue.push_back(std::move(kept));
            continue;
        }

        std::vector<std::vector<int>> sccs = stronglyConnectedComponents(adj);
        if (sccs.size() == 1 && sccs.front().size() == X.size()) {
            EcSet ec;
            ec.states = std::move(X);
            ec.enabledPairs = std::move(pairs);
            result.push_back(std::move(ec));
            continue;
        }
        for (auto const& scc : sccs) {
            std::vector<int> sub;
            sub.reserve(scc.size());
            for (int pos : scc) {
                sub.push_back(X[static_cast<size_t>(pos)]);
            }
            queue.push_back(std::move(sub));
        }
    }

    std::sort(result.begin(), result.end(),
              [](EcSet const& a, EcSet const& b) { return a.states.front() < b.states.front(); });
    return result;
}

bool isEc(Csg const& g, std::vector<int> const& candidate) {
    std::vector<int> X = cleanStateSet(g, candidate, "candidate");
    if (X.empty()) {
        return false;
    }
    std::vector<std::vector<std::pair<int, int>>> pairs;
    std::vector<std::vector<int>> adj;
    buildSubgraph(g, X, pairs, adj);
    for (auto const& statePairs : pairs) {
        if (statePairs.empty()) {
            return false;
        }
    }
    std::vector<std::vector<int>> sccs = stronglyConnectedComponents(adj);
    return sccs.size() == 1 && sccs.front().size() == X.size();
}

}  // namespace csgbvi
