#include "csgbvi/Csg.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace csgbvi {

namespace {

using nlohmann::json;

[[noreturn]] void failModel(std::string const& message) {
    throw std::invalid_argument(message);
}

std::string pairLabel(std::string const& aR, std::string const& aS) {
    return "(" + aR + ", " + aS + ")";
}

/// Converts a probability value from the document into an exact rational.
/// Strings go through the rational parser directly; numbers are re-serialized
/// first, which yields the shortest decimal that round-trips the double, so
/// a literal 0.4 in the file becomes exactly 2/5.
Rational probFromJson(json const& value) {
    if (value.is_string()) {
        return parseRational(value.get<std::string>());
    }
    if (value.is_number_integer()) {
        return Rational(static_cast<long>(value.get<std::int64_t>()));
    }
    if (value.is_number()) {
        return parseRational(value.dump());
    }
    failModel("probability must be a string or a number, got " + value.dump());
}

json const& requireField(json const& object, char const* key, char const* where) {
    auto it = object.find(key);
    if (it == object.end()) {
        failModel(std::string(where) + ": missing required field \"" + key + "\"");
    }
    return *it;
}

std::string requireString(json const& value, std::string const& what) {
    if (!value.is_string() || value.get<std::string>().empty()) {
        failModel(what + " must be a nonempty string, got " + value.dump());
    }
    return value.get<std::string>();
}

}  // namespace

bool Distribution::supportWithin(std::vector<char> const& member) const {
    for (auto const& [state, prob] : entries) {
        if (!member[static_cast<size_t>(state)]) {
            return false;
        }
    }
    return true;
}

bool Csg::isTarget(int s) const {
    return std::binary_search(targets.begin(), targets.end(), s);
}

Csg parseCsg(std::string const& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (json::parse_error const& e) {
        failModel(std::string("malformed model document: ") + e.what());
    }
    if (!doc.is_object()) {
        failModel("malformed model document: top level must be an object");
    }

    Csg g;

    json const& statesJson = requireField(doc, "states", "model");
    if (!statesJson.is_array() || statesJson.empty()) {
        failModel("\"states\" must be a nonempty array of names");
    }
    std::unordered_map<std::string, int> stateIndex;
    for (json const& item : statesJson) {
        std::string name = requireString(item, "state name");
        if (!stateIndex.emplace(name, static_cast<int>(g.states.size())).second) {
            failModel("state \"" + name + "\" is declared twice");
        }
        g.states.push_back(name);
    }
    auto lookupState = [&](std::string const& name, std::string const& where) {
        auto it = stateIndex.find(name);
        if (it == stateIndex.end()) {
            failModel(where + ": reference to undeclared state \"" + name + "\"");
        }
        return it->second;
    };

    g.initial = lookupState(requireString(requireField(doc, "initial", "model"), "\"initial\""), "initial");

    json const& targetsJson = requireField(doc, "targets", "model");
    if (!targetsJson.is_array()) {
        failModel("\"targets\" must be an array of state names");
    }
    for (json const& item : targetsJson) {
        g.targets.push_back(lookupState(requireString(item, "target name"), "targets"));
    }
    std::sort(g.targets.begin(), g.targets.end());
    g.targets.erase(std::unique(g.targets.begin(), g.targets.end()), g.targets.end());

    int const n = g.stateCount();
    g.actionsReach.resize(static_cast<size_t>(n));
    g.actionsSafe.resize(static_cast<size_t>(n));
    std::vector<std::unordered_map<std::string, int>> rowIndex(static_cast<size_t>(n));
    std::vector<std::unordered_map<std::string, int>> colIndex(static_cast<size_t>(n));
    // Keyed by (state, row, col); filled while scanning the records, then
    // checked for completeness against the discovered action lists.
    std::map<std::tuple<int, int, int>, Distribution> records;

    json const& transitionsJson = requireField(doc, "transitions", "model");
    if (!transitionsJson.is_array()) {
        failModel("\"transitions\" must be an array of records");
    }
    for (size_t r = 0; r < transitionsJson.size(); ++r) {
        std::string where = "transitions[" + std::to_string(r) + "]";
        json const& rec = transitionsJson[r];
        if (!rec.is_object()) {
            failModel(where + ": record must be an object");
        }
        std::string fromName = requireString(requireField(rec, "from", where.c_str()), where + ".from");
        int from = lookupState(fromName, where);
        std::string aR = requireString(requireField(rec, "aR", where.c_str()), where + ".aR");
        std::string aS = requireString(requireField(rec, "aS", where.c_str()), where + ".aS");
        std::string context = "transition from \"" + fromName + "\" on " + pairLabel(aR, aS);

        auto& rows = rowIndex[static_cast<size_t>(from)];
        auto rowIt = rows.find(aR);
        if (rowIt == rows.end()) {
            rowIt = rows.emplace(aR, static_cast<int>(g.actionsReach[static_cast<size_t>(from)].size())).first;
            g.actionsReach[static_cast<size_t>(from)].push_back(aR);
        }
        auto& cols = colIndex[static_cast<size_t>(from)];
        auto colIt = cols.find(aS);
        if (colIt == cols.end()) {
            colIt = cols.emplace(aS, static_cast<int>(g.actionsSafe[static_cast<size_t>(from)].size())).first;
            g.actionsSafe[static_cast<size_t>(from)].push_back(aS);
        }

        json const& toJson = requireField(rec, "to", where.c_str());
        if (!toJson.is_array() || toJson.empty()) {
            failModel(context + ": \"to\" must be a nonempty array of {state, prob} entries");
        }
        std::map<int, Rational> mass;
        Rational total(0);
        for (json const& entry : toJson) {
            if (!entry.is_object()) {
                failModel(context + ": successor entry must be an object");
            }
            int to = lookupState(requireString(requireField(entry, "state", where.c_str()), context + " successor"),
                                 context);
            Rational prob;
            try {
                prob = probFromJson(requireField(entry, "prob", where.c_str()));
            } catch (std::invalid_argument const& e) {
                failModel(context + ": " + e.what());
            }
            if (prob <= 0) {
                failModel(context + ": probability must be positive, got " + toFraction(prob));
            }
            mass[to] += prob;
            total += prob;
        }
        if (total != 1) {
            failModel(context + ": distribution sums to " + toFraction(total));
        }

        Distribution dist;
        dist.entries.assign(mass.begin(), mass.end());
        auto key = std::make_tuple(from, rowIt->second, colIt->second);
        if (!records.emplace(key, std::move(dist)).second) {
            failModel("duplicate " + context);
        }
    }

    g.transitions.resize(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s) {
        auto const& rows = g.actionsReach[static_cast<size_t>(s)];
        auto const& cols = g.actionsSafe[static_cast<size_t>(s)];
        if (rows.empty() || cols.empty()) {
            failModel("state \"" + g.states[static_cast<size_t>(s)] +
                      "\" has no transitions; every state needs at least one action pair");
        }
        auto& table = g.transitions[static_cast<size_t>(s)];
        table.resize(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            table[i].resize(cols.size());
            for (size_t j = 0; j < cols.size(); ++j) {
                auto it = records.find(std::make_tuple(s, static_cast<int>(i), static_cast<int>(j)));
                if (it == records.end()) {
                    failModel("state \"" + g.states[static_cast<size_t>(s)] +
                              "\" is missing the transition for action pair " + pairLabel(rows[i], cols[j]));
                }
                table[i][j] = std::move(it->second);
            }
        }
    }
    return g;
}

Csg loadCsgFile(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open model file \"" + path + "\"");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parseCsg(buffer.str());
    } catch (std::invalid_argument const& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::vector<int> computeWinningRegion(Csg const& g) {
    int const n = g.stateCount();
    std::vector<char> inW(static_cast<size_t>(n), 1);
    for (int t : g.targets) {
        inW[static_cast<size_t>(t)] = 0;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<char> next = inW;
        for (int s = 0; s < n; ++s) {
            if (!inW[static_cast<size_t>(s)]) {
                continue;
            }
            bool safeColumnExists = false;
            size_t const rows = g.actionsReach[static_cast<size_t>(s)].size();
            size_t const cols = g.actionsSafe[static_cast<size_t>(s)].size();
            for (size_t j = 0; j < cols && !safeColumnExists; ++j) {
                bool allRowsStay = true;
                for (size_t i = 0; i < rows && allRowsStay; ++i) {
                    allRowsStay = g.dist(s, static_cast<int>(i), static_cast<int>(j)).supportWithin(inW);
                }
                safeColumnExists = allRowsStay;
            }
            if (!safeColumnExists) {
                next[static_cast<size_t>(s)] = 0;
                changed = true;
            }
        }
        inW.swap(next);
    }
    std::vector<int> result;
    for (int s = 0; s < n; ++s) {
        if (inW[static_cast<size_t>(s)]) {
            result.push_back(s);
        }
    }
    return result;
}

namespace {

std::string freshName(std::string base, std::vector<std::string> const& taken) {
    while (std::find(taken.begin(), taken.end(), base) != taken.end()) {
        base += "_";
    }
    return base;
}

}  // namespace

NormalizedCsg normalize(Csg const& g) {
    int const n = g.stateCount();
    NormalizedCsg norm;
    norm.winningRegion = computeWinningRegion(g);

    std::vector<char> losing(static_cast<size_t>(n), 0);
    for (int s : norm.winningRegion) {
        losing[static_cast<size_t>(s)] = 1;
    }

    norm.stateMap.assign(static_cast<size_t>(n), -1);
    Csg& out = norm.game;
    for (int s = 0; s < n; ++s) {
        if (g.isTarget(s) || losing[static_cast<size_t>(s)]) {
            continue;
        }
        norm.stateMap[static_cast<size_t>(s)] = static_cast<int>(out.states.size());
        out.states.push_back(g.states[static_cast<size_t>(s)]);
    }
    norm.targetSink = static_cast<int>(out.states.size());
    out.states.push_back(freshName("target_sink", out.states));
    norm.losingSink = static_cast<int>(out.states.size());
    out.states.push_back(freshName("losing_sink", out.states));
    for (int s = 0; s < n; ++s) {
        if (norm.stateMap[static_cast<size_t>(s)] < 0) {
            norm.stateMap[static_cast<size_t>(s)] = g.isTarget(s) ? norm.targetSink : norm.losingSink;
        }
    }

    out.initial = norm.stateMap[static_cast<size_t>(g.initial)];
    out.targets = {norm.targetSink};
    out.actionsReach.resize(out.states.size());
    out.actionsSafe.resize(out.states.size());
    out.transitions.resize(out.states.size());

    for (int s = 0; s < n; ++s) {
        int mapped = norm.stateMap[static_cast<size_t>(s)];
        if (mapped == norm.targetSink || mapped == norm.losingSink) {
            continue;
        }
        out.actionsReach[static_cast<size_t>(mapped)] = g.actionsReach[static_cast<size_t>(s)];
        out.actionsSafe[static_cast<size_t>(mapped)] = g.actionsSafe[static_cast<size_t>(s)];
        auto const& table = g.transitions[static_cast<size_t>(s)];
        auto& outTable = out.transitions[static_cast<size_t>(mapped)];
        outTable.resize(table.size());
        for (size_t i = 0; i < table.size(); ++i) {
            outTable[i].resize(table[i].size());
            for (size_t j = 0; j < table[i].size(); ++j) {
                std::map<int, Rational> mass;
                for (auto const& [to, prob] : table[i][j].entries) {
                    mass[norm.stateMap[static_cast<size_t>(to)]] += prob;
                }
                outTable[i][j].entries.assign(mass.begin(), mass.end());
            }
        }
    }

    for (int sink : {norm.targetSink, norm.losingSink}) {
        out.actionsReach[static_cast<size_t>(sink)] = {"-"};
        out.actionsSafe[static_cast<size_t>(sink)] = {"-"};
        Distribution loop;
        loop.entries.emplace_back(sink, Rational(1));
        out.transitions[static_cast<size_t>(sink)] = {{loop}};
    }
    return norm;
}

}  // namespace csgbvi
