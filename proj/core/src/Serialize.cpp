#include "csgbvi/Serialize.h"

#include <map>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace csgbvi {

namespace {

using OrderedJson = nlohmann::ordered_json;

Rational rationalFromJson(nlohmann::json const& value, std::string const& context) {
    try {
        if (value.is_string()) {
            return parseRational(value.get<std::string>());
        }
        if (value.is_number_integer()) {
            return Rational(static_cast<long>(value.get<long long>()));
        }
        if (value.is_number()) {
            // dump() prints the shortest decimal that round-trips, which is
            // then converted exactly (0.4 becomes 2/5, not a binary double).
            return parseRational(value.dump());
        }
    } catch (std::invalid_argument const& err) {
        throw std::invalid_argument(context + ": " + err.what());
    }
    throw std::invalid_argument(context + ": expected a rational, got " + value.dump());
}

OrderedJson namesOf(Csg const& g, std::vector<int> const& states) {
    OrderedJson arr = OrderedJson::array();
    for (int s : states) {
        arr.push_back(g.states[static_cast<size_t>(s)]);
    }
    return arr;
}

OrderedJson rowActionNames(Csg const& g, int s, std::vector<int> const& rows) {
    OrderedJson arr = OrderedJson::array();
    for (int a : rows) {
        arr.push_back(g.actionsReach[static_cast<size_t>(s)][static_cast<size_t>(a)]);
    }
    return arr;
}

OrderedJson colActionNames(Csg const& g, int s, std::vector<int> const& cols) {
    OrderedJson arr = OrderedJson::array();
    for (int b : cols) {
        arr.push_back(g.actionsSafe[static_cast<size_t>(s)][static_cast<size_t>(b)]);
    }
    return arr;
}

OrderedJson valuesByName(Csg const& g, std::vector<Rational> const& values) {
    OrderedJson obj = OrderedJson::object();
    for (int s = 0; s < g.stateCount(); ++s) {
        obj[g.states[static_cast<size_t>(s)]] = toFraction(values[static_cast<size_t>(s)]);
    }
    return obj;
}

OrderedJson deflationEventJson(Csg const& g, DeflationEvent const& event) {
    OrderedJson obj = OrderedJson::object();
    obj["bec"] = namesOf(g, event.bec);
    obj["best_exit_value"] = toFraction(event.bestExitValue);
    obj["best_exits"] = namesOf(g, event.bestExits);
    return obj;
}

}  // namespace

std::vector<Rational> parseValuationFile(std::string const& text, Csg const& original,
                                         NormalizedCsg const& norm) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (nlohmann::json::parse_error const& err) {
        throw std::invalid_argument(std::string("malformed valuation document: ") + err.what());
    }
    if (!doc.is_object()) {
        throw std::invalid_argument("valuation document must be a JSON object of state name to value");
    }

    std::map<std::string, int> originalIndex;
    for (int s = 0; s < original.stateCount(); ++s) {
        originalIndex[original.states[static_cast<size_t>(s)]] = s;
    }

    std::vector<Rational> values(static_cast<size_t>(norm.game.stateCount()), Rational(0));
    values[static_cast<size_t>(norm.targetSink)] = 1;
    std::vector<char> provided(static_cast<size_t>(norm.game.stateCount()), 0);
    provided[static_cast<size_t>(norm.targetSink)] = 1;
    provided[static_cast<size_t>(norm.losingSink)] = 1;

    for (auto const& [name, raw] : doc.items()) {
        auto const found = originalIndex.find(name);
        if (found == originalIndex.end()) {
            throw std::invalid_argument("valuation names undeclared state \"" + name + "\"");
        }
        Rational const value = rationalFromJson(raw, "valuation for state \"" + name + "\"");
        if (value < 0 || value > 1) {
            throw std::invalid_argument("valuation for state \"" + name + "\" is outside [0,1]: " +
                                        toFraction(value));
        }
        int const mapped = norm.stateMap[static_cast<size_t>(found->second)];
        if (mapped == norm.targetSink || mapped == norm.losingSink) {
            continue;  // collapsed state; the sink value is pinned
        }
        values[static_cast<size_t>(mapped)] = value;
        provided[static_cast<size_t>(mapped)] = 1;
    }

    for (int s = 0; s < norm.game.stateCount(); ++s) {
        if (!provided[static_cast<size_t>(s)]) {
            throw std::invalid_argument("valuation is missing state \"" +
                                        norm.game.states[static_cast<size_t>(s)] + "\"");
        }
    }
    return values;
}

std::string becReportToJson(Csg const& g, EcSet const& mec, BecReport const& report, int indent) {
    OrderedJson doc = OrderedJson::object();
    doc["mec"] = namesOf(g, mec.states);

    OrderedJson mbecs = OrderedJson::array();
    for (size_t i = 0; i < report.mbecs.size(); ++i) {
        OrderedJson entry = OrderedJson::object();
        entry["states"] = namesOf(g, report.mbecs[i]);
        entry["best_exit_value"] = toFraction(report.bestExitValues[i]);
        entry["best_exits"] = namesOf(g, report.bestExitStates[i]);
        mbecs.push_back(std::move(entry));
    }
    doc["mbecs"] = std::move(mbecs);

    OrderedJson classifications = OrderedJson::array();
    for (StateClassification const& c : report.perState) {
        OrderedJson entry = OrderedJson::object();
        entry["state"] = g.states[static_cast<size_t>(c.state)];
        OrderedJson supports = OrderedJson::array();
        for (auto const& support : c.hazardSupports) {
            supports.push_back(rowActionNames(g, c.state, support));
        }
        entry["hazard_supports"] = std::move(supports);
        entry["hazard_actions"] = rowActionNames(g, c.state, c.hazardActions);
        entry["trap_columns"] = colActionNames(g, c.state, c.trapColumns);
        entry["defl_rows"] = rowActionNames(g, c.state, c.deflRows);
        if (c.hasExitValue) {
            entry["exit_value"] = toFraction(c.exitValue);
        } else {
            entry["exit_value"] = nullptr;
        }
        classifications.push_back(std::move(entry));
    }
    doc["classifications"] = std::move(classifications);
    return doc.dump(indent);
}

std::string iterationRecordToJsonLine(Csg const& g, IterationRecord const& record) {
    OrderedJson doc = OrderedJson::object();
    doc["iteration"] = record.iteration;
    doc["lower"] = valuesByName(g, record.lower);
    doc["upper"] = valuesByName(g, record.upper);
    OrderedJson deflations = OrderedJson::array();
    for (DeflationEvent const& event : record.deflations) {
        deflations.push_back(deflationEventJson(g, event));
    }
    doc["deflations"] = std::move(deflations);
    return doc.dump();
}

std::string traceToCsv(Csg const& g, std::vector<IterationRecord> const& trace) {
    std::string csv = "iteration,state,lower,upper\n";
    for (IterationRecord const& record : trace) {
        for (int s = 0; s < g.stateCount(); ++s) {
            csv += std::to_string(record.iteration);
            csv += ',';
            csv += g.states[static_cast<size_t>(s)];
            csv += ',';
            csv += toFraction(record.lower[static_cast<size_t>(s)]);
            csv += ',';
            csv += toFraction(record.upper[static_cast<size_t>(s)]);
            csv += '\n';
        }
    }
    return csv;
}

}  // namespace csgbvi
