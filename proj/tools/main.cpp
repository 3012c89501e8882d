#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "csgbvi/Bec.h"
#include "csgbvi/Bvi.h"
#include "csgbvi/Csg.h"
#include "csgbvi/Mec.h"
#include "csgbvi/Rational.h"
#include "csgbvi/Serialize.h"
#include "csgbvi/Valuation.h"

namespace {

using csgbvi::Csg;
using csgbvi::NormalizedCsg;
using csgbvi::Rational;

struct RunConfig {
    std::string modelPath;
    std::string epsilon = "1/1000000";
    std::string mode = "bvi";
    std::uint64_t maxIters = 1000000;
    std::string output = "text";
    std::string tracePath;
    std::string arithmetic = "exact";
    std::string termination = "all-states";
};

std::vector<int> nonSinkStates(NormalizedCsg const& norm) {
    std::vector<int> states;
    for (int s = 0; s < norm.game.stateCount(); ++s) {
        if (s != norm.targetSink && s != norm.losingSink) {
            states.push_back(s);
        }
    }
    return states;
}

std::string nameSet(Csg const& g, std::vector<int> const& states) {
    std::string text = "{";
    for (size_t i = 0; i < states.size(); ++i) {
        if (i > 0) {
            text += ',';
        }
        text += g.states[static_cast<size_t>(states[i])];
    }
    text += '}';
    return text;
}

std::string readFile(std::string const& path, std::string const& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot read " + what + " \"" + path + "\"");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int runSolve(RunConfig const& config) {
    Csg const original = csgbvi::loadCsgFile(config.modelPath);
    NormalizedCsg const norm = csgbvi::normalize(original);

    csgbvi::BviOptions options;
    options.epsilon = csgbvi::parseRational(config.epsilon);
    options.maxIters = config.maxIters;
    if (config.mode == "naive") {
        options.mode = csgbvi::IterationMode::Naive;
    } else if (config.mode == "lower-only") {
        options.mode = csgbvi::IterationMode::LowerOnly;
    } else {
        options.mode = csgbvi::IterationMode::Deflated;
    }
    options.initialOnly = config.termination == "initial";
    options.floatBellman = config.arithmetic == "float";
    options.recordTrace = true;

    csgbvi::BviResult const result = csgbvi::bvi(norm, options);

    if (!config.tracePath.empty()) {
        std::ofstream out(config.tracePath, std::ios::binary);
        if (!out) {
            throw std::invalid_argument("cannot open trace file \"" + config.tracePath + "\"");
        }
        for (auto const& record : result.trace) {
            out << csgbvi::iterationRecordToJsonLine(norm.game, record) << '\n';
        }
    }

    if (config.output == "text") {
        for (int s = 0; s < original.stateCount(); ++s) {
            int const mapped = norm.stateMap[static_cast<size_t>(s)];
            Rational const& lo = result.lower.values[static_cast<size_t>(mapped)];
            Rational const& hi = result.upper.values[static_cast<size_t>(mapped)];
            std::cout << original.states[static_cast<size_t>(s)] << ": [" << csgbvi::toFraction(lo) << " ("
                      << csgbvi::toDecimal(lo) << "), " << csgbvi::toFraction(hi) << " ("
                      << csgbvi::toDecimal(hi) << ")]\n";
        }
        std::cout << "iterations: " << result.iterations << '\n';
        std::cout << "converged: " << (result.converged ? "yes" : "no") << '\n';
    } else if (config.output == "json") {
        nlohmann::ordered_json doc;
        nlohmann::ordered_json states = nlohmann::ordered_json::object();
        for (int s = 0; s < original.stateCount(); ++s) {
            int const mapped = norm.stateMap[static_cast<size_t>(s)];
            nlohmann::ordered_json entry = nlohmann::ordered_json::object();
            entry["lower"] = csgbvi::toFraction(result.lower.values[static_cast<size_t>(mapped)]);
            entry["upper"] = csgbvi::toFraction(result.upper.values[static_cast<size_t>(mapped)]);
            states[original.states[static_cast<size_t>(s)]] = std::move(entry);
        }
        doc["states"] = std::move(states);
        doc["iterations"] = result.iterations;
        doc["converged"] = result.converged;
        doc["epsilon"] = csgbvi::toFraction(result.epsilon);
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << csgbvi::traceToCsv(norm.game, result.trace);
    }
    return result.converged ? 0 : 2;
}

int runInspect(std::string const& path) {
    Csg const g = csgbvi::loadCsgFile(path);
    NormalizedCsg const norm = csgbvi::normalize(g);

    std::cout << "states: " << g.stateCount() << '\n';
    std::cout << "initial: " << g.states[static_cast<size_t>(g.initial)] << '\n';
    std::cout << "targets: " << nameSet(g, g.targets) << '\n';
    std::cout << "W: " << nameSet(g, norm.winningRegion) << '\n';

    auto const mecs = csgbvi::findMecs(norm.game, nonSinkStates(norm));
    if (mecs.empty()) {
        std::cout << "MECs: none\n";
    } else {
        std::string line = "MECs: [";
        for (size_t i = 0; i < mecs.size(); ++i) {
            if (i > 0) {
                line += ',';
            }
            line += nameSet(norm.game, mecs[i].states);
        }
        line += ']';
        std::cout << line << '\n';
    }

    std::cout << "actions:\n";
    for (int s = 0; s < g.stateCount(); ++s) {
        std::cout << "  " << g.states[static_cast<size_t>(s)] << ": "
                  << g.actionsReach[static_cast<size_t>(s)].size() << 'x'
                  << g.actionsSafe[static_cast<size_t>(s)].size() << '\n';
    }
    return 0;
}

int runBecs(std::string const& path, std::string const& valuationArg) {
    Csg const original = csgbvi::loadCsgFile(path);
    NormalizedCsg const norm = csgbvi::normalize(original);

    std::vector<Rational> values;
    if (valuationArg == "init") {
        values = csgbvi::initialUpper(norm).values;
    } else {
        values = csgbvi::parseValuationFile(readFile(valuationArg, "valuation file"), original, norm);
    }

    nlohmann::ordered_json doc;
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (csgbvi::EcSet const& mec : csgbvi::findMecs(norm.game, nonSinkStates(norm))) {
        csgbvi::BecReport const report = csgbvi::analyzeBecs(norm.game, mec, values);
        reports.push_back(nlohmann::ordered_json::parse(csgbvi::becReportToJson(norm.game, mec, report)));
    }
    doc["mecs"] = std::move(reports);
    std::cout << doc.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval solver for reachability objectives in two-player concurrent stochastic games"};
    app.require_subcommand(1);

    RunConfig config;
    CLI::App* solveCmd = app.add_subcommand("solve", "Run bounded value iteration and print per-state value intervals");
    solveCmd->add_option("model", config.modelPath, "Model file (JSON)")->required();
    solveCmd->add_option("--epsilon,-e", config.epsilon, "Termination threshold, rational or decimal (default 1/1000000)");
    solveCmd->add_option("--mode", config.mode, "Iteration scheme (default bvi)")
        ->check(CLI::IsMember({"bvi", "lower-only", "naive"}));
    solveCmd->add_option("--max-iters", config.maxIters, "Iteration budget (default 1000000)");
    solveCmd->add_option("--output,-o", config.output, "Report format (default text)")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    solveCmd->add_option("--trace", config.tracePath, "Write a JSON-lines iteration trace to FILE");
    solveCmd->add_option("--arithmetic", config.arithmetic, "Bellman arithmetic (default exact)")
        ->check(CLI::IsMember({"exact", "float"}));
    solveCmd->add_option("--termination", config.termination, "Convergence scope (default all-states)")
        ->check(CLI::IsMember({"all-states", "initial"}));

    std::string inspectPath;
    CLI::App* inspectCmd = app.add_subcommand("inspect", "Print model structure: winning region, MECs, action counts");
    inspectCmd->add_option("model", inspectPath, "Model file (JSON)")->required();

    std::string becsPath;
    std::string valuationArg = "init";
    CLI::App* becsCmd = app.add_subcommand("becs", "Classify bloated end components at a valuation, as JSON");
    becsCmd->add_option("model", becsPath, "Model file (JSON)")->required();
    becsCmd->add_option("--valuation", valuationArg,
                        "Valuation file (JSON object state -> rational), or \"init\" for the initial upper bound");

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& help) {
        return app.exit(help);
    } catch (CLI::ParseError const& err) {
        app.exit(err);
        return 1;
    }

    try {
        if (solveCmd->parsed()) {
            return runSolve(config);
        }
        if (inspectCmd->parsed()) {
            return runInspect(inspectPath);
        }
        return runBecs(becsPath, valuationArg);
    } catch (std::exception const& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}
