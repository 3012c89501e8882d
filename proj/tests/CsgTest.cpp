#include "csgbvi/Csg.h"

#include <gtest/gtest.h>

#include <stdexcept>
#include <string>

#include "TestSupport.h"

namespace csgbvi {
namespace {

using test::loadModel;
using test::stateIdx;

void expectParseError(std::string const& text, std::string const& needle) {
    try {
        parseCsg(text);
        FAIL() << "expected a parse error mentioning: " << needle;
    } catch (std::invalid_argument const& e) {
        EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)
            << "actual message: " << e.what();
    }
}

std::string const kTinyGame = R"({
  "states": ["s", "t"],
  "initial": "s",
  "targets": ["t"],
  "transitions": [
    {"from": "s", "aR": "a", "aS": "b", "to": [{"state": "t", "prob": "1/2"}, {"state": "s", "prob": "1/2"}]},
    {"from": "t", "aR": "-", "aS": "-", "to": [{"state": "t", "prob": 1}]}
  ]
})";

TEST(CsgTest, ParsesWellFormedModel) {
    Csg const g = parseCsg(kTinyGame);
    EXPECT_EQ(g.stateCount(), 2);
    EXPECT_EQ(g.initial, 0);
    EXPECT_TRUE(g.isTarget(1));
    EXPECT_FALSE(g.isTarget(0));
    Distribution const& d = g.dist(0, 0, 0);
    ASSERT_EQ(d.entries.size(), 2u);
    EXPECT_EQ(d.entries[0].first, 0);
    EXPECT_EQ(d.entries[0].second, Rational(1, 2));
}

TEST(CsgTest, ActionOrderFollowsFileAppearance) {
    std::string const text = R"({
      "states": ["s"],
      "initial": "s",
      "targets": [],
      "transitions": [
        {"from": "s", "aR": "z", "aS": "q", "to": [{"state": "s", "prob": 1}]},
        {"from": "s", "aR": "a", "aS": "q", "to": [{"state": "s", "prob": 1}]},
        {"from": "s", "aR": "z", "aS": "b", "to": [{"state": "s", "prob": 1}]},
        {"from": "s", "aR": "a", "aS": "b", "to": [{"state": "s", "prob": 1}]}
      ]
    })";
    Csg const g = parseCsg(text);
    EXPECT_EQ(g.actionsReach[0], (std::vector<std::string>{"z", "a"}));
    EXPECT_EQ(g.actionsSafe[0], (std::vector<std::string>{"q", "b"}));
}

TEST(CsgTest, NumericProbabilitiesBecomeExactRationals) {
    std::string const text = R"({
      "states": ["s", "t"],
      "initial": "s",
      "targets": ["t"],
      "transitions": [
        {"from": "s", "aR": "a", "aS": "b", "to": [{"state": "t", "prob": 0.4}, {"state": "s", "prob": 0.6}]},
        {"from": "t", "aR": "-", "aS": "-", "to": [{"state": "t", "prob": 1}]}
      ]
    })";
    Csg const g = parseCsg(text);
    EXPECT_EQ(g.dist(0, 0, 0).entries[1].second, Rational(2, 5));
    EXPECT_EQ(g.dist(0, 0, 0).entries[0].second, Rational(3, 5));
}

TEST(CsgTest, RejectsMalformedDocuments) {
    expectParseError("not json", "malformed model document");
    expectParseError("[1, 2]", "top level must be an object");
    expectParseError(R"({"states": [], "initial": "s", "targets": [], "transitions": []})",
                     "\"states\" must be a nonempty array");
    expectParseError(R"({"states": ["s", "s"], "initial": "s", "targets": [], "transitions": []})",
                     "declared twice");
}

TEST(CsgTest, RejectsBrokenDistributions) {
    expectParseError(R"({
      "states": ["s"],
      "initial": "s",
      "targets": [],
      "transitions": [
        {"from": "s", "aR": "a", "aS": "b", "to": [{"state": "s", "prob": "9/10"}]}
      ]
    })",
                     "distribution sums to 9/10");
    expectParseError(R"({
      "states": ["s"],
      "initial": "s",
      "targets": [],
      "transitions": [
        {"from": "s", "aR": "a", "aS": "b", "to": [{"state": "s", "prob": "0"}, {"state": "s", "prob": "1"}]}
      ]
    })",
                     "probability must be positive");
    expectParseError(R"({
      "states": ["s"],
      "initial": "s",
      "targets": [],
      "transitions": [
        {"from": "s", "aR": "a", "aS": "b", "to": [{"state": "nope", "prob": "1"}]}
      ]
    })",
                     "undeclared state \"nope\"");
}

TEST(CsgTest, RejectsIncompleteActionTables) {
    expectParseError(R"({
      "states": ["s"],
      "initial": "s",
      "targets": [],
      "transitions": [
        {"from": "s", "aR": "a", "aS": "b", "to": [{"state": "s", "prob": "1"}]},
        {"from": "s", "aR": "a2", "aS": "b2", "to": [{"state": "s", "prob": "1"}]}
      ]
    })",
                     "missing the transition for action pair");
    expectParseError(R"({
      "states": ["s"],
      "initial": "s",
      "targets": [],
      "transitions": [
        {"from": "s", "aR": "a", "aS": "b", "to": [{"state": "s", "prob": "1"}]},
        {"from": "s", "aR": "a", "aS": "b", "to": [{"state": "s", "prob": "1"}]}
      ]
    })",
                     "duplicate transition from \"s\"");
    expectParseError(R"({
      "states": ["s", "lonely"],
      "initial": "s",
      "targets": [],
      "transitions": [
        {"from": "s", "aR": "a", "aS": "b", "to": [{"state": "s", "prob": "1"}]}
      ]
    })",
                     "\"lonely\" has no transitions");
}

TEST(CsgTest, LoadReportsFileContext) {
    EXPECT_THROW(loadCsgFile("/nonexistent/model.json"), std::invalid_argument);
    try {
        loadCsgFile("/nonexistent/model.json");
    } catch (std::invalid_argument const& e) {
        EXPECT_NE(std::string(e.what()).find("cannot open model file"), std::string::npos);
    }
}

TEST(CsgTest, WinningRegionOnFixtures) {
    Csg const hideRun = loadModel("hide_run_or_slip.json");
    EXPECT_EQ(computeWinningRegion(hideRun), std::vector<int>{stateIdx(hideRun, "s_wet")});

    Csg const cascadeLoop = loadModel("appendix_b.json");
    EXPECT_EQ(computeWinningRegion(cascadeLoop), std::vector<int>{stateIdx(cascadeLoop, "dead")});

    Csg const spuriousExitLoop = loadModel("chatterjee_counterexample.json");
    EXPECT_EQ(computeWinningRegion(spuriousExitLoop), std::vector<int>{stateIdx(spuriousExitLoop, "s2")});
}

TEST(CsgTest, WinningRegionRequiresSureAvoidance) {
    // s_1 only reaches the safe sink, so both are surely winning for the
    // avoiding player; s_0 touches the target under every column action.
    std::string const text = R"({
      "states": ["s_0", "s_1", "s_sink", "t"],
      "initial": "s_0",
      "targets": ["t"],
      "transitions": [
        {"from": "s_0", "aR": "a", "aS": "b1", "to": [{"state": "t", "prob": 1}]},
        {"from": "s_0", "aR": "a", "aS": "b2", "to": [{"state": "t", "prob": "1/2"}, {"state": "s_1", "prob": "1/2"}]},
        {"from": "s_1", "aR": "a", "aS": "b", "to": [{"state": "s_sink", "prob": 1}]},
        {"from": "s_sink", "aR": "-", "aS": "-", "to": [{"state": "s_sink", "prob": 1}]},
        {"from": "t", "aR": "-", "aS": "-", "to": [{"state": "t", "prob": 1}]}
      ]
    })";
    Csg const g = parseCsg(text);
    EXPECT_EQ(computeWinningRegion(g), (std::vector<int>{1, 2}));

    // Giving the reaching player an escape row at s_1 breaks the guarantee:
    // the avoiding player must handle every row of the column she commits to.
    std::string const withEscape = R"({
      "states": ["s_0", "s_1", "s_sink", "t"],
      "initial": "s_0",
      "targets": ["t"],
      "transitions": [
        {"from": "s_0", "aR": "a", "aS": "b1", "to": [{"state": "t", "prob": 1}]},
        {"from": "s_0", "aR": "a", "aS": "b2", "to": [{"state": "t", "prob": "1/2"}, {"state": "s_1", "prob": "1/2"}]},
        {"from": "s_1", "aR": "a", "aS": "b", "to": [{"state": "s_sink", "prob": 1}]},
        {"from": "s_1", "aR": "a2", "aS": "b", "to": [{"state": "t", "prob": 1}]},
        {"from": "s_sink", "aR": "-", "aS": "-", "to": [{"state": "s_sink", "prob": 1}]},
        {"from": "t", "aR": "-", "aS": "-", "to": [{"state": "t", "prob": 1}]}
      ]
    })";
    EXPECT_EQ(computeWinningRegion(parseCsg(withEscape)), std::vector<int>{2});
}

TEST(CsgTest, NormalizationCollapsesIntoSinks) {
    Csg const g = loadModel("hide_run_or_slip.json");
    NormalizedCsg const norm = normalize(g);
    ASSERT_EQ(norm.game.stateCount(), 3);
    EXPECT_EQ(norm.game.states[0], "s_hide");
    EXPECT_EQ(norm.game.states[static_cast<size_t>(norm.targetSink)], "target_sink");
    EXPECT_EQ(norm.game.states[static_cast<size_t>(norm.losingSink)], "losing_sink");
    EXPECT_EQ(norm.winningRegion, std::vector<int>{stateIdx(g, "s_wet")});
    EXPECT_EQ(norm.stateMap, (std::vector<int>{0, norm.targetSink, norm.losingSink}));

    // Sinks carry exactly one absorbing action pair.
    for (int sink : {norm.targetSink, norm.losingSink}) {
        EXPECT_EQ(norm.game.actionsReach[static_cast<size_t>(sink)], std::vector<std::string>{"-"});
        EXPECT_EQ(norm.game.actionsSafe[static_cast<size_t>(sink)], std::vector<std::string>{"-"});
        Distribution const& d = norm.game.dist(sink, 0, 0);
        ASSERT_EQ(d.entries.size(), 1u);
        EXPECT_EQ(d.entries[0].first, sink);
        EXPECT_EQ(d.entries[0].second, Rational(1));
    }

    // The target sink is the only target of the normalized game.
    EXPECT_EQ(norm.game.targets, std::vector<int>{norm.targetSink});
}

TEST(CsgTest, NormalizationMergesInboundMass) {
    std::string const text = R"({
      "states": ["s0", "t1", "t2", "other"],
      "initial": "s0",
      "targets": ["t1", "t2"],
      "transitions": [
        {"from": "s0", "aR": "a", "aS": "b", "to": [{"state": "t1", "prob": "1/4"}, {"state": "t2", "prob": "1/4"}, {"state": "other", "prob": "1/2"}]},
        {"from": "t1", "aR": "-", "aS": "-", "to": [{"state": "t1", "prob": 1}]},
        {"from": "t2", "aR": "-", "aS": "-", "to": [{"state": "t2", "prob": 1}]},
        {"from": "other", "aR": "-", "aS": "-", "to": [{"state": "s0", "prob": 1}]}
      ]
    })";
    NormalizedCsg const norm = normalize(parseCsg(text));
    // Kept states: s0 and other; both target states merge into one sink entry.
    Distribution const& d = norm.game.dist(0, 0, 0);
    ASSERT_EQ(d.entries.size(), 2u);
    EXPECT_EQ(d.entries[0].first, 1);  // "other" keeps relative order after s0
    EXPECT_EQ(d.entries[0].second, Rational(1, 2));
    EXPECT_EQ(d.entries[1].first, norm.targetSink);
    EXPECT_EQ(d.entries[1].second, Rational(1, 2));
}

TEST(CsgTest, NormalizationAvoidsSinkNameCollisions) {
    std::string const text = R"({
      "states": ["target_sink", "t"],
      "initial": "target_sink",
      "targets": ["t"],
      "transitions": [
        {"from": "target_sink", "aR": "a", "aS": "b", "to": [{"state": "t", "prob": "1/2"}, {"state": "target_sink", "prob": "1/2"}]},
        {"from": "t", "aR": "-", "aS": "-", "to": [{"state": "t", "prob": 1}]}
      ]
    })";
    NormalizedCsg const norm = normalize(parseCsg(text));
    EXPECT_EQ(norm.game.states[0], "target_sink");
    EXPECT_EQ(norm.game.states[static_cast<size_t>(norm.targetSink)], "target_sink_");
}

}  // namespace
}  // namespace csgbvi
