#include "csgbvi/Bvi.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "TestSupport.h"
#include "csgbvi/Csg.h"
#include "csgbvi/Valuation.h"

namespace csgbvi {
namespace {

using test::loadModel;
using test::randomGameJson;
using test::rat;

double toDouble(Rational const& v) {
    return mpq_get_d(v.get_mpq_t());
}

TEST(BviTest, HideRunLowerIterationSteps) {
    NormalizedCsg const norm = normalize(loadModel("hide_run_or_slip.json"));
    EXPECT_EQ(runLower(norm, 0).values[0], Rational(0));
    EXPECT_EQ(runLower(norm, 1).values[0], Rational(1, 4));
    EXPECT_EQ(runLower(norm, 2).values[0], Rational(5, 14));
}

TEST(BviTest, HideRunNaiveUpperNeverMoves) {
    NormalizedCsg const norm = normalize(loadModel("hide_run_or_slip.json"));
    Valuation u = initialUpper(norm);
    for (int k = 1; k <= 100; ++k) {
        u = preOperator(norm.game, u);
        ASSERT_EQ(u.values[0], Rational(1)) << "naive upper moved at iteration " << k;
    }
    EXPECT_EQ(runNaiveUpper(norm, 100).values[0], Rational(1));
}

TEST(BviTest, SwappedGameBoundsMeetInTheMiddle) {
    NormalizedCsg const norm = normalize(loadModel("hide_run_or_slip_swapped.json"));
    EXPECT_EQ(runLower(norm, 1).values[0], Rational(1, 3));
    EXPECT_EQ(runNaiveUpper(norm, 1).values[0], Rational(2, 3));
    EXPECT_EQ(runLower(norm, 2).values[0], Rational(4, 9));
    EXPECT_EQ(runNaiveUpper(norm, 2).values[0], Rational(5, 9));

    BviOptions options;
    options.epsilon = rat("1e-3");
    BviResult const res = bvi(norm, options);
    ASSERT_TRUE(res.converged);
    EXPECT_LE(res.upper.values[0] - res.lower.values[0], rat("1e-3"));
    EXPECT_LE(abs(res.lower.values[0] - Rational(1, 2)), rat("1e-3"));
    EXPECT_LE(abs(res.upper.values[0] - Rational(1, 2)), rat("1e-3"));
}

TEST(BviTest, HideRunDeflatedIterationPins) {
    NormalizedCsg const norm = normalize(loadModel("hide_run_or_slip.json"));
    BviOptions options;
    options.epsilon = rat("1e-3");
    BviResult const res = bvi(norm, options);
    ASSERT_TRUE(res.converged);
    EXPECT_EQ(res.iterations, 14u);
    EXPECT_GE(res.lower.values[0], rat("0.499"));
    EXPECT_LE(res.upper.values[0], rat("0.501"));

    ASSERT_GE(res.trace.size(), 3u);
    EXPECT_EQ(res.trace[0].iteration, 1u);
    EXPECT_EQ(res.trace[0].lower[0], Rational(1, 4));
    EXPECT_EQ(res.trace[0].upper[0], Rational(2, 3));
    ASSERT_EQ(res.trace[0].deflations.size(), 1u);
    EXPECT_EQ(res.trace[0].deflations[0].bec, std::vector<int>{0});
    EXPECT_EQ(res.trace[0].deflations[0].bestExitValue, Rational(2, 3));

    EXPECT_EQ(res.trace[1].lower[0], Rational(5, 14));
    EXPECT_EQ(res.trace[1].upper[0], Rational(5, 9));
    EXPECT_EQ(res.trace[2].lower[0], Rational(19, 46));
    EXPECT_EQ(res.trace[2].upper[0], Rational(14, 27));
}

TEST(BviTest, DeflationBreaksTheNaiveStall) {
    // The naive upper bound sits at 1 forever while the deflating iteration
    // pushes it below 3/5 by the second step.
    NormalizedCsg const norm = normalize(loadModel("hide_run_or_slip.json"));
    EXPECT_EQ(runNaiveUpper(norm, 100).values[0], Rational(1));

    BviOptions options;
    options.epsilon = rat("1e-3");
    BviResult const res = bvi(norm, options);
    ASSERT_GE(res.trace.size(), 2u);
    EXPECT_LT(res.trace[1].upper[0], Rational(3, 5));
}

TEST(BviTest, CascadeLoopIterationPins) {
    NormalizedCsg const norm = normalize(loadModel("appendix_b.json"));
    BviOptions options;
    options.epsilon = rat("1e-3");
    BviResult const res = bvi(norm, options);
    ASSERT_TRUE(res.converged);
    EXPECT_EQ(res.iterations, 10u);

    // First iteration: the full cascade, ending at (1/5, 7/10, 9/10).
    ASSERT_GE(res.trace.size(), 2u);
    IterationRecord const& first = res.trace[0];
    ASSERT_EQ(first.deflations.size(), 3u);
    EXPECT_EQ(first.deflations[0].bec, (std::vector<int>{0, 1, 2}));
    EXPECT_EQ(first.deflations[0].bestExitValue, Rational(9, 10));
    EXPECT_EQ(first.deflations[1].bec, (std::vector<int>{0, 1}));
    EXPECT_EQ(first.deflations[1].bestExitValue, Rational(7, 10));
    EXPECT_EQ(first.deflations[2].bec, std::vector<int>{0});
    EXPECT_EQ(first.deflations[2].bestExitValue, Rational(1, 5));
    EXPECT_EQ(first.upper[0], Rational(1, 5));
    EXPECT_EQ(first.upper[1], Rational(7, 10));
    EXPECT_EQ(first.upper[2], Rational(9, 10));

    // Second iteration: s2's bound falls to the exit value 9/20.
    IterationRecord const& second = res.trace[1];
    EXPECT_EQ(second.upper[0], Rational(1, 5));
    EXPECT_EQ(second.upper[1], Rational(7, 10));
    EXPECT_EQ(second.upper[2], Rational(9, 20));
}

TEST(BviTest, SpuriousExitLoopConvergesWithoutUndershooting) {
    NormalizedCsg const norm = normalize(loadModel("chatterjee_counterexample.json"));
    Rational const eps = rat("1e-4");
    BviOptions options;
    options.epsilon = eps;
    BviResult const res = bvi(norm, options);
    ASSERT_TRUE(res.converged);
    EXPECT_EQ(res.iterations, 6u);

    // Normalized order keeps s0, s3, s4, s5.
    EXPECT_EQ(res.lower.values[0], rat("140/239"));
    EXPECT_EQ(res.upper.values[0], rat("99/169"));
    EXPECT_EQ(res.upper.values[1], Rational(3, 5));
    EXPECT_EQ(res.upper.values[2], Rational(3, 5));
    EXPECT_EQ(res.lower.values[1], Rational(3, 5));

    // The loop bound dips to the spurious 2/3 exit first, then settles at
    // 3/5 without ever undershooting the true value.
    ASSERT_EQ(res.trace.size(), 6u);
    EXPECT_EQ(res.trace[0].upper[1], Rational(2, 3));
    ASSERT_EQ(res.trace[1].deflations.size(), 1u);
    EXPECT_EQ(res.trace[1].deflations[0].bestExitValue, Rational(3, 5));
    EXPECT_EQ(res.trace[1].deflations[0].bestExits, (std::vector<int>{1, 2}));
    EXPECT_EQ(res.trace[2].upper[0], rat("10/17"));
    for (IterationRecord const& record : res.trace) {
        ASSERT_GE(record.upper[1], Rational(3, 5));
        ASSERT_GE(record.upper[2], Rational(3, 5));
    }
    for (size_t k = 2; k < res.trace.size(); ++k) {
        ASSERT_TRUE(res.trace[k].deflations.empty());
    }

    // The initial state's value is irrational; the rational bounds bracket
    // it when rendered as doubles.
    double const target = 2.0 - std::sqrt(2.0);
    EXPECT_LE(toDouble(res.lower.values[0]), target);
    EXPECT_GE(toDouble(res.upper.values[0]), target);
    EXPECT_LE(res.upper.values[0] - res.lower.values[0], eps);
}

TEST(BviTest, PreLocalExamples) {
    NormalizedCsg const norm = normalize(loadModel("hide_run_or_slip.json"));
    std::vector<Rational> const low = initialLower(norm).values;

    // Rows are [run, hide], columns [throw, wait].
    std::vector<Rational> const diracRun = {Rational(1), Rational(0)};
    std::vector<Rational> const diracHide = {Rational(0), Rational(1)};
    std::vector<Rational> const diracThrow = {Rational(1), Rational(0)};
    std::vector<Rational> const diracWait = {Rational(0), Rational(1)};
    EXPECT_EQ(preLocal(norm.game, low, 0, diracHide, diracThrow), Rational(1));
    EXPECT_EQ(preLocal(norm.game, low, 0, diracRun, diracWait), Rational(1, 3));

    std::vector<Rational> const constant(low.size(), Rational(3, 7));
    std::vector<Rational> const uniform = {Rational(1, 2), Rational(1, 2)};
    EXPECT_EQ(preLocal(norm.game, constant, 0, uniform, uniform), Rational(3, 7));
}

TEST(BviTest, PreOperatorExamples) {
    NormalizedCsg const hideRun = normalize(loadModel("hide_run_or_slip.json"));
    EXPECT_EQ(preOperator(hideRun.game, initialLower(hideRun)).values[0], Rational(1, 4));
    EXPECT_EQ(preOperator(hideRun.game, initialUpper(hideRun)).values[0], Rational(1));

    NormalizedCsg const swapped = normalize(loadModel("hide_run_or_slip_swapped.json"));
    EXPECT_EQ(preOperator(swapped.game, initialUpper(swapped)).values[0], Rational(2, 3));
    EXPECT_EQ(preOperator(swapped.game, initialLower(swapped)).values[0], Rational(1, 3));

    // Sinks never move.
    Valuation const stepped = preOperator(hideRun.game, initialLower(hideRun));
    EXPECT_EQ(stepped.values[static_cast<size_t>(hideRun.targetSink)], Rational(1));
    EXPECT_EQ(stepped.values[static_cast<size_t>(hideRun.losingSink)], Rational(0));
}

TEST(BviTest, PreOperatorIsOrderPreserving) {
    std::mt19937_64 rng(307);
    for (int round = 0; round < 40; ++round) {
        NormalizedCsg const norm = normalize(parseCsg(randomGameJson(rng, 5, 3, 8)));
        size_t const n = static_cast<size_t>(norm.game.stateCount());
        Valuation v1 = initialLower(norm);
        Valuation v2 = v1;
        auto pick = [&rng](int lo, int hi) {
            return std::uniform_int_distribution<int>(lo, hi)(rng);
        };
        for (size_t s = 0; s < n; ++s) {
            if (static_cast<int>(s) == norm.targetSink || static_cast<int>(s) == norm.losingSink) {
                continue;
            }
            Rational base(pick(0, 8), 8);
            base.canonicalize();
            Rational bump(pick(0, 8), 8);
            bump.canonicalize();
            v1.values[s] = base;
            v2.values[s] = std::min(Rational(1), Rational(base + bump));
        }
        Valuation const p1 = preOperator(norm.game, v1);
        Valuation const p2 = preOperator(norm.game, v2);
        for (size_t s = 0; s < n; ++s) {
            ASSERT_LE(p1.values[s], p2.values[s]) << "Bellman update reversed an order";
        }
    }
}

TEST(BviTest, RandomGamesKeepTheMonotoneSandwich) {
    std::mt19937_64 rng(311);
    for (int round = 0; round < 100; ++round) {
        NormalizedCsg const norm = normalize(parseCsg(randomGameJson(rng, 5, 3, 8)));
        BviOptions options;
        options.epsilon = rat("1e-3");
        // Mixing cycles can square the exact denominator size per iteration,
        // so keep the exact-mode budget small here.
        options.maxIters = 10;
        BviResult const res = bvi(norm, options);

        std::vector<Rational> const* prevLower = nullptr;
        std::vector<Rational> const* prevUpper = nullptr;
        for (IterationRecord const& record : res.trace) {
            for (size_t s = 0; s < record.lower.size(); ++s) {
                ASSERT_LE(record.lower[s], record.upper[s]) << "bounds crossed";
            }
            if (prevLower != nullptr) {
                for (size_t s = 0; s < record.lower.size(); ++s) {
                    ASSERT_GE(record.lower[s], (*prevLower)[s]) << "lower bound decreased";
                    ASSERT_LE(record.upper[s], (*prevUpper)[s]) << "upper bound increased";
                }
            }
            prevLower = &record.lower;
            prevUpper = &record.upper;
        }
    }
}

TEST(BviTest, FixpointResidualAtConvergence) {
    struct Case {
        char const* model;
        char const* epsilon;
    };
    for (Case const c : {Case{"hide_run_or_slip.json", "1e-3"},
                         Case{"hide_run_or_slip_swapped.json", "1e-3"},
                         Case{"appendix_b.json", "1e-3"},
                         Case{"chatterjee_counterexample.json", "1e-4"}}) {
        NormalizedCsg const norm = normalize(loadModel(c.model));
        BviOptions options;
        options.epsilon = rat(c.epsilon);
        BviResult const res = bvi(norm, options);
        ASSERT_TRUE(res.converged) << c.model;
        Valuation const stepped = preOperator(norm.game, res.lower);
        for (size_t s = 0; s < stepped.values.size(); ++s) {
            ASSERT_LE(abs(stepped.values[s] - res.lower.values[s]), options.epsilon)
                << c.model << " has a loose fixpoint residual at state " << s;
        }
    }
}

TEST(BviTest, LowerOnlyModeStopsOnTheCauchyResidual) {
    NormalizedCsg const norm = normalize(loadModel("hide_run_or_slip.json"));
    BviOptions options;
    options.epsilon = rat("1e-6");
    options.mode = IterationMode::LowerOnly;
    BviResult const res = bvi(norm, options);
    ASSERT_TRUE(res.converged);
    EXPECT_EQ(res.iterations, 29u);
    EXPECT_EQ(res.upper.values[0], Rational(1));  // untouched
    EXPECT_LE(res.lower.values[0], Rational(1, 2));
    EXPECT_GE(res.lower.values[0], Rational(1, 2) - rat("1e-4"));
}

TEST(BviTest, NaiveModeExhaustsTheBudget) {
    NormalizedCsg const norm = normalize(loadModel("hide_run_or_slip.json"));
    BviOptions options;
    options.epsilon = rat("1e-3");
    options.mode = IterationMode::Naive;
    options.maxIters = 50;
    BviResult const res = bvi(norm, options);
    EXPECT_FALSE(res.converged);
    EXPECT_EQ(res.iterations, 50u);
    EXPECT_EQ(res.upper.values[0], Rational(1));
    EXPECT_GT(res.lower.values[0], rat("0.4999"));
}

TEST(BviTest, FloatModeSnapsOntoTheFixpoint) {
    // In exact mode the upper bound of this game approaches its Bellman
    // fixpoint 4/5 from above without ever reaching it, so deflation keeps
    // missing; the float iteration snaps onto the fixpoint, fires the
    // deflation, and closes the interval at the true value 1/2.
    NormalizedCsg const norm = normalize(loadModel("nonmonotonic.json"));
    BviOptions options;
    options.epsilon = rat("1e-3");
    options.floatBellman = true;
    BviResult const res = bvi(norm, options);
    ASSERT_TRUE(res.converged);
    EXPECT_EQ(res.iterations, 8u);
    EXPECT_EQ(res.lower.values[0], Rational(1, 2));
    EXPECT_EQ(res.upper.values[0], Rational(1, 2));
    EXPECT_EQ(res.upper.values[1], Rational(1, 2));
}

TEST(BviTest, ExactModeOnTheSnapResistantGameStaysSound) {
    NormalizedCsg const norm = normalize(loadModel("nonmonotonic.json"));
    BviOptions options;
    options.epsilon = rat("1e-3");
    options.maxIters = 10;
    BviResult const res = bvi(norm, options);
    EXPECT_FALSE(res.converged);
    EXPECT_EQ(res.iterations, 10u);
    // The lower bound locks onto the exact value while the upper bound
    // stays strictly above the fixpoint it converges to.
    EXPECT_EQ(res.lower.values[0], Rational(1, 2));
    EXPECT_EQ(res.lower.values[1], Rational(1, 2));
    EXPECT_GT(res.upper.values[0], Rational(4, 5));
    EXPECT_GT(res.upper.values[1], Rational(4, 5));
    for (size_t s = 0; s < res.lower.values.size(); ++s) {
        ASSERT_LE(res.lower.values[s], res.upper.values[s]);
    }
}

TEST(BviTest, InitialOnlyTerminationIgnoresUnreachableSlack) {
    // The initial state resolves in one step; the disconnected slow loop
    // needs 44 iterations to squeeze its gap below 1/100.
    std::string const text = R"({
      "states": ["i0", "q_slow", "goal"],
      "initial": "i0",
      "targets": ["goal"],
      "transitions": [
        {"from": "i0", "aR": "a", "aS": "b", "to": [{"state": "goal", "prob": 1}]},
        {"from": "q_slow", "aR": "a", "aS": "b", "to": [{"state": "goal", "prob": "1/10"}, {"state": "q_slow", "prob": "9/10"}]},
        {"from": "goal", "aR": "-", "aS": "-", "to": [{"state": "goal", "prob": 1}]}
      ]
    })";
    NormalizedCsg const norm = normalize(parseCsg(text));

    BviOptions options;
    options.epsilon = Rational(1, 100);
    options.initialOnly = true;
    BviResult const atInitial = bvi(norm, options);
    ASSERT_TRUE(atInitial.converged);
    EXPECT_EQ(atInitial.iterations, 1u);

    options.initialOnly = false;
    BviResult const everywhere = bvi(norm, options);
    ASSERT_TRUE(everywhere.converged);
    EXPECT_EQ(everywhere.iterations, 44u);
}

}  // namespace
}  // namespace csgbvi
