#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "csgbvi/Bvi.h"
#include "csgbvi/Csg.h"
#include "csgbvi/MatrixGame.h"
#include "csgbvi/Rational.h"
#include "csgbvi/Valuation.h"

namespace {

using namespace csgbvi;

NormalizedCsg loadFixture(std::string const& name) {
    return normalize(loadCsgFile(std::string(CSGBVI_MODELS_DIR) + "/" + name));
}

MatrixGame randomMatrix(int rows, int cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> den(1, 9);
    MatrixGame z;
    z.payoff.assign(static_cast<size_t>(rows), {});
    for (int i = 0; i < rows; ++i) {
        z.rowLabels.push_back("r" + std::to_string(i));
        for (int j = 0; j < cols; ++j) {
            int const d = den(rng);
            Rational entry(std::uniform_int_distribution<int>(-d, d)(rng), d);
            entry.canonicalize();
            z.payoff[static_cast<size_t>(i)].push_back(entry);
        }
    }
    for (int j = 0; j < cols; ++j) {
        z.colLabels.push_back("c" + std::to_string(j));
    }
    return z;
}

void BM_ExactMatrixSolve5x5(benchmark::State& state) {
    MatrixGame const z = randomMatrix(5, 5, 42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(z));
    }
}
BENCHMARK(BM_ExactMatrixSolve5x5);

void BM_FloatMatrixSolve5x5(benchmark::State& state) {
    MatrixGame const z = randomMatrix(5, 5, 42);
    std::vector<std::vector<double>> payoff(z.rowCount());
    for (size_t i = 0; i < z.rowCount(); ++i) {
        for (size_t j = 0; j < z.colCount(); ++j) {
            payoff[i].push_back(mpq_get_d(z.payoff[i][j].get_mpq_t()));
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(solveApprox(payoff));
    }
}
BENCHMARK(BM_FloatMatrixSolve5x5);

void BM_PreOperatorCascadeLoop(benchmark::State& state) {
    NormalizedCsg const norm = loadFixture("appendix_b.json");
    Valuation const u = initialUpper(norm);
    for (auto _ : state) {
        benchmark::DoNotOptimize(preOperator(norm.game, u));
    }
}
BENCHMARK(BM_PreOperatorCascadeLoop);

void BM_BviHideRunOrSlip(benchmark::State& state) {
    NormalizedCsg const norm = loadFixture("hide_run_or_slip.json");
    BviOptions options;
    options.epsilon = Rational(1, 1000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bvi(norm, options));
    }
}
BENCHMARK(BM_BviHideRunOrSlip);

void BM_BviCascadeLoop(benchmark::State& state) {
    NormalizedCsg const norm = loadFixture("appendix_b.json");
    BviOptions options;
    options.epsilon = Rational(1, 1000);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bvi(norm, options));
    }
}
BENCHMARK(BM_BviCascadeLoop);

void BM_BviSpuriousExitLoopFloat(benchmark::State& state) {
    NormalizedCsg const norm = loadFixture("chatterjee_counterexample.json");
    BviOptions options;
    options.epsilon = Rational(1, 10000);
    options.floatBellman = true;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bvi(norm, options));
    }
}
BENCHMARK(BM_BviSpuriousExitLoopFloat);

}  // namespace

BENCHMARK_MAIN();
