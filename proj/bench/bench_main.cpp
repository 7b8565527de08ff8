// Copyright 2026 The fedform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial against OpenMP timings of the parallel kernels, plus the solvers.

#include <fedform/coalitional.hpp>
#include <fedform/core.hpp>
#include <fedform/fixtures.hpp>
#include <fedform/hedonic.hpp>
#include <fedform/placement.hpp>
#include <fedform/workbench.hpp>

#include <benchmark/benchmark.h>

using namespace fedform;

namespace {

void BM_WarmUp(benchmark::State& state)
{
	const Scenario s = generate_scenario(GeneratorConfig::experiment(), 0);
	for (auto _ : state)
	{
		CharacteristicTable table(s);
		table.warm_up(static_cast<int>(state.range(0)));
		benchmark::DoNotOptimize(table.memo_size());
	}
}
BENCHMARK(BM_WarmUp)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Batch(benchmark::State& state)
{
	const GeneratorConfig cfg = GeneratorConfig::experiment();
	for (auto _ : state)
	{
		const BatchResult r = run_batch(cfg, 8, static_cast<int>(state.range(0)));
		benchmark::DoNotOptimize(r.summary.energy_reduction_pct.mean);
	}
}
BENCHMARK(BM_Batch)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_AnalyzePartitions(benchmark::State& state)
{
	std::map<Coalition, double> v;
	const int n = 8;
	for (std::uint32_t m = 1; m < (1u << n); ++m)
	{
		const Coalition c = Coalition::from_mask(m);
		v[c] = c.size() * 1.5 - 0.1 * c.size() * c.size() + 0.01 * (m % 7);
	}
	CharacteristicTable table(n, v);
	table.warm_up();
	for (auto _ : state)
	{
		const auto reports = analyze_partitions(table, static_cast<int>(state.range(0)));
		benchmark::DoNotOptimize(reports.size());
	}
}
BENCHMARK(BM_AnalyzePartitions)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SolveSymmetric(benchmark::State& state)
{
	const auto prob = build_problem(fixtures::scenario2(), Coalition{1, 2, 3});
	for (auto _ : state)
	{
		benchmark::DoNotOptimize(solve_symmetric(prob).objective);
	}
}
BENCHMARK(BM_SolveSymmetric)->Unit(benchmark::kMillisecond);

void BM_SolveNaive(benchmark::State& state)
{
	const auto prob = build_problem(fixtures::case_study(), Coalition{4});
	for (auto _ : state)
	{
		benchmark::DoNotOptimize(solve_naive(prob).objective);
	}
}
BENCHMARK(BM_SolveNaive)->Unit(benchmark::kMillisecond);

void BM_CheckCore(benchmark::State& state)
{
	CoreGame g;
	g.n = static_cast<int>(state.range(0));
	for (std::uint32_t m = 1; m < (1u << g.n); ++m)
	{
		const Coalition c = Coalition::from_mask(m);
		g.values[c] = Rational(static_cast<long>(c.size() * c.size() + m % 5), 4);
	}
	for (auto _ : state)
	{
		benchmark::DoNotOptimize(check_core(g).empty);
	}
}
BENCHMARK(BM_CheckCore)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
