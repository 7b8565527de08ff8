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

#include "support.hpp"

#include <fedform/fixtures.hpp>
#include <fedform/placement.hpp>

#include <doctest.h>

#include <cmath>

using namespace fedform;
using fedform::testing::brute_force_cost;
using fedform::testing::random_scenario;
using fedform::testing::RandomScenarioSpec;

namespace {

Coalition all_of(const Scenario& s)
{
	return Coalition::grand(static_cast<int>(s.providers.size()));
}

int hosts_on(const PlacementProblem& p, const Allocation& a, ProviderId cp)
{
	int n = 0;
	for (std::size_t i = 0; i < p.num_hosts(); ++i)
	{
		n += a.powered_on[i] && p.hosts[i].owner == cp;
	}
	return n;
}

}  // namespace

TEST_CASE("scenario 1 standalone and joint placements")
{
	const Scenario s = fixtures::scenario1();
	const int expected_hosts[] = {10, 10, 4};
	const double expected_cost[] = {0.95, 1.47, 1.54};
	double standalone = 0;
	for (ProviderId i = 1; i <= 3; ++i)
	{
		const auto prob = build_problem(s, Coalition{i});
		const auto rep = solve_symmetric(prob);
		REQUIRE(rep.status == SolveStatus::optimal);
		CHECK(hosts_on(prob, *rep.allocation, i) == expected_hosts[i - 1]);
		CHECK(std::abs(rep.objective - expected_cost[i - 1]) <= 0.01);
		standalone += rep.objective;
	}
	const auto prob = build_problem(s, Coalition{1, 2, 3});
	const auto rep = solve_symmetric(prob);
	REQUIRE(rep.status == SolveStatus::optimal);
	CHECK(std::count(rep.allocation->powered_on.begin(), rep.allocation->powered_on.end(), true) == 30);
	CHECK(std::abs(rep.objective - 2.85) <= 0.01);
	CHECK(std::abs(rep.allocation->power_watts / 1000 - 7.12) <= 0.01);
	CHECK(rep.objective < standalone);
}

TEST_CASE("exact solvers agree with exhaustive assignment")
{
	Rng rng(2024);
	RandomScenarioSpec spec;
	spec.min_providers = 1;
	spec.max_providers = 2;
	spec.max_hosts = 3;
	spec.max_vms = 3;
	int feasible = 0;
	for (int k = 0; k < 60; ++k)
	{
		const Scenario s = random_scenario(rng, spec);
		const Coalition c = all_of(s);
		const double oracle = brute_force_cost(s, c);
		const auto prob = build_problem(s, c);
		const auto naive = solve_naive(prob);
		const auto sym = solve_symmetric(prob);
		CAPTURE(k);
		if (std::isinf(oracle))
		{
			CHECK(naive.status == SolveStatus::infeasible);
			CHECK(sym.status == SolveStatus::infeasible);
			CHECK_FALSE(sym.allocation.has_value());
			continue;
		}
		++feasible;
		REQUIRE(naive.status == SolveStatus::optimal);
		REQUIRE(sym.status == SolveStatus::optimal);
		CHECK(std::abs(naive.objective - oracle) <= 1e-9);
		CHECK(std::abs(sym.objective - oracle) <= 1e-9);
		CHECK(std::abs(objective_value(prob, *sym.allocation) - sym.objective) <= 1e-9);
	}
	CHECK(feasible > 30);
}

TEST_CASE("symmetric and naive solvers agree on random tiny instances")
{
	Rng rng(77);
	RandomScenarioSpec spec;
	spec.min_providers = 1;
	spec.max_providers = 3;
	spec.max_hosts = 3;
	spec.max_vms = 4;
	for (int k = 0; k < 100; ++k)
	{
		const Scenario s = random_scenario(rng, spec);
		const auto prob = build_problem(s, all_of(s));
		const auto naive = solve_naive(prob);
		const auto sym = solve_symmetric(prob);
		CAPTURE(k);
		REQUIRE(naive.status == sym.status);
		if (naive.status != SolveStatus::optimal)
		{
			continue;
		}
		CHECK(std::abs(naive.objective - sym.objective) <= 1e-9);
		CHECK_NOTHROW(check_allocation(prob, *naive.allocation));
		CHECK_NOTHROW(check_allocation(prob, *sym.allocation));
	}
}

TEST_CASE("returned allocations satisfy every placement constraint")
{
	Rng rng(5);
	for (int k = 0; k < 40; ++k)
	{
		const Scenario s = random_scenario(rng);
		const auto prob = build_problem(s, all_of(s));
		const auto rep = solve_symmetric(prob);
		if (!rep.allocation)
		{
			continue;
		}
		const Allocation& a = *rep.allocation;
		CHECK_NOTHROW(check_allocation(prob, a));
		std::vector<double> cpu(prob.num_hosts(), 0.0);
		std::vector<double> ram(prob.num_hosts(), 0.0);
		for (std::size_t j = 0; j < prob.num_vms(); ++j)
		{
			REQUIRE(a.host_of[j] < prob.num_hosts());
			CHECK(a.powered_on[a.host_of[j]]);
			cpu[a.host_of[j]] += prob.cpu(j, a.host_of[j]);
			ram[a.host_of[j]] += prob.ram(j, a.host_of[j]);
		}
		for (std::size_t i = 0; i < prob.num_hosts(); ++i)
		{
			CHECK(cpu[i] <= 1 + 1e-9);
			CHECK(ram[i] <= 1 + 1e-9);
			CHECK(std::abs(a.utilization[i] - cpu[i]) <= 1e-9);
			if (!a.powered_on[i])
			{
				CHECK(a.utilization[i] == 0.0);
			}
		}
	}
}

TEST_CASE("check_allocation names the violated constraint")
{
	const Scenario s = fixtures::scenario1();
	const auto prob = build_problem(s, Coalition{3});
	const Allocation good = *solve_symmetric(prob).allocation;

	auto violation = [&](Allocation a) -> std::string {
		try
		{
			check_allocation(prob, a);
		}
		catch (const constraint_violation& e)
		{
			return e.constraint();
		}
		return "";
	};
	CHECK(violation(good).empty());

	Allocation a = good;
	a.host_of.pop_back();
	CHECK(violation(a) == "assignment");

	a = good;
	const std::size_t used = a.host_of[0];
	a.powered_on[used] = false;
	CHECK(violation(a) == "powered-host");

	a = good;
	a.utilization[used] += 0.1;
	CHECK(violation(a) == "utilization");

	a = good;
	a.utilization.assign(prob.num_hosts(), 0.0);
	for (std::size_t j = 0; j < prob.num_vms(); ++j)
	{
		a.host_of[j] = used;
		a.utilization[used] += prob.cpu(j, used);
	}
	CHECK(violation(a) == "cpu-capacity");
	CHECK_THROWS_AS(make_allocation(prob, a.host_of), constraint_violation);
}

TEST_CASE("cost breakdown adds up to the objective")
{
	const Scenario s = fixtures::case_study();
	const auto prob = build_problem(s, Coalition{1, 3});
	const auto rep = solve_symmetric(prob);
	REQUIRE(rep.allocation);
	const auto b = cost_breakdown(prob, *rep.allocation);
	CHECK(b.total() == doctest::Approx(rep.objective));
	CHECK(b.migration_cost >= 0);
	CHECK(b.idle_power > 0);
	double by_provider = 0;
	for (const auto& [p, u] : usage_by_provider(prob, *rep.allocation))
	{
		by_provider += u.energy_cost;
	}
	CHECK(by_provider + b.migration_cost == doctest::Approx(rep.objective));
}

TEST_CASE("first-fit decreasing gives a feasible upper bound")
{
	Rng rng(31);
	for (int k = 0; k < 30; ++k)
	{
		const Scenario s = random_scenario(rng);
		const auto prob = build_problem(s, all_of(s));
		const auto rep = solve_symmetric(prob);
		if (!rep.allocation)
		{
			continue;
		}
		Allocation h;
		try
		{
			h = heuristic_ffd(prob);
		}
		catch (const infeasible_placement_error&)
		{
			continue;
		}
		CHECK_NOTHROW(check_allocation(prob, h));
		CHECK(objective_value(prob, h) >= rep.objective - 1e-9);
	}
}

TEST_CASE("empty workload costs the cheaper of on and off per host")
{
	Scenario s = fixtures::base();
	fixtures::add_provider(s, {2, 1, 1}, {0, 0, 0});
	s.host_classes[0].switch_energy_off = 1;
	s.providers[0].hosts[0].initially_on = true;
	s.providers[0].hosts[1].initially_on = false;
	const auto prob = build_problem(s, Coalition{1});
	const auto rep = solve_symmetric(prob);
	REQUIRE(rep.status == SolveStatus::optimal);
	double expected = 0;
	for (std::size_t i = 0; i < prob.num_hosts(); ++i)
	{
		expected += std::min(prob.on_cost(i), prob.off_cost(i));
	}
	CHECK(rep.objective == doctest::Approx(expected));
	CHECK(std::none_of(rep.allocation->powered_on.begin(), rep.allocation->powered_on.end(), [](bool b) { return b; }));
}

TEST_CASE("workload that fits nowhere is infeasible")
{
	Scenario s = fixtures::base();
	fixtures::add_provider(s, {1, 0, 0}, {0, 0, 2});
	const auto prob = build_problem(s, Coalition{1});
	CHECK(solve_symmetric(prob).status == SolveStatus::infeasible);
	CHECK(solve_naive(prob).status == SolveStatus::infeasible);
}

TEST_CASE("time limit returns the incumbent flagged as limited")
{
	const Scenario s = fixtures::scenario2();
	const auto prob = build_problem(s, Coalition{1, 2, 3});
	SolverOptions opt;
	opt.time_limit_s = 1e-9;
	const auto rep = solve_naive(prob, opt);
	CHECK(rep.status == SolveStatus::time_limited);
	if (rep.allocation)
	{
		CHECK_NOTHROW(check_allocation(prob, *rep.allocation));
		CHECK(rep.lower_bound <= rep.objective + 1e-9);
	}
}

TEST_CASE("migration pulls VMs toward their current provider")
{
	Scenario s = fixtures::base();
	fixtures::add_provider(s, {1, 0, 0}, {1, 0, 0});
	fixtures::add_provider(s, {1, 0, 0}, {0, 0, 0});
	s.providers[0].vms[0].current_host = s.providers[0].hosts[0].id;
	s.migration.transfer_cost_per_gb = 1;
	s.migration.data_rate_mbit_s = 100;
	s.migration.migration_time_s = {1000, 1000, 1000};
	const auto prob = build_problem(s, Coalition{1, 2});
	const auto rep = solve_symmetric(prob);
	REQUIRE(rep.allocation);
	CHECK(prob.hosts[rep.allocation->host_of[0]].owner == 1);
	CHECK(rep.objective == doctest::Approx(brute_force_cost(s, Coalition{1, 2})));
}
