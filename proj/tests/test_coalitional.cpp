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

#include <fedform/coalitional.hpp>
#include <fedform/fixtures.hpp>

#include <doctest.h>

#include <cmath>

using namespace fedform;
using fedform::testing::permutation_shapley;

namespace {

std::map<Coalition, double> random_game(Rng& rng, int n)
{
	std::map<Coalition, double> v;
	for (std::uint32_t m = 1; m < (1u << n); ++m)
	{
		v[Coalition::from_mask(m)] = static_cast<double>(rng.uniform_int(-20, 100)) / 4.0;
	}
	return v;
}

void check_axioms(CharacteristicTable& table, Coalition s)
{
	const PayoffVector phi = table.payoffs(s);
	double sum = 0;
	for (const auto& [i, x] : phi)
	{
		sum += x;
	}
	CHECK(std::abs(sum - table.value(s)) <= 1e-9);  // efficiency

	const auto members = s.members();
	for (ProviderId i : members)
	{
		// dummy: zero marginal contribution everywhere gives zero payoff
		bool dummy = true;
		for (std::uint32_t m = 0; m <= s.mask(); ++m)
		{
			const Coalition t = Coalition::from_mask(m);
			if ((t | s) != s || t.contains(i))
			{
				continue;
			}
			const double vt = t.empty() ? 0.0 : table.value(t);
			dummy = dummy && std::abs(table.value(t.with(i)) - vt) <= 1e-12;
		}
		if (dummy)
		{
			CHECK(std::abs(phi.at(i)) <= 1e-9);
		}
		for (ProviderId j : members)
		{
			if (j <= i)
			{
				continue;
			}
			// symmetry: interchangeable players get equal payoffs
			bool twins = true;
			for (std::uint32_t m = 0; m <= s.mask(); ++m)
			{
				const Coalition t = Coalition::from_mask(m);
				if ((t | s) != s || t.contains(i) || t.contains(j))
				{
					continue;
				}
				twins = twins && std::abs(table.value(t.with(i)) - table.value(t.with(j))) <= 1e-12;
			}
			if (twins)
			{
				CHECK(std::abs(phi.at(i) - phi.at(j)) <= 1e-9);
			}
		}
	}
}

}  // namespace

TEST_CASE("Shapley value matches the average over all orderings")
{
	Rng rng(3);
	for (int k = 0; k < 30; ++k)
	{
		const int n = static_cast<int>(rng.uniform_int(1, 5));
		const auto v = random_game(rng, n);
		CharacteristicTable table(n, v);
		for (const auto& [s, value] : v)
		{
			const auto expected = permutation_shapley(v, s);
			const auto phi = table.payoffs(s);
			REQUIRE(phi.size() == expected.size());
			for (const auto& [i, x] : expected)
			{
				CHECK(phi.at(i) == doctest::Approx(x).epsilon(1e-12));
			}
		}
	}
}

TEST_CASE("Shapley axioms hold on random and structured games")
{
	Rng rng(8);
	for (int k = 0; k < 20; ++k)
	{
		const int n = static_cast<int>(rng.uniform_int(2, 5));
		auto v = random_game(rng, n);
		// make player n a dummy and players 1, 2 interchangeable
		for (auto& [s, x] : v)
		{
			if (s.contains(n) && s.size() == 1)
			{
				x = 0;
			}
			if (s.contains(n) && s.size() > 1)
			{
				x = v.at(s.without(n));
			}
		}
		if (n >= 3)
		{
			for (auto& [s, x] : v)
			{
				if (s.contains(2) && !s.contains(1))
				{
					x = v.at(s.without(2).with(1));
				}
			}
		}
		CharacteristicTable table(n, v);
		for (const auto& [s, x] : v)
		{
			check_axioms(table, s);
		}
		const auto phi = table.payoffs(table.grand());
		CHECK(std::abs(phi.at(n)) <= 1e-9);
		if (n >= 3)
		{
			CHECK(phi.at(1) == doctest::Approx(phi.at(2)));
		}
	}
}

TEST_CASE("Shapley axioms hold on every case-study coalition")
{
	CharacteristicTable table(fixtures::case_study());
	for (std::uint32_t m = 1; m < 16; ++m)
	{
		check_axioms(table, Coalition::from_mask(m));
	}
}

TEST_CASE("payoffs use the game restricted to the coalition")
{
	std::map<Coalition, double> v{{{1}, 1}, {{2}, 2}, {{3}, 3}, {{1, 2}, 10}, {{1, 3}, 4}, {{2, 3}, 5}, {{1, 2, 3}, 100}};
	CharacteristicTable table(3, v);
	const auto phi = table.payoffs(Coalition{1, 2});
	CHECK(phi.size() == 2);
	CHECK(phi.at(1) == doctest::Approx(4.5));
	CHECK(phi.at(2) == doctest::Approx(5.5));
	CHECK(table.payoffs(Coalition{3}).at(3) == 3);
}

TEST_CASE("coalition value is revenue minus minimum energy cost")
{
	const Scenario s = fixtures::scenario1();
	CharacteristicTable table(s);
	for (std::uint32_t m = 1; m < 8; ++m)
	{
		const Coalition c = Coalition::from_mask(m);
		const auto e = table.entry(c);
		double revenue = 0;
		for (ProviderId i : c.members())
		{
			revenue += s.revenue(i);
		}
		const auto rep = solve_symmetric(build_problem(s, c));
		CHECK(e.revenue == doctest::Approx(revenue));
		CHECK(e.energy_cost == doctest::Approx(rep.objective));
		CHECK(e.value == doctest::Approx(revenue - rep.objective));
		CHECK(coalition_value(table, c) == e.value);
	}
}

TEST_CASE("memoization is transparent")
{
	const Scenario s = fixtures::case_study();
	CharacteristicTable cold(s);
	CharacteristicTable warm(s);
	warm.warm_up(4);
	CHECK(warm.memo_size() == 15);
	for (std::uint32_t m = 1; m < 16; ++m)
	{
		const Coalition c = Coalition::from_mask(m);
		const double first = cold.value(c);
		CHECK(cold.value(c) == first);
		CHECK(warm.value(c) == first);
		CHECK(warm.payoffs(c) == cold.payoffs(c));
	}
	cold.clear();
	CHECK(cold.memo_size() == 0);
	CHECK(cold.value(Coalition{1, 3}) == warm.value(Coalition{1, 3}));
}

TEST_CASE("parallel warm-up matches serial evaluation")
{
	Rng rng(19);
	for (int k = 0; k < 5; ++k)
	{
		const Scenario s = testing::random_scenario(rng);
		CharacteristicTable serial(s);
		CharacteristicTable parallel(s);
		serial.warm_up(1);
		parallel.warm_up(4);
		for (std::uint32_t m = 1; m <= serial.grand().mask(); ++m)
		{
			const Coalition c = Coalition::from_mask(m);
			REQUIRE(serial.feasible(c) == parallel.feasible(c));
			if (serial.feasible(c))
			{
				CHECK(serial.value(c) == parallel.value(c));
			}
		}
	}
}

TEST_CASE("concurrent lookups agree")
{
	CharacteristicTable table(fixtures::case_study());
	std::vector<double> got(64, 0.0);
#pragma omp parallel for num_threads(4)
	for (int k = 0; k < 64; ++k)
	{
		got[static_cast<std::size_t>(k)] = table.value(Coalition::from_mask(static_cast<std::uint32_t>(k % 15 + 1)));
	}
	for (int k = 0; k < 64; ++k)
	{
		CHECK(got[static_cast<std::size_t>(k)] == table.value(Coalition::from_mask(static_cast<std::uint32_t>(k % 15 + 1))));
	}
}

TEST_CASE("infeasible coalitions raise and poison payoffs of supersets")
{
	Scenario s = fixtures::base();
	fixtures::add_provider(s, {1, 0, 0}, {0, 0, 2});
	fixtures::add_provider(s, {0, 0, 2}, {1, 0, 0});
	CharacteristicTable table(s);
	CHECK_FALSE(table.feasible(Coalition{1}));
	CHECK_THROWS_AS(table.value(Coalition{1}), infeasible_coalition_error);
	CHECK(table.feasible(Coalition{1, 2}));
	try
	{
		table.payoffs(Coalition{1, 2});
		FAIL("expected infeasible_coalition_error");
	}
	catch (const infeasible_coalition_error& e)
	{
		CHECK(e.coalition() == Coalition{1});
	}
}

TEST_CASE("tabulated games reject gaps and oversize requests")
{
	CharacteristicTable table(2, {{{1}, 1.0}, {{1, 2}, 3.0}});
	CHECK(table.value(Coalition{1, 2}) == 3.0);
	CHECK_THROWS_AS(table.value(Coalition{2}), std::domain_error);
	CHECK_THROWS_AS(table.value(Coalition{3}), std::domain_error);
	CHECK_THROWS_AS(marginal_contribution(table, Coalition{1}, 1), std::domain_error);
	CHECK(marginal_contribution(table, Coalition{}, 1) == 1.0);

	TableOptions small;
	small.shapley_cap = 2;
	std::map<Coalition, double> v;
	for (std::uint32_t m = 1; m < 8; ++m)
	{
		v[Coalition::from_mask(m)] = 1;
	}
	CharacteristicTable capped(3, v, small);
	CHECK_NOTHROW(capped.payoffs(Coalition{1, 2}));
	CHECK_THROWS_AS(capped.payoffs(Coalition{1, 2, 3}), size_error);
}
