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

#include <fedform/core.hpp>
#include <fedform/fixtures.hpp>
#include <fedform/hedonic.hpp>

#include <doctest.h>

#include <array>

using namespace fedform;

namespace {

CoreGame game_of(int n, const std::map<Coalition, std::string>& values)
{
	CoreGame g;
	g.n = n;
	for (const auto& [c, text] : values)
	{
		g.values[c] = parse_decimal(text);
	}
	return g;
}

CoreGame scenario2_game()
{
	return game_of(3, {{{1}, "6.21"}, {{2}, "4.15"}, {{3}, "4.15"}, {{1, 2}, "12.08"}, {{1, 3}, "12.08"},
	                   {{2, 3}, "8.49"}, {{1, 2, 3}, "16.27"}});
}

CoreGame appendix_game()
{
	return game_of(3, {{{1}, "0.345"}, {{2}, "0.095"}, {{3}, "0.095"}, {{1, 2}, "0.513"}, {{1, 3}, "0.513"},
	                   {{2, 3}, "0.225"}, {{1, 2, 3}, "0.623"}});
}

/**
 * Core non-emptiness for three players by vertex enumeration: every
 * vertex of the (bounded) core makes two inequalities and the efficiency
 * equation tight.
 */
bool oracle_core_nonempty(const CoreGame& g)
{
	std::vector<std::pair<std::array<Rational, 3>, Rational>> ineq;
	for (std::uint32_t m = 1; m < 7; ++m)
	{
		const Coalition c = Coalition::from_mask(m);
		std::array<Rational, 3> a{0, 0, 0};
		for (ProviderId i : c.members())
		{
			a[static_cast<std::size_t>(i - 1)] = 1;
		}
		ineq.push_back({a, g.value(c)});
	}
	const Rational vn = g.value(Coalition{1, 2, 3});
	auto det3 = [](const std::array<std::array<Rational, 3>, 3>& m) {
		return Rational(m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
		                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]));
	};
	for (std::size_t p = 0; p < ineq.size(); ++p)
	{
		for (std::size_t q = p + 1; q < ineq.size(); ++q)
		{
			std::array<std::array<Rational, 3>, 3> m{ineq[p].first, ineq[q].first, {1, 1, 1}};
			const std::array<Rational, 3> rhs{ineq[p].second, ineq[q].second, vn};
			const Rational d = det3(m);
			if (d == 0)
			{
				continue;
			}
			std::array<Rational, 3> x;
			for (std::size_t k = 0; k < 3; ++k)
			{
				auto mk = m;
				for (std::size_t r = 0; r < 3; ++r)
				{
					mk[r][k] = rhs[r];
				}
				x[k] = det3(mk) / d;
			}
			bool ok = true;
			for (const auto& [a, b] : ineq)
			{
				ok = ok && a[0] * x[0] + a[1] * x[1] + a[2] * x[2] >= b;
			}
			if (ok)
			{
				return true;
			}
		}
	}
	return false;
}

void check_sound(const CoreGame& g, const CoreResult& r)
{
	if (r.empty)
	{
		REQUIRE_FALSE(r.certificate.empty());
		std::vector<Rational> cover(static_cast<std::size_t>(g.n), 0);
		Rational lhs = 0;
		for (const auto& [c, w] : r.certificate)
		{
			CHECK(w >= 0);
			lhs += w * g.value(c);
			for (ProviderId i : c.members())
			{
				cover[static_cast<std::size_t>(i - 1)] += w;
			}
		}
		for (const auto& t : cover)
		{
			CHECK(t == 1);
		}
		CHECK(lhs == r.weighted_value);
		CHECK(lhs > g.value(Coalition::grand(g.n)));
		CHECK(bondareva_violation(g, r.certificate).violated);
	}
	else
	{
		REQUIRE(r.imputation.size() == static_cast<std::size_t>(g.n));
		CHECK(in_core(g, r.imputation));
		Rational sum = 0;
		for (const auto& x : r.imputation)
		{
			sum += x;
		}
		CHECK(sum == g.value(Coalition::grand(g.n)));
	}
}

CoreGame random_game(Rng& rng, int n)
{
	CoreGame g;
	g.n = n;
	for (std::uint32_t m = 1; m < (1u << n); ++m)
	{
		const Coalition c = Coalition::from_mask(m);
		const auto lo = static_cast<std::int64_t>(c.size()) * 2;
		g.values[c] = Rational(rng.uniform_int(c.size() == 1 ? 0 : lo, lo + 6 * c.size()), 1);
	}
	return g;
}

}  // namespace

TEST_CASE("decimal parsing is exact")
{
	CHECK(parse_decimal("0.625") == Rational(5, 8));
	CHECK(parse_decimal("-1.5") == Rational(-3, 2));
	CHECK(parse_decimal("007") == 7);
	CHECK(parse_decimal("16.325") == Rational(653, 40));
	CHECK(parse_decimal("12.") == 12);
	CHECK_THROWS_AS(parse_decimal(""), std::invalid_argument);
	CHECK_THROWS_AS(parse_decimal("1.2.3"), std::invalid_argument);
	CHECK_THROWS_AS(parse_decimal("abc"), std::invalid_argument);
	CHECK(to_decimal(Rational(1251, 2000), 4) == "0.6255");
	CHECK(exact(0.5) == Rational(1, 2));
}

TEST_CASE("core decision matches vertex enumeration on random 3-player games")
{
	Rng rng(6);
	int empty = 0;
	for (int k = 0; k < 300; ++k)
	{
		const CoreGame g = random_game(rng, 3);
		const CoreResult r = check_core(g);
		CHECK(r.empty == !oracle_core_nonempty(g));
		check_sound(g, r);
		empty += r.empty;
	}
	CHECK(empty > 20);
	CHECK(empty < 280);
}

TEST_CASE("core results are sound for larger games")
{
	Rng rng(10);
	for (int k = 0; k < 40; ++k)
	{
		const CoreGame g = random_game(rng, static_cast<int>(rng.uniform_int(4, 6)));
		check_sound(g, check_core(g));
	}
}

TEST_CASE("additive game core is the singleton imputation")
{
	CoreGame g;
	g.n = 4;
	const Rational single[] = {Rational(3, 2), 2, Rational(1, 3), 0};
	for (std::uint32_t m = 1; m < 16; ++m)
	{
		const Coalition c = Coalition::from_mask(m);
		Rational v = 0;
		for (ProviderId i : c.members())
		{
			v += single[i - 1];
		}
		g.values[c] = v;
	}
	const CoreResult r = check_core(g);
	REQUIRE_FALSE(r.empty);
	for (int i = 0; i < 4; ++i)
	{
		CHECK(r.imputation[static_cast<std::size_t>(i)] == single[i]);
	}
}

TEST_CASE("three-provider game with strong pairs has an empty core")
{
	const CoreGame g = scenario2_game();
	const CoreResult r = check_core(g);
	CHECK(r.empty);
	check_sound(g, r);
	std::map<Coalition, Rational> half{{{1, 2}, Rational(1, 2)}, {{1, 3}, Rational(1, 2)}, {{2, 3}, Rational(1, 2)}};
	const auto b = bondareva_violation(g, half);
	CHECK(b.lhs == parse_decimal("16.325"));
	CHECK(b.rhs == parse_decimal("16.27"));
	CHECK(b.violated);
}

TEST_CASE("small-margin game decided exactly")
{
	const CoreGame g = appendix_game();
	CHECK(check_core(g).empty);
	std::map<Coalition, Rational> half{{{1, 2}, Rational(1, 2)}, {{1, 3}, Rational(1, 2)}, {{2, 3}, Rational(1, 2)}};
	const auto b = bondareva_violation(g, half);
	CHECK(b.lhs == Rational(1251, 2000));
	CHECK(b.rhs == parse_decimal("0.623"));
	CHECK(b.violated);
	// with v(N) raised to the weighted pair sum the core is no longer empty
	CoreGame h = g;
	h.values[Coalition{1, 2, 3}] = Rational(1251, 2000);
	CHECK_FALSE(check_core(h).empty);
}

TEST_CASE("Bondareva weights are validated")
{
	const CoreGame g = scenario2_game();
	const auto trivial = bondareva_violation(g, {{Coalition{1, 2, 3}, 1}});
	CHECK(trivial.lhs == trivial.rhs);
	CHECK_FALSE(trivial.violated);
	CHECK_THROWS_AS(bondareva_violation(g, {{Coalition{1, 2}, 1}}), std::domain_error);
	CHECK_THROWS_AS(bondareva_violation(g, {{Coalition{1, 2, 3}, 2}, {Coalition{1}, -1}}), std::domain_error);
}

TEST_CASE("missing values and oversize games are rejected")
{
	CoreGame g = scenario2_game();
	g.values.erase(Coalition{2, 3});
	CHECK_THROWS_AS(check_core(g), std::domain_error);
	CoreGame big;
	big.n = max_core_players + 1;
	CHECK_THROWS(check_core(big));
}

TEST_CASE("core of a scenario game is built from the coalitional module")
{
	CharacteristicTable table(fixtures::scenario2());
	const CoreGame g = core_game(table);
	CHECK(g.values.size() == 7);
	CHECK(std::abs(g.value(Coalition{1, 2}).get_d() - table.value(Coalition{1, 2})) < 1e-12);
	const CoreResult r = check_core(g);
	CHECK(r.empty);
	check_sound(g, r);
}

TEST_CASE("empty core does not prevent stable formation")
{
	CharacteristicTable table(fixtures::scenario2());
	REQUIRE(check_core(core_game(table)).empty);
	const auto trace = run_formation(table, Partition::singletons(3));
	CHECK(is_nash_stable(trace.final_partition, table).stable);
}
