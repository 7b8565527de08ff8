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
#include <fedform/hedonic.hpp>

#include <doctest.h>

#include <set>

using namespace fedform;

namespace {

std::map<Coalition, double> random_game(Rng& rng, int n)
{
	std::map<Coalition, double> v;
	for (std::uint32_t m = 1; m < (1u << n); ++m)
	{
		const Coalition c = Coalition::from_mask(m);
		v[c] = static_cast<double>(c.size()) * 2.0 + static_cast<double>(rng.uniform_int(-8, 8)) / 2.0;
	}
	return v;
}

/// Nash stability straight from the definition, on Shapley payoffs by permutation.
bool oracle_nash(const std::map<Coalition, double>& v, const Partition& p)
{
	for (ProviderId i = 1; i <= p.num_players(); ++i)
	{
		const double now = testing::permutation_shapley(v, p.block_of(i)).at(i);
		std::vector<Coalition> options{Coalition{i}};
		for (Coalition b : p.blocks())
		{
			if (!b.contains(i))
			{
				options.push_back(b.with(i));
			}
		}
		for (Coalition c : options)
		{
			if (c != p.block_of(i) && testing::permutation_shapley(v, c).at(i) > now + Preference::epsilon)
			{
				return false;
			}
		}
	}
	return true;
}

}  // namespace

TEST_CASE("partition enumeration yields Bell(n) distinct valid partitions")
{
	const std::uint64_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877};
	for (int n = 1; n <= 7; ++n)
	{
		CHECK(bell_number(n) == bell[n]);
		const auto parts = enumerate_partitions(n);
		CHECK(parts.size() == bell[n]);
		std::set<std::string> seen;
		for (const auto& p : parts)
		{
			seen.insert(p.to_string());
			std::uint32_t cover = 0;
			for (Coalition b : p.blocks())
			{
				CHECK((cover & b.mask()) == 0);
				cover |= b.mask();
			}
			CHECK(cover == Coalition::grand(n).mask());
		}
		CHECK(seen.size() == parts.size());
	}
	CHECK(bell_number(13) == 27644437);
}

TEST_CASE("partition spec syntax round-trips and rejects bad input")
{
	const Partition p = Partition::parse("{2,4}{1,3}", 4);
	CHECK(p.to_string() == "{1,3}{2,4}");
	CHECK(Partition::parse(p.to_string(), 4) == p);
	CHECK(p.block_of(4) == Coalition{2, 4});
	CHECK(Partition::parse("{1}{2}{3}", 3) == Partition::singletons(3));
	CHECK(Partition::parse("{1,2,3}", 3) == Partition::grand(3));
	CHECK_THROWS_AS(Partition::parse("{1,2}", 3), std::invalid_argument);
	CHECK_THROWS_AS(Partition::parse("{1,2}{2,3}", 3), std::invalid_argument);
	CHECK_THROWS_AS(Partition::parse("{1,x}{2}", 2), std::invalid_argument);
	CHECK_THROWS_AS(Partition::parse("1,2", 2), std::invalid_argument);
	CHECK_THROWS_AS(Partition::parse("{1}{4}", 2), std::invalid_argument);
}

TEST_CASE("history stores the coalitions a provider left")
{
	HistorySet h(3);
	h.add(1, Coalition{1, 2});
	CHECK(h.contains(1, Coalition{1, 2}));
	CHECK_FALSE(h.contains(2, Coalition{1, 2}));
	CHECK_FALSE(h.contains(1, Coalition{1, 3}));
	CHECK(h.of(1).size() == 1);
	CHECK_THROWS_AS(h.add(3, Coalition{1, 2}), std::domain_error);
}

TEST_CASE("preference order with epsilon and forbidden coalitions")
{
	CHECK(Preference::payoff(1.0).better_than(Preference::payoff(0.5)));
	CHECK_FALSE(Preference::payoff(1.0).better_than(Preference::payoff(1.0 - 1e-12)));
	CHECK(Preference::payoff(-5).better_than(Preference::forbidden()));
	CHECK_FALSE(Preference::forbidden().better_than(Preference::payoff(-5)));
	CHECK_FALSE(Preference::forbidden().better_than(Preference::forbidden()));
	CHECK_THROWS_AS(Preference::forbidden().value(), std::logic_error);

	std::map<Coalition, double> v{{{1}, 1}, {{2}, 1}, {{1, 2}, 4}};
	CharacteristicTable table(2, v);
	HistorySet h(2);
	CHECK(preference(1, Coalition{1, 2}, h, table).value() == doctest::Approx(2));
	h.add(1, Coalition{1, 2});
	CHECK(preference(1, Coalition{1, 2}, h, table).is_forbidden());
	CHECK_THROWS_AS(preference(1, Coalition{2}, h, table), std::domain_error);
}

TEST_CASE("shift rule picks the best strict improvement")
{
	std::map<Coalition, double> v{{{1}, 1}, {{2}, 1}, {{3}, 1}, {{1, 2}, 3}, {{1, 3}, 5}, {{2, 3}, 2}, {{1, 2, 3}, 6}};
	CharacteristicTable table(3, v);
	const Partition p = Partition::singletons(3);
	HistorySet h(3);
	const auto t = find_shift(1, p, h, table);
	REQUIRE(t);
	CHECK(*t == Coalition{3});
	HistorySet rec(3);
	const Partition q = apply_shift(p, 1, *t, &rec);
	CHECK(q.to_string() == "{1,3}{2}");
	CHECK(rec.contains(1, Coalition{1}));
	// nothing beats 2.5 for provider 1 from {1,3}
	CHECK_FALSE(find_shift(1, q, rec, table));
	const Partition alone = apply_shift(q, 3, Coalition{});
	CHECK(alone == Partition::singletons(3));
}

TEST_CASE("formation converges to a Nash- and individually-stable partition")
{
	Rng rng(1);
	testing::RandomScenarioSpec spec;
	int with_shift = 0;
	for (int k = 0; k < 200; ++k)
	{
		const Scenario s = testing::random_scenario(rng, spec);
		const int n = static_cast<int>(s.providers.size());
		CharacteristicTable table(s);
		bool singletons_ok = true;
		for (ProviderId i = 1; i <= n; ++i)
		{
			singletons_ok = singletons_ok && table.feasible(Coalition{i});
		}
		if (!singletons_ok)
		{
			continue;
		}
		CAPTURE(k);
		FormationTrace trace;
		REQUIRE_NOTHROW(trace = run_formation(table, Partition::singletons(n)));
		with_shift += !trace.steps.empty();
		CHECK(is_nash_stable(trace.final_partition, table).stable);
		CHECK(is_individually_stable(trace.final_partition, table).stable);
		for (ProviderId i = 1; i <= n; ++i)
		{
			const double got = table.payoffs(trace.final_partition.block_of(i)).at(i);
			CHECK(got >= table.value(Coalition{i}) - 1e-9);
		}
		for (const auto& st : trace.steps)
		{
			CHECK(table.payoffs(st.to).at(st.provider) > table.payoffs(st.from).at(st.provider));
		}
	}
	CHECK(with_shift > 50);
}

TEST_CASE("stability checks agree with the definition on random games")
{
	Rng rng(4);
	for (int k = 0; k < 25; ++k)
	{
		const int n = static_cast<int>(rng.uniform_int(2, 4));
		const auto v = random_game(rng, n);
		CharacteristicTable table(n, v);
		for (const auto& p : enumerate_partitions(n))
		{
			const bool nash = is_nash_stable(p, table).stable;
			CHECK(nash == oracle_nash(v, p));
			if (nash)
			{
				CHECK(is_individually_stable(p, table).stable);
			}
		}
	}
}

// Two 4-player games where the literal history rule misbehaves. A provider
// passively returned to a coalition it once left sees that coalition as
// forbidden, so any move beats staying. The placement-derived games above
// never hit this; abstract games can.

TEST_CASE("literal history can end at a partition that is not Nash-stable")
{
	const std::map<Coalition, double> v{{{1}, -1.5},      {{2}, -0.5},    {{3}, 2},     {{4}, 3.5},
	                                    {{1, 2}, 0},      {{1, 3}, 2.5},  {{1, 4}, 1},  {{2, 3}, 3},
	                                    {{2, 4}, 4},      {{3, 4}, 6.5},  {{1, 2, 3}, 8.5}, {{1, 2, 4}, 2.5},
	                                    {{1, 3, 4}, 10},  {{2, 3, 4}, 4.5}, {{1, 2, 3, 4}, 9}};
	CharacteristicTable table(4, v);
	const auto trace = run_formation(table, Partition::singletons(4), SchedulePolicy::random(7));
	CHECK(trace.final_partition == Partition::grand(4));
	const auto& last = trace.steps.back();
	CHECK(last.provider == 4);
	CHECK(last.from == Coalition{4});
	// CP4 accepts a lower payoff because {4} is in its history
	CHECK(table.payoffs(last.to).at(4) < table.value(Coalition{4}));
	const auto w = is_nash_stable(trace.final_partition, table);
	CHECK_FALSE(w.stable);
	CHECK(w.provider == 4);
	CHECK(w.target.empty());
}

TEST_CASE("literal history can cycle")
{
	const std::map<Coalition, double> v{{{1}, 4},         {{2}, 1},       {{3}, 3},       {{4}, 4.5},
	                                    {{1, 2}, 3.5},    {{1, 3}, 7.5},  {{1, 4}, 1.5},  {{2, 3}, 6.5},
	                                    {{2, 4}, 4.5},    {{3, 4}, 1},    {{1, 2, 3}, 6}, {{1, 2, 4}, 6},
	                                    {{1, 3, 4}, 2},   {{2, 3, 4}, 8}, {{1, 2, 3, 4}, 4.5}};
	CharacteristicTable table(4, v);
	CHECK_THROWS_AS(run_formation(table, Partition::singletons(4), {}, 100000), convergence_error);
}

TEST_CASE("case study has exactly two Nash-stable partitions")
{
	CharacteristicTable table(fixtures::case_study());
	const auto reports = analyze_partitions(table);
	REQUIRE(reports.size() == 15);
	std::vector<std::string> stable;
	for (const auto& r : reports)
	{
		if (r.nash_stable)
		{
			stable.push_back(r.partition.to_string());
		}
		CHECK(r.feasible);
	}
	CHECK(stable == std::vector<std::string>{"{1,2,3,4}", "{1,3}{2,4}"});
}

TEST_CASE("case study formation paths")
{
	CharacteristicTable table(fixtures::case_study());
	const auto fixed = run_formation(table, Partition::singletons(4), SchedulePolicy::fixed({3, 2, 4, 1}));
	REQUIRE_FALSE(fixed.steps.empty());
	CHECK(fixed.steps.front().provider == 3);
	CHECK(is_nash_stable(fixed.final_partition, table).stable);

	const auto rr = run_formation(table, Partition::singletons(4));
	const auto fin = rr.final_partition.to_string();
	CHECK((fin == "{1,2,3,4}" || fin == "{1,3}{2,4}"));

	const auto a = run_formation(table, Partition::singletons(4), SchedulePolicy::random(99));
	const auto b = run_formation(table, Partition::singletons(4), SchedulePolicy::random(99));
	CHECK(a.final_partition == b.final_partition);
	CHECK(a.steps.size() == b.steps.size());

	CHECK_THROWS_AS(run_formation(table, Partition::singletons(4), SchedulePolicy::fixed({1, 2})),
	                std::invalid_argument);
	CHECK_THROWS_AS(run_formation(table, Partition::singletons(4), {}, 1), convergence_error);
}

TEST_CASE("formation starting from a stable partition makes no shift")
{
	CharacteristicTable table(fixtures::case_study());
	const auto trace = run_formation(table, Partition::grand(4));
	CHECK(trace.steps.empty());
	CHECK(trace.final_partition == Partition::grand(4));
}

TEST_CASE("parallel partition analysis matches serial")
{
	const Scenario s = fixtures::case_study();
	CharacteristicTable a(s);
	CharacteristicTable b(s);
	const auto serial = analyze_partitions(a, 1);
	const auto parallel = analyze_partitions(b, 4);
	REQUIRE(serial.size() == parallel.size());
	for (std::size_t k = 0; k < serial.size(); ++k)
	{
		CHECK(serial[k].partition == parallel[k].partition);
		CHECK(serial[k].total == parallel[k].total);
		CHECK(serial[k].nash_stable == parallel[k].nash_stable);
		CHECK(serial[k].individually_stable == parallel[k].individually_stable);
	}
}
