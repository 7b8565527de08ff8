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

#include <fedform/hedonic.hpp>
#include <fedform/rng.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>

namespace fedform {

Partition::Partition(int n, std::vector<Coalition> blocks) : n_(n), blocks_(std::move(blocks))
{
	if (n < 0 || n > max_players)
	{
		throw std::invalid_argument("partition: player count " + std::to_string(n) + " out of range");
	}
	std::uint32_t seen = 0;
	for (const auto& b : blocks_)
	{
		if (b.empty())
		{
			throw std::invalid_argument("partition: empty block");
		}
		if ((seen & b.mask()) != 0)
		{
			throw std::invalid_argument("partition: blocks overlap at " + (b & Coalition::from_mask(seen)).to_string());
		}
		seen |= b.mask();
	}
	if (seen != Coalition::grand(n).mask())
	{
		throw std::invalid_argument("partition: blocks do not cover exactly 1.." + std::to_string(n));
	}
	std::sort(blocks_.begin(), blocks_.end());
}

Partition Partition::singletons(int n)
{
	std::vector<Coalition> blocks;
	for (ProviderId i = 1; i <= n; ++i)
	{
		blocks.push_back(Coalition{i});
	}
	return Partition(n, std::move(blocks));
}

Partition Partition::grand(int n)
{
	if (n == 0)
	{
		return Partition(0, {});
	}
	return Partition(n, {Coalition::grand(n)});
}

Partition Partition::parse(const std::string& spec, int n)
{
	std::vector<Coalition> blocks;
	std::size_t pos = 0;
	auto skip_space = [&] {
		while (pos < spec.size() && std::isspace(static_cast<unsigned char>(spec[pos])))
		{
			++pos;
		}
	};
	auto fail = [&](const std::string& why) {
		throw std::invalid_argument("partition spec '" + spec + "': " + why);
	};
	skip_space();
	while (pos < spec.size())
	{
		if (spec[pos] != '{')
		{
			fail("expected '{' at offset " + std::to_string(pos));
		}
		++pos;
		Coalition block;
		bool expect_number = true;
		while (true)
		{
			skip_space();
			if (pos >= spec.size())
			{
				fail("unterminated block");
			}
			if (spec[pos] == '}' && !(expect_number && !block.empty()))
			{
				++pos;
				break;
			}
			if (!expect_number)
			{
				if (spec[pos] != ',')
				{
					fail("expected ',' or '}' at offset " + std::to_string(pos));
				}
				++pos;
				expect_number = true;
				continue;
			}
			if (!std::isdigit(static_cast<unsigned char>(spec[pos])))
			{
				fail("expected a provider id at offset " + std::to_string(pos));
			}
			int id = 0;
			while (pos < spec.size() && std::isdigit(static_cast<unsigned char>(spec[pos])))
			{
				id = id * 10 + (spec[pos] - '0');
				if (id > max_players)
				{
					fail("provider id too large");
				}
				++pos;
			}
			if (id < 1 || id > n)
			{
				fail("provider " + std::to_string(id) + " outside 1.." + std::to_string(n));
			}
			if (block.contains(id))
			{
				fail("provider " + std::to_string(id) + " repeated");
			}
			block.insert(id);
			expect_number = false;
		}
		blocks.push_back(block);
		skip_space();
	}
	return Partition(n, std::move(blocks));
}

Coalition Partition::block_of(ProviderId i) const
{
	for (const auto& b : blocks_)
	{
		if (b.contains(i))
		{
			return b;
		}
	}
	throw std::domain_error("provider " + std::to_string(i) + " is not in the partition");
}

std::string Partition::to_string() const
{
	std::string s;
	for (const auto& b : blocks_)
	{
		s += b.to_string();
	}
	return s;
}

void HistorySet::add(ProviderId i, Coalition coalition)
{
	if (!coalition.contains(i))
	{
		throw std::domain_error("history: provider " + std::to_string(i) + " not in " + coalition.to_string());
	}
	if (static_cast<std::size_t>(i) > left_.size())
	{
		left_.resize(static_cast<std::size_t>(i));
	}
	auto& h = left_[static_cast<std::size_t>(i) - 1];
	if (std::find(h.begin(), h.end(), coalition) == h.end())
	{
		h.push_back(coalition);
	}
}

bool HistorySet::contains(ProviderId i, Coalition coalition) const
{
	if (i < 1 || static_cast<std::size_t>(i) > left_.size())
	{
		return false;
	}
	const auto& h = left_[static_cast<std::size_t>(i) - 1];
	return std::find(h.begin(), h.end(), coalition) != h.end();
}

const std::vector<Coalition>& HistorySet::of(ProviderId i) const
{
	static const std::vector<Coalition> none;
	if (i < 1 || static_cast<std::size_t>(i) > left_.size())
	{
		return none;
	}
	return left_[static_cast<std::size_t>(i) - 1];
}

double Preference::value() const
{
	if (forbidden_)
	{
		throw std::logic_error("forbidden preference has no payoff");
	}
	return value_;
}

bool Preference::better_than(const Preference& other) const
{
	if (forbidden_)
	{
		return false;
	}
	if (other.forbidden_)
	{
		return true;
	}
	return value_ > other.value_ + epsilon;
}

std::string Preference::to_string() const
{
	if (forbidden_)
	{
		return "forbidden";
	}
	std::ostringstream oss;
	oss << value_;
	return oss.str();
}

Preference preference(ProviderId i, Coalition coalition, const HistorySet& history, CharacteristicTable& table)
{
	if (!coalition.contains(i))
	{
		throw std::domain_error("preference: provider " + std::to_string(i) + " not in " + coalition.to_string());
	}
	if (history.contains(i, coalition))
	{
		return Preference::forbidden();
	}
	try
	{
		return Preference::payoff(table.payoffs(coalition).at(i));
	}
	catch (const infeasible_coalition_error&)
	{
		return Preference::forbidden();
	}
}

namespace {

/// Destinations of i other than staying: other blocks, then going alone.
std::vector<Coalition> destinations(ProviderId i, const Partition& partition)
{
	const Coalition own = partition.block_of(i);
	std::vector<Coalition> out;
	for (const auto& b : partition.blocks())
	{
		if (b != own)
		{
			out.push_back(b);
		}
	}
	if (own.size() > 1)
	{
		out.push_back(Coalition{});
	}
	std::sort(out.begin(), out.end(),
	          [i](const Coalition& a, const Coalition& b) { return a.with(i) < b.with(i); });
	return out;
}

}  // namespace

std::optional<Coalition> find_shift(ProviderId i, const Partition& partition, const HistorySet& history,
                                    CharacteristicTable& table)
{
	const Preference current = preference(i, partition.block_of(i), history, table);
	std::optional<Coalition> best;
	std::optional<Preference> best_pref;
	for (const auto& target : destinations(i, partition))
	{
		const Preference p = preference(i, target.with(i), history, table);
		if (!best_pref || p.better_than(*best_pref))
		{
			best = target;
			best_pref = p;
		}
	}
	if (best && best_pref->better_than(current))
	{
		return best;
	}
	return std::nullopt;
}

Partition apply_shift(const Partition& partition, ProviderId i, Coalition target, HistorySet* history)
{
	if (target.contains(i))
	{
		throw std::domain_error("apply_shift: target " + target.to_string() + " already contains provider "
		                        + std::to_string(i));
	}
	const Coalition own = partition.block_of(i);
	std::vector<Coalition> blocks;
	bool found = target.empty();
	for (const auto& b : partition.blocks())
	{
		if (b == own)
		{
			if (b.size() > 1)
			{
				blocks.push_back(b.without(i));
			}
		}
		else if (b == target)
		{
			found = true;
		}
		else
		{
			blocks.push_back(b);
		}
	}
	if (!found)
	{
		throw std::domain_error("apply_shift: " + target.to_string() + " is not a block of " + partition.to_string());
	}
	blocks.push_back(target.with(i));
	if (history)
	{
		history->add(i, own);
	}
	return Partition(partition.num_players(), std::move(blocks));
}

std::uint64_t bell_number(int n)
{
	if (n < 0 || n > 25)
	{
		throw std::domain_error("bell_number: n out of range");
	}
	// Bell triangle.
	std::vector<std::uint64_t> row{1};
	for (int k = 0; k < n; ++k)
	{
		std::vector<std::uint64_t> next{row.back()};
		for (std::uint64_t x : row)
		{
			next.push_back(next.back() + x);
		}
		row = std::move(next);
	}
	return row.front();
}

FormationTrace run_formation(CharacteristicTable& table, const Partition& initial, const SchedulePolicy& policy,
                             long max_activations)
{
	const int n = table.num_players();
	if (initial.num_players() != n)
	{
		throw std::invalid_argument("run_formation: initial partition has " + std::to_string(initial.num_players())
		                            + " players, game has " + std::to_string(n));
	}
	if (policy.kind == SchedulePolicy::Kind::fixed_order)
	{
		Coalition named;
		for (ProviderId id : policy.order)
		{
			if (id < 1 || id > n)
			{
				throw std::invalid_argument("run_formation: fixed order names unknown provider " + std::to_string(id));
			}
			named.insert(id);
		}
		if (named != Coalition::grand(n))
		{
			throw std::invalid_argument("run_formation: fixed order must activate every provider");
		}
	}
	if (max_activations <= 0)
	{
		max_activations = 10 * static_cast<long>(bell_number(std::min(n, 20)));
	}

	FormationTrace trace;
	trace.initial = initial;
	trace.final_partition = initial;
	if (n == 0)
	{
		return trace;
	}
	HistorySet history(n);
	Rng rng(policy.seed);
	std::vector<ProviderId> pass;
	std::size_t cursor = 0;
	auto next_provider = [&]() -> ProviderId {
		if (cursor == pass.size())
		{
			cursor = 0;
			switch (policy.kind)
			{
			case SchedulePolicy::Kind::round_robin:
				pass.clear();
				for (ProviderId i = 1; i <= n; ++i)
				{
					pass.push_back(i);
				}
				break;
			case SchedulePolicy::Kind::random_order:
				pass.clear();
				for (ProviderId i = 1; i <= n; ++i)
				{
					pass.push_back(i);
				}
				rng.shuffle(pass);
				break;
			case SchedulePolicy::Kind::fixed_order:
				pass = policy.order;
				break;
			}
		}
		return pass[cursor++];
	};

	Partition current = initial;
	Coalition quiet;  // Providers activated since the last shift.
	while (quiet != Coalition::grand(n))
	{
		if (trace.activations >= max_activations)
		{
			throw convergence_error("formation did not converge within " + std::to_string(max_activations)
			                        + " activations (last partition " + current.to_string() + ")");
		}
		const ProviderId i = next_provider();
		++trace.activations;
		const auto target = find_shift(i, current, history, table);
		if (!target)
		{
			quiet.insert(i);
			continue;
		}
		const Coalition from = current.block_of(i);
		current = apply_shift(current, i, *target, &history);
		trace.steps.push_back(FormationStep{i, from, target->with(i), current});
		quiet = Coalition{};
	}
	trace.final_partition = current;
	return trace;
}

StabilityResult is_nash_stable(const Partition& partition, CharacteristicTable& table)
{
	const HistorySet none(partition.num_players());
	for (ProviderId i = 1; i <= partition.num_players(); ++i)
	{
		const Preference current = preference(i, partition.block_of(i), none, table);
		for (const auto& target : destinations(i, partition))
		{
			if (preference(i, target.with(i), none, table).better_than(current))
			{
				return {false, i, target};
			}
		}
	}
	return {};
}

StabilityResult is_individually_stable(const Partition& partition, CharacteristicTable& table)
{
	const HistorySet none(partition.num_players());
	for (ProviderId i = 1; i <= partition.num_players(); ++i)
	{
		const Preference current = preference(i, partition.block_of(i), none, table);
		for (const auto& target : destinations(i, partition))
		{
			const Coalition joined = target.with(i);
			if (!preference(i, joined, none, table).better_than(current))
			{
				continue;
			}
			bool receivers_ok = true;
			for (ProviderId j : target.members())
			{
				if (preference(j, target, none, table).better_than(preference(j, joined, none, table)))
				{
					receivers_ok = false;
					break;
				}
			}
			if (receivers_ok)
			{
				return {false, i, target};
			}
		}
	}
	return {};
}

void for_each_partition(int n, const std::function<void(const Partition&)>& visit)
{
	if (n < 0 || n > max_partition_players)
	{
		throw size_error("partition enumeration is capped at " + std::to_string(max_partition_players) + " players");
	}
	if (n == 0)
	{
		visit(Partition(0, {}));
		return;
	}
	// Restricted growth strings a[0..n-1] with a[0] = 0, a[k] <= 1 + max(a[0..k-1]).
	std::vector<int> a(static_cast<std::size_t>(n), 0);
	std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
	while (true)
	{
		std::vector<std::uint32_t> masks(static_cast<std::size_t>(n), 0);
		int used = 0;
		for (int k = 0; k < n; ++k)
		{
			masks[a[k]] |= std::uint32_t{1} << k;
			used = std::max(used, a[k] + 1);
		}
		std::vector<Coalition> blocks;
		for (int b = 0; b < used; ++b)
		{
			blocks.push_back(Coalition::from_mask(masks[b]));
		}
		visit(Partition(n, std::move(blocks)));

		int k = n - 1;
		while (k > 0 && a[k] == prefix_max[k - 1] + 1)
		{
			--k;
		}
		if (k == 0)
		{
			return;
		}
		++a[k];
		prefix_max[k] = std::max(prefix_max[k - 1], a[k]);
		for (int r = k + 1; r < n; ++r)
		{
			a[r] = 0;
			prefix_max[r] = prefix_max[k];
		}
	}
}

std::vector<Partition> enumerate_partitions(int n)
{
	std::vector<Partition> out;
	for_each_partition(n, [&out](const Partition& p) { out.push_back(p); });
	return out;
}

namespace {

PartitionReport analyze_one(const Partition& p, CharacteristicTable& table)
{
	PartitionReport r;
	r.partition = p;
	for (const auto& b : p.blocks())
	{
		if (!table.feasible(b))
		{
			r.feasible = false;
			r.values.push_back(std::numeric_limits<double>::quiet_NaN());
			r.payoffs.emplace_back();
			continue;
		}
		const double v = table.value(b);
		r.values.push_back(v);
		r.total += v;
		try
		{
			r.payoffs.push_back(table.payoffs(b));
		}
		catch (const infeasible_coalition_error&)
		{
			r.payoffs.emplace_back();
		}
	}
	if (!r.feasible)
	{
		r.total = std::numeric_limits<double>::quiet_NaN();
	}
	r.nash_stable = is_nash_stable(p, table).stable;
	r.individually_stable = is_individually_stable(p, table).stable;
	return r;
}

}  // namespace

std::vector<PartitionReport> analyze_partitions(CharacteristicTable& table, int workers)
{
	const auto partitions = enumerate_partitions(table.num_players());
	table.warm_up(workers);
	std::vector<PartitionReport> out(partitions.size());
	if (workers <= 1)
	{
		for (std::size_t k = 0; k < partitions.size(); ++k)
		{
			out[k] = analyze_one(partitions[k], table);
		}
		return out;
	}
	std::exception_ptr failure;
	std::mutex failure_mutex;
	const long count = static_cast<long>(partitions.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(workers)
	for (long k = 0; k < count; ++k)
	{
		try
		{
			out[k] = analyze_one(partitions[k], table);
		}
		catch (...)
		{
			std::lock_guard lock(failure_mutex);
			if (!failure)
			{
				failure = std::current_exception();
			}
		}
	}
	if (failure)
	{
		std::rethrow_exception(failure);
	}
	return out;
}

}  // namespace fedform
