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

#include <fedform/coalitional.hpp>

#include <exception>
#include <mutex>

#include <omp.h>

namespace fedform {

namespace {

void check_players(Coalition coalition, int n)
{
	if ((coalition.mask() & ~Coalition::grand(n).mask()) != 0)
	{
		throw std::domain_error("coalition " + coalition.to_string() + " has players outside 1.."
		                        + std::to_string(n));
	}
}

}  // namespace

CharacteristicTable::CharacteristicTable(const Scenario& scenario, TableOptions options)
    : scenario_(std::make_shared<const Scenario>(scenario)),
      n_(static_cast<int>(scenario.providers.size())),
      options_(options)
{
	if (n_ > max_players)
	{
		throw size_error("scenario has more than " + std::to_string(max_players) + " providers");
	}
}

CharacteristicTable::CharacteristicTable(int n, const std::map<Coalition, double>& values, TableOptions options)
    : n_(n), options_(options), tabulated_(values)
{
	if (n < 0 || n > max_players)
	{
		throw size_error("player count " + std::to_string(n) + " outside 0.." + std::to_string(max_players));
	}
	for (const auto& [c, v] : values)
	{
		check_players(c, n);
	}
}

CoalitionEntry CharacteristicTable::compute(Coalition coalition) const
{
	CoalitionEntry e;
	if (!scenario_)
	{
		const auto it = tabulated_.find(coalition);
		if (it == tabulated_.end())
		{
			throw std::domain_error("no value given for coalition " + coalition.to_string());
		}
		e.feasible = true;
		e.value = it->second;
		return e;
	}
	for (ProviderId id : coalition.members())
	{
		e.revenue += scenario_->revenue(id);
	}
	const PlacementProblem prob = build_problem(*scenario_, coalition);
	auto report = std::make_shared<SolveReport>(solve(prob, options_.solver, options_.solver_options));
	e.feasible = report->allocation.has_value();
	if (e.feasible)
	{
		e.energy_cost = report->objective;
		e.value = e.revenue - e.energy_cost;
	}
	e.report = std::move(report);
	return e;
}

CoalitionEntry CharacteristicTable::entry(Coalition coalition)
{
	if (coalition.empty())
	{
		CoalitionEntry e;
		e.feasible = true;
		return e;
	}
	check_players(coalition, n_);
	{
		std::shared_lock lock(mutex_);
		const auto it = memo_.find(coalition.mask());
		if (it != memo_.end())
		{
			return it->second;
		}
	}
	CoalitionEntry e = compute(coalition);
	std::unique_lock lock(mutex_);
	return memo_.try_emplace(coalition.mask(), std::move(e)).first->second;
}

bool CharacteristicTable::feasible(Coalition coalition)
{
	return entry(coalition).feasible;
}

double CharacteristicTable::value(Coalition coalition)
{
	const CoalitionEntry e = entry(coalition);
	if (!e.feasible)
	{
		std::string why = "coalition " + coalition.to_string() + " cannot host its joint workload";
		if (e.report && !e.report->message.empty())
		{
			why += " (" + e.report->message + ")";
		}
		throw infeasible_coalition_error(coalition, why);
	}
	return e.value;
}

PayoffVector CharacteristicTable::payoffs(Coalition coalition)
{
	check_players(coalition, n_);
	{
		std::shared_lock lock(mutex_);
		const auto it = payoff_memo_.find(coalition.mask());
		if (it != payoff_memo_.end())
		{
			return it->second;
		}
	}
	const int s = coalition.size();
	if (s > options_.shapley_cap)
	{
		throw size_error("Shapley value of a " + std::to_string(s) + "-player coalition exceeds the cap of "
		                 + std::to_string(options_.shapley_cap));
	}
	const auto members = coalition.members();

	// Values of every sub-coalition, indexed by a local bit mask over members.
	const std::uint32_t full = (std::uint32_t{1} << s) - 1;
	std::vector<double> v(std::size_t{full} + 1, 0.0);
	for (std::uint32_t local = 1; local <= full; ++local)
	{
		Coalition sub;
		for (int b = 0; b < s; ++b)
		{
			if (local & (std::uint32_t{1} << b))
			{
				sub.insert(members[b]);
			}
		}
		v[local] = value(sub);
	}
	std::vector<double> fact(static_cast<std::size_t>(s) + 1, 1.0);
	for (int k = 1; k <= s; ++k)
	{
		fact[k] = fact[k - 1] * k;
	}

	PayoffVector out;
	for (int b = 0; b < s; ++b)
	{
		const std::uint32_t me = std::uint32_t{1} << b;
		double phi = 0;
		for (std::uint32_t t = 0; t <= full; ++t)
		{
			if (t & me)
			{
				continue;
			}
			const int ts = std::popcount(t);
			const double w = fact[ts] * fact[s - ts - 1] / fact[s];
			phi += w * (v[t | me] - v[t]);
		}
		out[members[b]] = phi;
	}
	std::unique_lock lock(mutex_);
	return payoff_memo_.try_emplace(coalition.mask(), std::move(out)).first->second;
}

void CharacteristicTable::warm_up(int workers)
{
	const std::uint32_t full = Coalition::grand(n_).mask();
	const long count = static_cast<long>(full);
	std::exception_ptr failure;
	std::mutex failure_mutex;
	if (workers <= 1)
	{
		for (long m = 1; m <= count; ++m)
		{
			entry(Coalition::from_mask(static_cast<std::uint32_t>(m)));
		}
		return;
	}
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
	for (long m = count; m >= 1; --m)
	{
		try
		{
			entry(Coalition::from_mask(static_cast<std::uint32_t>(m)));
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
}

void CharacteristicTable::clear()
{
	std::unique_lock lock(mutex_);
	memo_.clear();
	payoff_memo_.clear();
}

std::size_t CharacteristicTable::memo_size() const
{
	std::shared_lock lock(mutex_);
	return memo_.size();
}

double coalition_value(CharacteristicTable& table, Coalition coalition)
{
	return table.value(coalition);
}

PayoffVector shapley_payoffs(CharacteristicTable& table, Coalition coalition)
{
	return table.payoffs(coalition);
}

double marginal_contribution(CharacteristicTable& table, Coalition coalition, ProviderId i)
{
	if (coalition.contains(i))
	{
		throw std::domain_error("marginal_contribution: provider " + std::to_string(i) + " already in "
		                        + coalition.to_string());
	}
	return table.value(coalition.with(i)) - table.value(coalition);
}

}  // namespace fedform
