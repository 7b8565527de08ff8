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

/**
 * \file fedform/coalitional.hpp
 *
 * \brief Coalition values and their division among members.
 *
 * The value of a coalition is the revenue rate of its members' workloads
 * minus the minimum hourly energy cost of hosting that joint workload on the
 * members' joint host set. Payoffs inside a coalition follow the Shapley
 * value of the subgame restricted to that coalition (Aumann-Dreze).
 */

#ifndef FEDFORM_COALITIONAL_HPP
#define FEDFORM_COALITIONAL_HPP

#include <fedform/coalition.hpp>
#include <fedform/domain.hpp>
#include <fedform/placement.hpp>

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace fedform {

/// The joint workload of a coalition does not fit its joint host set.
class infeasible_coalition_error : public std::runtime_error
{
public:
	infeasible_coalition_error(Coalition coalition, const std::string& what)
	    : std::runtime_error(what), coalition_(coalition)
	{
	}

	Coalition coalition() const { return coalition_; }

private:
	Coalition coalition_;
};

/// A requested enumeration is beyond the configured size cap.
class size_error : public std::length_error
{
public:
	using std::length_error::length_error;
};

using PayoffVector = std::map<ProviderId, double>;

struct CoalitionEntry
{
	bool feasible = false;
	double value = 0;        ///< Revenue minus energy cost, currency/hour.
	double revenue = 0;
	double energy_cost = 0;
	std::shared_ptr<const SolveReport> report;  ///< Empty for tabulated games.
};

struct TableOptions
{
	SolverKind solver = SolverKind::symmetric;
	SolverOptions solver_options;
	int shapley_cap = 12;
};

/**
 * \brief Memoized characteristic function.
 *
 * Either backed by a scenario (values come from the placement solver) or by
 * an explicit list of values. Lookups are safe from concurrent threads; a
 * value is computed outside the lock and the first insertion wins.
 */
class CharacteristicTable
{
public:
	explicit CharacteristicTable(const Scenario& scenario, TableOptions options = {});

	/// Tabulated game over players 1..n; missing coalitions raise domain_error.
	CharacteristicTable(int n, const std::map<Coalition, double>& values, TableOptions options = {});

	CharacteristicTable(const CharacteristicTable&) = delete;
	CharacteristicTable& operator=(const CharacteristicTable&) = delete;

	int num_players() const { return n_; }
	Coalition grand() const { return Coalition::grand(n_); }
	const Scenario* scenario() const { return scenario_.get(); }
	const TableOptions& options() const { return options_; }

	/// v(S); v of the empty coalition is 0. Throws infeasible_coalition_error.
	double value(Coalition coalition);
	bool feasible(Coalition coalition);
	CoalitionEntry entry(Coalition coalition);

	/// Aumann-Dreze payoffs of the members of S (memoized).
	PayoffVector payoffs(Coalition coalition);

	/// Computes every nonempty coalition's entry; `workers` <= 1 runs serially.
	void warm_up(int workers = 1);

	void clear();
	std::size_t memo_size() const;

private:
	CoalitionEntry compute(Coalition coalition) const;

	std::shared_ptr<const Scenario> scenario_;
	int n_ = 0;
	TableOptions options_;
	mutable std::shared_mutex mutex_;
	std::unordered_map<std::uint32_t, CoalitionEntry> memo_;
	std::unordered_map<std::uint32_t, PayoffVector> payoff_memo_;
	std::map<Coalition, double> tabulated_;
};

/// v(S); shorthand for table.value(S).
double coalition_value(CharacteristicTable& table, Coalition coalition);

/**
 * \brief Shapley value of the game restricted to S.
 *
 * Enumerates all 2^|S| sub-coalitions. Throws size_error above the table's
 * cap and infeasible_coalition_error if any sub-coalition is infeasible.
 */
PayoffVector shapley_payoffs(CharacteristicTable& table, Coalition coalition);

/// v(S u {i}) - v(S); throws domain_error when i is already in S.
double marginal_contribution(CharacteristicTable& table, Coalition coalition, ProviderId i);

}  // namespace fedform

#endif  // FEDFORM_COALITIONAL_HPP
