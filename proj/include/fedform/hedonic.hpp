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
 * \file fedform/hedonic.hpp
 *
 * \brief Hedonic coalition formation: partitions, preferences with history,
 * the shift rule, the formation loop and stability checks.
 *
 * A provider prefers the coalition in which its Aumann-Dreze payoff is
 * higher. Coalitions it has left before, and coalitions whose workload does
 * not fit, are forbidden. A shift moves one provider from its coalition into
 * another block of the partition (or alone) when that is a strict gain.
 */

#ifndef FEDFORM_HEDONIC_HPP
#define FEDFORM_HEDONIC_HPP

#include <fedform/coalition.hpp>
#include <fedform/coalitional.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fedform {

/// Disjoint nonempty blocks covering providers 1..n, kept in canonical order.
class Partition
{
public:
	Partition() = default;

	/// Throws std::invalid_argument unless the blocks partition 1..n.
	Partition(int n, std::vector<Coalition> blocks);

	static Partition singletons(int n);
	static Partition grand(int n);

	/// Parses "{1,3}{2,4}"; throws std::invalid_argument on bad syntax or cover.
	static Partition parse(const std::string& spec, int n);

	int num_players() const { return n_; }
	const std::vector<Coalition>& blocks() const { return blocks_; }

	/// The block containing provider i.
	Coalition block_of(ProviderId i) const;

	std::string to_string() const;

	friend bool operator==(const Partition& a, const Partition& b) { return a.n_ == b.n_ && a.blocks_ == b.blocks_; }

private:
	int n_ = 0;
	std::vector<Coalition> blocks_;
};

/// Coalitions each provider has left.
class HistorySet
{
public:
	explicit HistorySet(int n = 0) : left_(static_cast<std::size_t>(n)) {}

	/// Records that i left `coalition`; throws domain_error unless i is in it.
	void add(ProviderId i, Coalition coalition);
	bool contains(ProviderId i, Coalition coalition) const;
	const std::vector<Coalition>& of(ProviderId i) const;

private:
	std::vector<std::vector<Coalition>> left_;
};

/// A payoff or the forbidden marker, which ranks below every payoff.
class Preference
{
public:
	static Preference payoff(double value) { return Preference(false, value); }
	static Preference forbidden() { return Preference(true, 0.0); }

	bool is_forbidden() const { return forbidden_; }
	/// Payoff value; throws std::logic_error when forbidden.
	double value() const;

	/// Strict preference; payoffs must differ by more than `epsilon`.
	bool better_than(const Preference& other) const;

	std::string to_string() const;

	static constexpr double epsilon = 1e-9;

private:
	Preference(bool forbidden, double value) : forbidden_(forbidden), value_(value) {}

	bool forbidden_;
	double value_;
};

/// f_i(S). Throws domain_error when i is not in S.
Preference preference(ProviderId i, Coalition coalition, const HistorySet& history, CharacteristicTable& table);

/**
 * \brief Best strictly improving destination for provider i.
 *
 * Candidates are the other blocks and the empty coalition (going alone).
 * The highest preference wins; ties go to the lexicographically smallest
 * resulting coalition. The returned target is the block joined, or an empty
 * Coalition for going alone.
 */
std::optional<Coalition> find_shift(ProviderId i, const Partition& partition, const HistorySet& history,
                                    CharacteristicTable& table);

/// Moves i into `target` (empty = alone); records i's old coalition in history.
Partition apply_shift(const Partition& partition, ProviderId i, Coalition target, HistorySet* history = nullptr);

struct SchedulePolicy
{
	enum class Kind
	{
		round_robin,
		random_order,
		fixed_order
	};

	Kind kind = Kind::round_robin;
	std::uint64_t seed = 0;
	std::vector<ProviderId> order;  ///< For fixed_order; must name every provider.

	static SchedulePolicy round_robin() { return {}; }
	static SchedulePolicy random(std::uint64_t seed) { return {Kind::random_order, seed, {}}; }
	static SchedulePolicy fixed(std::vector<ProviderId> order) { return {Kind::fixed_order, 0, std::move(order)}; }
};

struct FormationStep
{
	ProviderId provider = 0;
	Coalition from;
	Coalition to;  ///< Coalition the provider belongs to after the shift.
	Partition after;
};

struct FormationTrace
{
	Partition initial;
	std::vector<FormationStep> steps;
	Partition final_partition;
	long activations = 0;
};

/// Formation did not settle within the activation budget.
class convergence_error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Bell number B(n); n <= 25.
std::uint64_t bell_number(int n);

/**
 * \brief Runs the shift loop until a full pass of activations changes nothing.
 *
 * `max_activations` = 0 selects 10 * Bell(n). Throws convergence_error
 * when the budget is exhausted.
 */
FormationTrace run_formation(CharacteristicTable& table, const Partition& initial,
                             const SchedulePolicy& policy = {}, long max_activations = 0);

struct StabilityResult
{
	bool stable = true;
	ProviderId provider = 0;  ///< Witness mover when unstable.
	Coalition target;         ///< Block joined by the witness (empty = alone).
};

/// No provider strictly gains by a unilateral move (history ignored).
StabilityResult is_nash_stable(const Partition& partition, CharacteristicTable& table);

/// No move strictly helps the mover while no receiving member is worse off.
StabilityResult is_individually_stable(const Partition& partition, CharacteristicTable& table);

inline constexpr int max_partition_players = 13;

/// Calls `visit` for every set partition of 1..n in restricted-growth order.
void for_each_partition(int n, const std::function<void(const Partition&)>& visit);

/// All set partitions of 1..n; throws size_error above 13 players.
std::vector<Partition> enumerate_partitions(int n);

struct PartitionReport
{
	Partition partition;
	std::vector<double> values;         ///< Per block; NaN for infeasible blocks.
	double total = 0;
	std::vector<PayoffVector> payoffs;  ///< Per block; empty for infeasible blocks.
	bool feasible = true;
	bool nash_stable = false;
	bool individually_stable = false;
};

/**
 * \brief Values, payoffs and stability flags of every partition.
 *
 * The table is warmed first. With `workers` > 1 the partitions are examined
 * in parallel; the result order is the enumeration order either way.
 */
std::vector<PartitionReport> analyze_partitions(CharacteristicTable& table, int workers = 1);

}  // namespace fedform

#endif  // FEDFORM_HEDONIC_HPP
