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
 * \file fedform/placement.hpp
 *
 * \brief Energy-cost-minimizing VM placement for a coalition of providers.
 *
 * The hourly cost of an allocation is
 *
 *   sum over hosts i of E_i [ p_i C_min + u_i (C_max - C_min)
 *                             + p_i (1 - o_i) L / T + (1 - p_i) o_i S / T ]
 *   + sum over VMs j of G(j, host of j)
 *
 * where p_i is the power state chosen for host i, u_i its CPU utilization,
 * o_i its initial power state, L and S the switch-on/off energies (Wh)
 * amortized over the planning period T, and G the hourly migration rate.
 *
 * Two exact solvers are provided: solve_naive() enumerates individual
 * assignments and is meant as a reference on small instances;
 * solve_symmetric() aggregates identical hosts and VMs into groups and runs
 * a branch-and-bound over per-host packing patterns.
 */

#ifndef FEDFORM_PLACEMENT_HPP
#define FEDFORM_PLACEMENT_HPP

#include <fedform/coalition.hpp>
#include <fedform/domain.hpp>

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedform {

/// An allocation broke one of the placement constraints.
class constraint_violation : public std::domain_error
{
public:
	constraint_violation(std::string constraint, const std::string& what)
	    : std::domain_error(constraint + ": " + what), constraint_(std::move(constraint))
	{
	}

	const std::string& constraint() const { return constraint_; }

private:
	std::string constraint_;
};

/// No allocation of the workload onto the host set exists.
class infeasible_placement_error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

struct PlacementHost
{
	HostId id = 0;
	std::size_t cls = 0;  ///< Host class position.
	ProviderId owner = 0;
	bool initially_on = true;
	double energy_price = 0;  ///< Currency per Wh.
	double switch_on_w = 0;   ///< (1 - o) L / T, in W.
	double switch_off_w = 0;  ///< o S / T, in W.
};

struct PlacementVm
{
	VmId id = 0;
	std::size_t cls = 0;  ///< VM class position.
	ProviderId owner = 0;
	std::optional<ProviderId> current_cp;
};

class PlacementProblem
{
public:
	std::vector<HostClass> host_classes;
	std::vector<PlacementHost> hosts;
	std::vector<PlacementVm> vms;
	std::vector<std::vector<double>> cpu_share;  ///< [VM class][host class]
	std::vector<std::vector<double>> ram_share;
	std::vector<double> migration;  ///< Dense |vms| x |hosts|, currency/hour.
	double planning_period_hours = 12;
	std::optional<std::string> infeasibility;  ///< Set when some VM fits no host.

	std::size_t num_hosts() const { return hosts.size(); }
	std::size_t num_vms() const { return vms.size(); }

	double cpu(std::size_t vm, std::size_t host) const { return cpu_share[vms[vm].cls][hosts[host].cls]; }
	double ram(std::size_t vm, std::size_t host) const { return ram_share[vms[vm].cls][hosts[host].cls]; }
	bool fits(std::size_t vm, std::size_t host) const;
	double migration_rate(std::size_t vm, std::size_t host) const { return migration[vm * hosts.size() + host]; }

	/// Hourly cost of host i powered on, before VM-dependent terms.
	double on_cost(std::size_t host) const;
	/// Hourly cost of host i powered off.
	double off_cost(std::size_t host) const;
	/// Whether an empty host is cheaper kept on than off.
	bool empty_host_on(std::size_t host) const { return on_cost(host) < off_cost(host); }
	/// Hourly dynamic-power cost of VM j on host i.
	double dynamic_cost(std::size_t vm, std::size_t host) const;

	/// Recomputes the infeasibility flag from the share tables.
	void refresh_feasibility();
};

/// Joint host set and workload of a coalition.
PlacementProblem build_problem(const Scenario& scenario, const Coalition& coalition);

struct CostBreakdown
{
	double idle_power = 0;     ///< Currency/hour.
	double dynamic_power = 0;  ///< Currency/hour.
	double switch_cost = 0;    ///< Currency/hour.
	double migration_cost = 0; ///< Currency/hour.

	double total() const { return idle_power + dynamic_power + switch_cost + migration_cost; }
};

struct Allocation
{
	std::vector<std::size_t> host_of;  ///< VM position -> host position.
	std::vector<double> utilization;   ///< Per host.
	std::vector<bool> powered_on;      ///< Per host.
	double energy_cost_rate = 0;       ///< Currency/hour.
	double power_watts = 0;            ///< Idle plus dynamic draw of powered hosts.
	CostBreakdown breakdown;
};

/**
 * \brief Builds a complete allocation from a VM-to-host map.
 *
 * Hosts receiving VMs are powered on; an empty host stays on only when that
 * is cheaper than switching it off.
 */
Allocation make_allocation(const PlacementProblem& problem, std::vector<std::size_t> host_of);

/// Throws constraint_violation naming the first broken constraint.
void check_allocation(const PlacementProblem& problem, const Allocation& allocation);

/// Audited cost of an allocation (checks constraints first).
CostBreakdown cost_breakdown(const PlacementProblem& problem, const Allocation& allocation);
double objective_value(const PlacementProblem& problem, const Allocation& allocation);

struct ProviderUsage
{
	int hosts_on = 0;
	double power_watts = 0;
	double energy_cost = 0;  ///< Currency/hour of energy drawn by this provider's hosts.
};

/// Per-owner view of an allocation (hosts on, power, energy cost).
std::map<ProviderId, ProviderUsage> usage_by_provider(const PlacementProblem& problem,
                                                      const Allocation& allocation);

enum class SolveStatus
{
	optimal,
	heuristic,
	time_limited,
	infeasible
};

const char* to_string(SolveStatus status);

struct SolveReport
{
	std::optional<Allocation> allocation;
	SolveStatus status = SolveStatus::infeasible;
	double objective = std::numeric_limits<double>::infinity();
	double lower_bound = -std::numeric_limits<double>::infinity();
	long nodes_explored = 0;
	double wall_seconds = 0;
	std::string message;
};

struct SolverOptions
{
	double time_limit_s = 300;
	double gap_tol = 1e-9;      ///< Absolute optimality gap on the objective.
	double feas_tol = 1e-7;     ///< LP feasibility tolerance.
};

/// First-fit-decreasing incumbent; throws infeasible_placement_error.
Allocation heuristic_ffd(const PlacementProblem& problem);

/// Exhaustive depth-first search over individual assignments.
SolveReport solve_naive(const PlacementProblem& problem, const SolverOptions& options = {});

/// Pattern-based branch-and-bound over groups of identical hosts and VMs.
SolveReport solve_symmetric(const PlacementProblem& problem, const SolverOptions& options = {});

enum class SolverKind
{
	naive,
	symmetric
};

SolveReport solve(const PlacementProblem& problem, SolverKind kind, const SolverOptions& options = {});

}  // namespace fedform

#endif  // FEDFORM_PLACEMENT_HPP
