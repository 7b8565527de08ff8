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
 * \file fedform/domain.hpp
 *
 * \brief Hosts, VMs, providers and the scenario that ties them together.
 *
 * Units are fixed throughout the library: power in watts, energy in
 * watt-hours, energy prices in currency per watt-hour, revenue and cost rates
 * in currency per hour.
 */

#ifndef FEDFORM_DOMAIN_HPP
#define FEDFORM_DOMAIN_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fedform {

using ProviderId = int;
using HostId = int;
using VmId = int;
using ClassId = int;

/// A VM class that cannot be placed on a host class (share above 1).
class infeasible_class_error : public std::domain_error
{
public:
	using std::domain_error::domain_error;
};

struct HostClass
{
	ClassId id = 0;
	double cpu_capacity = 0;       ///< Benchmark units.
	double ram_gb = 0;
	double c_min = 0;              ///< Idle power [W].
	double c_max = 0;              ///< Full-load power [W].
	double switch_energy_on = 0;   ///< Energy of one switch-on [Wh].
	double switch_energy_off = 0;  ///< Energy of one switch-off [Wh].
};

struct VmClass
{
	ClassId id = 0;
	double cpu_capacity = 0;
	double ram_gb = 0;
	double revenue_rate = 0;  ///< Currency per hour charged to the owner.
};

/**
 * \brief Per (VM class, host class) resource fractions.
 *
 * Indexed by class position (not id). Entries left empty are derived from
 * capacities; explicit entries take precedence.
 */
struct ShareMatrix
{
	std::vector<std::vector<std::optional<double>>> cpu;
	std::vector<std::vector<std::optional<double>>> ram;

	bool empty() const { return cpu.empty() && ram.empty(); }
};

struct Host
{
	HostId id = 0;
	ClassId cls = 0;
	ProviderId owner = 0;
	bool initially_on = true;
};

struct Vm
{
	VmId id = 0;
	ClassId cls = 0;
	ProviderId owner = 0;
	std::optional<HostId> current_host;
};

struct Provider
{
	ProviderId id = 0;
	double energy_price = 0;  ///< Currency per Wh.
	std::vector<Host> hosts;
	std::vector<Vm> vms;
};

/// Migration times for one ordered provider pair, per VM class position.
struct PairMigrationTime
{
	ProviderId from = 0;
	ProviderId to = 0;
	std::vector<double> time_s;
};

struct MigrationParams
{
	double transfer_cost_per_gb = 0;
	double data_rate_mbit_s = 0;
	std::vector<double> migration_time_s;  ///< Per VM class position.
	std::vector<PairMigrationTime> pair_time_s;  ///< Overrides for specific pairs.
	double same_cp_cost = 0;               ///< Currency per hour.
};

/// Linear power model: c_min + f (c_max - c_min).
double power_draw(const HostClass& host_class, double utilization);

/// Cap_v / Cap_p; throws infeasible_class_error when above 1.
double cpu_share(const VmClass& vm_class, const HostClass& host_class);

/// RAM_q / host RAM; throws infeasible_class_error when above 1.
double ram_share(const VmClass& vm_class, const HostClass& host_class);

class Scenario
{
public:
	std::vector<HostClass> host_classes;
	std::vector<VmClass> vm_classes;
	ShareMatrix shares;
	std::vector<Provider> providers;
	MigrationParams migration;
	double planning_period_hours = 12;

	std::size_t num_providers() const { return providers.size(); }

	/// Position of a class id; throws std::out_of_range if unknown.
	std::size_t host_class_index(ClassId id) const;
	std::size_t vm_class_index(ClassId id) const;

	const Provider& provider(ProviderId id) const;
	const Host* find_host(HostId id) const;

	/// CPU share by class position. May exceed 1 (no fit); never throws for
	/// valid indices.
	double cpu_share_at(std::size_t vm_cls, std::size_t host_cls) const;
	double ram_share_at(std::size_t vm_cls, std::size_t host_cls) const;

	bool fits(std::size_t vm_cls, std::size_t host_cls) const;

	/// Hourly cost of moving one VM of the class between two different
	/// providers, amortized over the planning period.
	double migration_rate(std::size_t vm_cls) const;

	/// Hourly migration cost of a VM of the class from one provider's hosts
	/// to another's; same_cp_cost when the providers coincide.
	double migration_rate(std::size_t vm_cls, ProviderId from, ProviderId to) const;

	/// Revenue rate of a provider's whole workload.
	double revenue(ProviderId id) const;
};

struct ValidationIssue
{
	std::string kind;
	std::string message;
};

struct ValidationReport
{
	std::vector<ValidationIssue> issues;

	bool ok() const { return issues.empty(); }
	std::string to_string() const;
};

ValidationReport validate_scenario(const Scenario& scenario);

}  // namespace fedform

#endif  // FEDFORM_DOMAIN_HPP
