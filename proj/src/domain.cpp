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

#include <fedform/domain.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace fedform {

namespace {

constexpr double share_tol = 1e-12;

}  // namespace

double power_draw(const HostClass& host_class, double utilization)
{
	if (!(utilization >= 0.0 && utilization <= 1.0))
	{
		throw std::domain_error("power_draw: utilization " + std::to_string(utilization) + " outside [0,1]");
	}
	return host_class.c_min + utilization * (host_class.c_max - host_class.c_min);
}

double cpu_share(const VmClass& vm_class, const HostClass& host_class)
{
	if (!(host_class.cpu_capacity > 0))
	{
		throw std::domain_error("cpu_share: host class " + std::to_string(host_class.id) + " has no CPU capacity");
	}
	const double share = vm_class.cpu_capacity / host_class.cpu_capacity;
	if (share > 1.0 + share_tol)
	{
		throw infeasible_class_error("cpu_share: VM class " + std::to_string(vm_class.id)
		                             + " does not fit host class " + std::to_string(host_class.id));
	}
	return share;
}

double ram_share(const VmClass& vm_class, const HostClass& host_class)
{
	if (!(host_class.ram_gb > 0))
	{
		throw std::domain_error("ram_share: host class " + std::to_string(host_class.id) + " has no RAM");
	}
	const double share = vm_class.ram_gb / host_class.ram_gb;
	if (share > 1.0 + share_tol)
	{
		throw infeasible_class_error("ram_share: VM class " + std::to_string(vm_class.id)
		                             + " does not fit host class " + std::to_string(host_class.id));
	}
	return share;
}

std::size_t Scenario::host_class_index(ClassId id) const
{
	for (std::size_t k = 0; k < host_classes.size(); ++k)
	{
		if (host_classes[k].id == id)
		{
			return k;
		}
	}
	throw std::out_of_range("unknown host class " + std::to_string(id));
}

std::size_t Scenario::vm_class_index(ClassId id) const
{
	for (std::size_t k = 0; k < vm_classes.size(); ++k)
	{
		if (vm_classes[k].id == id)
		{
			return k;
		}
	}
	throw std::out_of_range("unknown VM class " + std::to_string(id));
}

const Provider& Scenario::provider(ProviderId id) const
{
	for (const auto& p : providers)
	{
		if (p.id == id)
		{
			return p;
		}
	}
	throw std::out_of_range("unknown provider " + std::to_string(id));
}

const Host* Scenario::find_host(HostId id) const
{
	for (const auto& p : providers)
	{
		for (const auto& h : p.hosts)
		{
			if (h.id == id)
			{
				return &h;
			}
		}
	}
	return nullptr;
}

double Scenario::cpu_share_at(std::size_t vm_cls, std::size_t host_cls) const
{
	if (vm_cls < shares.cpu.size() && host_cls < shares.cpu[vm_cls].size() && shares.cpu[vm_cls][host_cls])
	{
		return *shares.cpu[vm_cls][host_cls];
	}
	return vm_classes.at(vm_cls).cpu_capacity / host_classes.at(host_cls).cpu_capacity;
}

double Scenario::ram_share_at(std::size_t vm_cls, std::size_t host_cls) const
{
	if (vm_cls < shares.ram.size() && host_cls < shares.ram[vm_cls].size() && shares.ram[vm_cls][host_cls])
	{
		return *shares.ram[vm_cls][host_cls];
	}
	return vm_classes.at(vm_cls).ram_gb / host_classes.at(host_cls).ram_gb;
}

bool Scenario::fits(std::size_t vm_cls, std::size_t host_cls) const
{
	return cpu_share_at(vm_cls, host_cls) <= 1.0 + share_tol && ram_share_at(vm_cls, host_cls) <= 1.0 + share_tol;
}

double Scenario::migration_rate(std::size_t vm_cls) const
{
	if (vm_cls >= migration.migration_time_s.size())
	{
		return 0.0;
	}
	// Mbit/s * s / 8000 = GB
	const double data_gb = migration.data_rate_mbit_s * migration.migration_time_s[vm_cls] / 8000.0;
	return migration.transfer_cost_per_gb * data_gb / planning_period_hours;
}

double Scenario::migration_rate(std::size_t vm_cls, ProviderId from, ProviderId to) const
{
	if (from == to)
	{
		return migration.same_cp_cost;
	}
	for (const auto& pt : migration.pair_time_s)
	{
		if (pt.from == from && pt.to == to && vm_cls < pt.time_s.size())
		{
			const double data_gb = migration.data_rate_mbit_s * pt.time_s[vm_cls] / 8000.0;
			return migration.transfer_cost_per_gb * data_gb / planning_period_hours;
		}
	}
	return migration_rate(vm_cls);
}

double Scenario::revenue(ProviderId id) const
{
	double total = 0;
	for (const auto& vm : provider(id).vms)
	{
		total += vm_classes[vm_class_index(vm.cls)].revenue_rate;
	}
	return total;
}

std::string ValidationReport::to_string() const
{
	std::ostringstream oss;
	for (const auto& issue : issues)
	{
		oss << issue.kind << ": " << issue.message << '\n';
	}
	return oss.str();
}

ValidationReport validate_scenario(const Scenario& s)
{
	ValidationReport report;
	auto add = [&report](std::string kind, std::string msg) {
		report.issues.push_back({std::move(kind), std::move(msg)});
	};

	std::set<ClassId> host_class_ids;
	for (const auto& hc : s.host_classes)
	{
		const auto tag = "host class " + std::to_string(hc.id);
		if (!host_class_ids.insert(hc.id).second)
		{
			add("duplicate-id", tag);
		}
		if (!(hc.c_min > 0 && hc.c_min < hc.c_max))
		{
			add("invalid-power", tag + " needs 0 < c_min < c_max");
		}
		if (!(hc.cpu_capacity > 0))
		{
			add("invalid-capacity", tag + " cpu_capacity must be positive");
		}
		if (!(hc.ram_gb > 0))
		{
			add("invalid-capacity", tag + " ram_gb must be positive");
		}
		if (!(hc.switch_energy_on >= 0 && hc.switch_energy_off >= 0))
		{
			add("invalid-switch", tag + " switch energies must be nonnegative");
		}
	}

	std::set<ClassId> vm_class_ids;
	for (const auto& vc : s.vm_classes)
	{
		const auto tag = "VM class " + std::to_string(vc.id);
		if (!vm_class_ids.insert(vc.id).second)
		{
			add("duplicate-id", tag);
		}
		if (!(vc.cpu_capacity > 0) || !(vc.ram_gb > 0))
		{
			add("invalid-capacity", tag + " capacities must be positive");
		}
		if (!(vc.revenue_rate >= 0))
		{
			add("invalid-revenue", tag + " revenue_rate must be nonnegative");
		}
	}

	auto check_matrix = [&](const std::vector<std::vector<std::optional<double>>>& m, const char* name) {
		if (m.empty())
		{
			return;
		}
		if (m.size() != s.vm_classes.size())
		{
			add("invalid-shares", std::string(name) + " share matrix has wrong row count");
			return;
		}
		for (const auto& row : m)
		{
			if (row.size() != s.host_classes.size())
			{
				add("invalid-shares", std::string(name) + " share matrix has wrong column count");
				return;
			}
			for (const auto& v : row)
			{
				if (v && !(*v >= 0 && *v <= 1))
				{
					add("invalid-shares", std::string(name) + " share " + std::to_string(*v) + " outside [0,1]");
				}
			}
		}
	};
	check_matrix(s.shares.cpu, "cpu");
	check_matrix(s.shares.ram, "ram");

	const bool classes_ok = report.ok();
	if (classes_ok)
	{
		for (std::size_t q = 0; q < s.vm_classes.size(); ++q)
		{
			bool any = false;
			for (std::size_t g = 0; g < s.host_classes.size(); ++g)
			{
				any = any || s.fits(q, g);
			}
			if (!any)
			{
				add("infeasible-class", "VM class " + std::to_string(s.vm_classes[q].id) + " fits no host class");
			}
		}
	}

	std::set<ProviderId> pids;
	std::set<HostId> host_ids;
	std::set<VmId> vm_ids;
	for (const auto& p : s.providers)
	{
		const auto tag = "provider " + std::to_string(p.id);
		if (!pids.insert(p.id).second)
		{
			add("duplicate-id", tag);
		}
		if (!(p.energy_price >= 0))
		{
			add("negative-price", tag + " energy_price must be nonnegative");
		}
		for (const auto& h : p.hosts)
		{
			if (!host_ids.insert(h.id).second)
			{
				add("duplicate-id", "host " + std::to_string(h.id));
			}
			if (h.owner != p.id)
			{
				add("owner-mismatch", "host " + std::to_string(h.id) + " listed under " + tag);
			}
			if (!host_class_ids.count(h.cls))
			{
				add("dangling-reference", "host " + std::to_string(h.id) + " has unknown class " + std::to_string(h.cls));
			}
		}
		for (const auto& vm : p.vms)
		{
			if (!vm_ids.insert(vm.id).second)
			{
				add("duplicate-id", "VM " + std::to_string(vm.id));
			}
			if (vm.owner != p.id)
			{
				add("owner-mismatch", "VM " + std::to_string(vm.id) + " listed under " + tag);
			}
			if (!vm_class_ids.count(vm.cls))
			{
				add("dangling-reference", "VM " + std::to_string(vm.id) + " has unknown class " + std::to_string(vm.cls));
			}
		}
	}
	for (const auto& p : s.providers)
	{
		for (const auto& vm : p.vms)
		{
			if (vm.current_host && !host_ids.count(*vm.current_host))
			{
				add("dangling-reference",
				    "VM " + std::to_string(vm.id) + " on unknown host " + std::to_string(*vm.current_host));
			}
		}
	}
	if (s.providers.empty())
	{
		add("no-providers", "scenario has no providers");
	}
	else
	{
		int expected = 1;
		for (ProviderId id : pids)
		{
			if (id != expected)
			{
				add("id-gap", "provider ids must be 1..n without gaps; found " + std::to_string(id) + " where "
				                  + std::to_string(expected) + " was expected");
				break;
			}
			++expected;
		}
	}

	const auto& m = s.migration;
	if (!(m.transfer_cost_per_gb >= 0 && m.data_rate_mbit_s >= 0 && m.same_cp_cost >= 0))
	{
		add("invalid-migration", "migration parameters must be nonnegative");
	}
	if (!m.migration_time_s.empty() && m.migration_time_s.size() != s.vm_classes.size())
	{
		add("invalid-migration", "migration_time_s needs one entry per VM class");
	}
	for (double t : m.migration_time_s)
	{
		if (!(t >= 0))
		{
			add("invalid-migration", "migration times must be nonnegative");
			break;
		}
	}
	for (const auto& pt : m.pair_time_s)
	{
		const auto tag = "pair " + std::to_string(pt.from) + "->" + std::to_string(pt.to);
		if (!pids.count(pt.from) || !pids.count(pt.to))
		{
			add("dangling-reference", "migration " + tag + " names an unknown provider");
		}
		if (pt.time_s.size() != s.vm_classes.size())
		{
			add("invalid-migration", "migration " + tag + " needs one time per VM class");
		}
		if (std::any_of(pt.time_s.begin(), pt.time_s.end(), [](double t) { return !(t >= 0); }))
		{
			add("invalid-migration", "migration " + tag + " has a negative time");
		}
	}
	if (!(s.planning_period_hours > 0))
	{
		add("invalid-period", "planning_period_hours must be positive");
	}
	return report;
}

}  // namespace fedform
