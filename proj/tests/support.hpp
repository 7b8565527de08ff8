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

// Shared helpers for the test programs: random small scenarios and the
// independent oracles they are checked against.

#ifndef FEDFORM_TESTS_SUPPORT_HPP
#define FEDFORM_TESTS_SUPPORT_HPP

#include <fedform/coalitional.hpp>
#include <fedform/domain.hpp>
#include <fedform/fixtures.hpp>
#include <fedform/placement.hpp>
#include <fedform/rng.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

namespace fedform::testing {

struct RandomScenarioSpec
{
	int min_providers = 2;
	int max_providers = 4;
	int max_hosts = 6;  ///< Per provider.
	int max_vms = 8;    ///< Per provider.
	bool full_cost = true;  ///< Random power states, switch energy and migration.
};

/// Random scenario on the standard classes; every provider has at least one host.
inline Scenario random_scenario(Rng& rng, const RandomScenarioSpec& spec = {})
{
	Scenario s = fixtures::base();
	const int n = static_cast<int>(rng.uniform_int(spec.min_providers, spec.max_providers));
	for (int p = 0; p < n; ++p)
	{
		const int nh = static_cast<int>(rng.uniform_int(1, spec.max_hosts));
		const int nv = static_cast<int>(rng.uniform_int(0, spec.max_vms));
		std::vector<int> hosts(3, 0);
		std::vector<int> vms(3, 0);
		for (int k = 0; k < nh; ++k)
		{
			++hosts[rng.uniform_int(0, 2)];
		}
		for (int k = 0; k < nv; ++k)
		{
			++vms[rng.uniform_int(0, 2)];
		}
		const double price = spec.full_cost ? 0.0001 * static_cast<double>(rng.uniform_int(2, 6)) : fixtures::energy_price;
		fixtures::add_provider(s, hosts, vms, price);
	}
	if (!spec.full_cost)
	{
		return s;
	}
	for (auto& hc : s.host_classes)
	{
		hc.switch_energy_on = hc.c_max * rng.uniform01() * 2000 / 3600;
		hc.switch_energy_off = hc.c_max * rng.uniform01() * 2000 / 3600;
	}
	s.migration.transfer_cost_per_gb = 0.01 * rng.uniform01();
	s.migration.data_rate_mbit_s = 100;
	s.migration.migration_time_s = {rng.uniform01() * 600, rng.uniform01() * 1200, rng.uniform01() * 2400};
	for (int a = 1; a <= n; ++a)
	{
		for (int b = 1; b <= n; ++b)
		{
			if (a != b && rng.bernoulli(0.3))
			{
				s.migration.pair_time_s.push_back(
				    {a, b, {rng.uniform01() * 900, rng.uniform01() * 1800, rng.uniform01() * 3600}});
			}
		}
	}
	for (auto& p : s.providers)
	{
		for (auto& h : p.hosts)
		{
			h.initially_on = rng.bernoulli(0.5);
		}
		for (auto& v : p.vms)
		{
			if (rng.bernoulli(0.8))
			{
				v.current_host = p.hosts[rng.uniform_int(0, static_cast<std::int64_t>(p.hosts.size()) - 1)].id;
			}
		}
	}
	return s;
}

inline ProviderId owner_of_host(const Scenario& s, HostId id)
{
	for (const auto& p : s.providers)
	{
		for (const auto& h : p.hosts)
		{
			if (h.id == id)
			{
				return p.id;
			}
		}
	}
	return 0;
}

/// Hourly migration cost from the raw transfer parameters.
inline double oracle_migration(const Scenario& s, const Vm& vm, ProviderId target)
{
	if (!vm.current_host)
	{
		return 0;
	}
	const ProviderId from = owner_of_host(s, *vm.current_host);
	if (from == target)
	{
		return s.migration.same_cp_cost;
	}
	const std::size_t q = s.vm_class_index(vm.cls);
	double t = q < s.migration.migration_time_s.size() ? s.migration.migration_time_s[q] : 0.0;
	for (const auto& pt : s.migration.pair_time_s)
	{
		if (pt.from == from && pt.to == target)
		{
			t = pt.time_s[q];
		}
	}
	const double gb = s.migration.data_rate_mbit_s * t / 8000.0;
	return s.migration.transfer_cost_per_gb * gb / s.planning_period_hours;
}

/**
 * \brief Minimum hourly placement cost by exhaustive assignment.
 *
 * Returns +inf when nothing fits. Works straight from the scenario, without
 * the placement module's problem representation.
 */
inline double brute_force_cost(const Scenario& s, Coalition coalition)
{
	struct H
	{
		ProviderId owner;
		std::size_t cls;
		bool on0;
		double price;
	};
	std::vector<H> hosts;
	std::vector<Vm> vms;
	for (const auto& p : s.providers)
	{
		if (!coalition.contains(p.id))
		{
			continue;
		}
		for (const auto& h : p.hosts)
		{
			hosts.push_back({p.id, s.host_class_index(h.cls), h.initially_on, p.energy_price});
		}
		for (const auto& v : p.vms)
		{
			vms.push_back(v);
		}
	}
	const double T = s.planning_period_hours;
	std::vector<double> mig(vms.size() * hosts.size());
	for (std::size_t j = 0; j < vms.size(); ++j)
	{
		for (std::size_t i = 0; i < hosts.size(); ++i)
		{
			mig[j * hosts.size() + i] = oracle_migration(s, vms[j], hosts[i].owner);
		}
	}
	auto host_cost = [&](std::size_t i, bool on, double u) {
		const auto& hc = s.host_classes[hosts[i].cls];
		const double w = on ? hc.c_min + u * (hc.c_max - hc.c_min) + (hosts[i].on0 ? 0.0 : hc.switch_energy_on / T)
		                    : (hosts[i].on0 ? hc.switch_energy_off / T : 0.0);
		return hosts[i].price * w;
	};
	std::vector<std::size_t> assign(vms.size(), 0);
	double best = std::numeric_limits<double>::infinity();
	if (hosts.empty())
	{
		return vms.empty() ? 0.0 : best;
	}
	for (;;)
	{
		std::vector<double> cpu(hosts.size(), 0.0);
		std::vector<double> ram(hosts.size(), 0.0);
		std::vector<int> count(hosts.size(), 0);
		double cost = 0;
		for (std::size_t j = 0; j < vms.size(); ++j)
		{
			const std::size_t q = s.vm_class_index(vms[j].cls);
			cpu[assign[j]] += s.cpu_share_at(q, hosts[assign[j]].cls);
			ram[assign[j]] += s.ram_share_at(q, hosts[assign[j]].cls);
			++count[assign[j]];
			cost += mig[j * hosts.size() + assign[j]];
		}
		bool ok = true;
		for (std::size_t i = 0; i < hosts.size() && ok; ++i)
		{
			ok = cpu[i] <= 1 + 1e-9 && ram[i] <= 1 + 1e-9;
			cost += count[i] > 0 ? host_cost(i, true, cpu[i])
			                     : std::min(host_cost(i, true, 0.0), host_cost(i, false, 0.0));
		}
		if (ok)
		{
			best = std::min(best, cost);
		}
		std::size_t k = 0;
		while (k < assign.size() && ++assign[k] == hosts.size())
		{
			assign[k++] = 0;
		}
		if (k == assign.size())
		{
			break;
		}
	}
	return best;
}

/// Shapley value by averaging marginal contributions over all orderings.
inline std::map<ProviderId, double> permutation_shapley(const std::map<Coalition, double>& v, Coalition s)
{
	std::vector<ProviderId> order = s.members();
	std::map<ProviderId, double> phi;
	long perms = 0;
	do
	{
		Coalition before;
		for (ProviderId i : order)
		{
			const double vb = before.empty() ? 0.0 : v.at(before);
			phi[i] += v.at(before.with(i)) - vb;
			before.insert(i);
		}
		++perms;
	} while (std::next_permutation(order.begin(), order.end()));
	for (auto& [i, x] : phi)
	{
		x /= static_cast<double>(perms);
	}
	return phi;
}

}  // namespace fedform::testing

#endif  // FEDFORM_TESTS_SUPPORT_HPP
