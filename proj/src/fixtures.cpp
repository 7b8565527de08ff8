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

#include <fedform/fixtures.hpp>

#include <stdexcept>

namespace fedform::fixtures {

Scenario base()
{
	Scenario s;
	s.host_classes = {
	    {1, 1500, 16, 86.7, 274.9, 0, 0},
	    {2, 2000, 32, 143.0, 518.4, 0, 0},
	    {3, 3000, 64, 490.1, 1117.8, 0, 0},
	};
	s.vm_classes = {
	    {1, 300, 1, 0.08},
	    {2, 600, 2, 0.16},
	    {3, 1200, 4, 0.32},
	};
	s.shares.cpu = {{0.20, 0.15, 0.10}, {0.40, 0.30, 0.20}, {0.80, 0.60, 0.30}};
	s.shares.ram = {{0.0625, 0.03125, 0.015625}, {0.125, 0.0625, 0.03125}, {0.25, 0.125, 0.0625}};
	s.migration.transfer_cost_per_gb = 0;
	s.migration.data_rate_mbit_s = 0;
	s.planning_period_hours = 12;
	return s;
}

Provider& add_provider(Scenario& scenario, const std::vector<int>& hosts, const std::vector<int>& vms, double price)
{
	int next_host = 1;
	int next_vm = 1;
	for (const auto& p : scenario.providers)
	{
		next_host += static_cast<int>(p.hosts.size());
		next_vm += static_cast<int>(p.vms.size());
	}
	Provider p;
	p.id = static_cast<ProviderId>(scenario.providers.size()) + 1;
	p.energy_price = price;
	for (std::size_t g = 0; g < hosts.size(); ++g)
	{
		for (int c = 0; c < hosts[g]; ++c)
		{
			p.hosts.push_back(Host{next_host++, scenario.host_classes.at(g).id, p.id, true});
		}
	}
	for (std::size_t q = 0; q < vms.size(); ++q)
	{
		for (int c = 0; c < vms[q]; ++c)
		{
			p.vms.push_back(Vm{next_vm++, scenario.vm_classes.at(q).id, p.id, std::nullopt});
		}
	}
	scenario.providers.push_back(std::move(p));
	return scenario.providers.back();
}

Scenario scenario1()
{
	Scenario s = base();
	add_provider(s, {30, 0, 0}, {0, 0, 10});
	add_provider(s, {0, 30, 0}, {0, 0, 10});
	add_provider(s, {0, 0, 30}, {0, 0, 10});
	return s;
}

Scenario scenario2()
{
	Scenario s = base();
	add_provider(s, {0, 42, 0}, {0, 65, 0});
	add_provider(s, {0, 0, 41}, {0, 61, 0});
	add_provider(s, {0, 0, 41}, {0, 61, 0});
	return s;
}

Scenario appendix()
{
	Scenario s = base();
	add_provider(s, {0, 2, 0}, {0, 4, 0});
	add_provider(s, {1, 0, 0}, {0, 1, 0});
	add_provider(s, {1, 0, 0}, {0, 1, 0});
	return s;
}

Scenario case_study()
{
	Scenario s = base();
	constexpr double switch_time_s = 300e-6;
	for (auto& hc : s.host_classes)
	{
		hc.switch_energy_on = hc.c_max * switch_time_s / 3600.0;
		hc.switch_energy_off = hc.switch_energy_on;
	}
	s.migration.transfer_cost_per_gb = 0.001;
	s.migration.data_rate_mbit_s = 100;
	s.migration.same_cp_cost = 0;
	// Per-pair mean migration times (seconds) per VM class, calibrated to the
	// published case-study table; pairs not listed use the class defaults.
	s.migration.migration_time_s = {3118.75, 5000, 12000};
	const std::vector<PairMigrationTime> overrides{
	    {1, 2, {3118.75, 5000, 11645.5}}, {2, 1, {3843.6, 5356.4, 12000}},
	    {2, 4, {1754.3, 5000, 12000}},    {3, 1, {2957.3, 5000, 12000.3}},
	    {3, 2, {3118.75, 4951.2, 12000}}, {3, 4, {3898.4, 5000, 12000}},
	};
	for (ProviderId from = 1; from <= 4; ++from)
	{
		for (ProviderId to = 1; to <= 4; ++to)
		{
			if (from == to)
			{
				continue;
			}
			PairMigrationTime pt{from, to, s.migration.migration_time_s};
			for (const auto& o : overrides)
			{
				if (o.from == from && o.to == to)
				{
					pt = o;
				}
			}
			s.migration.pair_time_s.push_back(pt);
		}
	}

	const std::vector<std::vector<int>> workload{{0, 12, 13}, {18, 5, 11}, {17, 18, 11}, {3, 2, 0}};
	for (std::size_t p = 0; p < workload.size(); ++p)
	{
		const auto& h = experiment_hosts[p];
		Provider& prov = add_provider(s, {h[0], h[1], h[2]}, workload[p]);
		for (auto& vm : prov.vms)
		{
			vm.current_host = prov.hosts.front().id;
		}
	}
	return s;
}

std::vector<std::string> names()
{
	return {"scenario1", "scenario2", "appendix", "casestudy"};
}

Scenario by_name(const std::string& name)
{
	if (name == "scenario1")
	{
		return scenario1();
	}
	if (name == "scenario2")
	{
		return scenario2();
	}
	if (name == "appendix")
	{
		return appendix();
	}
	if (name == "casestudy")
	{
		return case_study();
	}
	throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace fedform::fixtures
