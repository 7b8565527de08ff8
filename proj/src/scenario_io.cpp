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

#include <fedform/scenario_io.hpp>

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace fedform {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& where)
{
	if (!obj.is_object() || !obj.contains(key))
	{
		throw std::invalid_argument(where + ": missing key '" + key + "'");
	}
	return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where)
{
	const auto& v = require(obj, key, where);
	if (!v.is_number())
	{
		throw std::invalid_argument(where + ": '" + key + "' must be a number");
	}
	return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where)
{
	if (!obj.contains(key))
	{
		return fallback;
	}
	return number(obj, key, where);
}

int integer(const json& obj, const char* key, const std::string& where)
{
	const auto& v = require(obj, key, where);
	if (!v.is_number_integer())
	{
		throw std::invalid_argument(where + ": '" + key + "' must be an integer");
	}
	return v.get<int>();
}

std::vector<double> number_list(const json& v, const std::string& where)
{
	if (!v.is_array())
	{
		throw std::invalid_argument(where + " must be an array of numbers");
	}
	std::vector<double> out;
	for (const auto& x : v)
	{
		if (!x.is_number())
		{
			throw std::invalid_argument(where + " must be an array of numbers");
		}
		out.push_back(x.get<double>());
	}
	return out;
}

std::vector<std::vector<std::optional<double>>> read_matrix(const json& m, const std::string& where)
{
	std::vector<std::vector<std::optional<double>>> out;
	if (!m.is_array())
	{
		throw std::invalid_argument(where + ": share matrix must be an array of rows");
	}
	for (const auto& row : m)
	{
		if (!row.is_array())
		{
			throw std::invalid_argument(where + ": share matrix row must be an array");
		}
		auto& r = out.emplace_back();
		for (const auto& v : row)
		{
			if (v.is_null())
			{
				r.emplace_back();
			}
			else if (v.is_number())
			{
				r.emplace_back(v.get<double>());
			}
			else
			{
				throw std::invalid_argument(where + ": share entries must be numbers or null");
			}
		}
	}
	return out;
}

json write_matrix(const std::vector<std::vector<std::optional<double>>>& m)
{
	json out = json::array();
	for (const auto& row : m)
	{
		json r = json::array();
		for (const auto& v : row)
		{
			r.push_back(v ? json(*v) : json(nullptr));
		}
		out.push_back(std::move(r));
	}
	return out;
}

}  // namespace

Scenario scenario_from_json(const json& doc)
{
	if (!doc.is_object())
	{
		throw std::invalid_argument("scenario: document must be an object");
	}
	Scenario s;
	for (const auto& hc : require(doc, "host_classes", "scenario"))
	{
		const std::string where = "host_classes";
		HostClass c;
		c.id = integer(hc, "id", where);
		c.cpu_capacity = number(hc, "cpu_capacity", where);
		c.ram_gb = number(hc, "ram_gb", where);
		c.c_min = number(hc, "c_min", where);
		c.c_max = number(hc, "c_max", where);
		c.switch_energy_on = number_or(hc, "switch_energy_on", 0.0, where);
		c.switch_energy_off = number_or(hc, "switch_energy_off", 0.0, where);
		s.host_classes.push_back(c);
	}
	for (const auto& vc : require(doc, "vm_classes", "scenario"))
	{
		const std::string where = "vm_classes";
		VmClass c;
		c.id = integer(vc, "id", where);
		c.cpu_capacity = number(vc, "cpu_capacity", where);
		c.ram_gb = number(vc, "ram_gb", where);
		c.revenue_rate = number(vc, "revenue_rate", where);
		s.vm_classes.push_back(c);
	}
	if (doc.contains("shares") && !doc.at("shares").is_null())
	{
		const auto& sh = doc.at("shares");
		if (sh.contains("cpu"))
		{
			s.shares.cpu = read_matrix(sh.at("cpu"), "shares.cpu");
		}
		if (sh.contains("ram"))
		{
			s.shares.ram = read_matrix(sh.at("ram"), "shares.ram");
		}
	}

	HostId next_host = 1;
	VmId next_vm = 1;
	for (const auto& pj : require(doc, "providers", "scenario"))
	{
		Provider p;
		p.id = integer(pj, "id", "providers");
		const std::string where = "provider " + std::to_string(p.id);
		p.energy_price = number(pj, "energy_price", where);
		if (pj.contains("hosts"))
		{
			for (const auto& hj : pj.at("hosts"))
			{
				const int count = hj.contains("count") ? integer(hj, "count", where) : 1;
				if (count < 0)
				{
					throw std::invalid_argument(where + ": negative host count");
				}
				const ClassId cls = integer(hj, "class", where);
				const bool on = hj.contains("initially_on") ? hj.at("initially_on").get<bool>() : true;
				for (int k = 0; k < count; ++k)
				{
					p.hosts.push_back(Host{next_host++, cls, p.id, on});
				}
			}
		}
		if (pj.contains("vms"))
		{
			for (const auto& vj : pj.at("vms"))
			{
				const int count = vj.contains("count") ? integer(vj, "count", where) : 1;
				if (count < 0)
				{
					throw std::invalid_argument(where + ": negative VM count");
				}
				const ClassId cls = integer(vj, "class", where);
				std::optional<HostId> cur;
				if (vj.contains("current_host") && !vj.at("current_host").is_null())
				{
					cur = integer(vj, "current_host", where);
				}
				for (int k = 0; k < count; ++k)
				{
					p.vms.push_back(Vm{next_vm++, cls, p.id, cur});
				}
			}
		}
		s.providers.push_back(std::move(p));
	}
	std::sort(s.providers.begin(), s.providers.end(),
	          [](const Provider& a, const Provider& b) { return a.id < b.id; });

	if (doc.contains("migration"))
	{
		const auto& mj = doc.at("migration");
		const std::string where = "migration";
		s.migration.transfer_cost_per_gb = number_or(mj, "transfer_cost_per_gb", 0.0, where);
		s.migration.data_rate_mbit_s = number_or(mj, "data_rate_mbit_s", 0.0, where);
		s.migration.same_cp_cost = number_or(mj, "same_cp_cost", 0.0, where);
		if (mj.contains("migration_time_s"))
		{
			s.migration.migration_time_s = number_list(mj.at("migration_time_s"), where + ".migration_time_s");
		}
		if (mj.contains("pair_time_s"))
		{
			for (const auto& pj : mj.at("pair_time_s"))
			{
				const std::string pw = where + ".pair_time_s";
				PairMigrationTime pt;
				pt.from = integer(pj, "from", pw);
				pt.to = integer(pj, "to", pw);
				pt.time_s = number_list(require(pj, "time_s", pw), pw + ".time_s");
				s.migration.pair_time_s.push_back(std::move(pt));
			}
		}
	}
	s.planning_period_hours = number_or(doc, "planning_period_hours", 12.0, "scenario");
	return s;
}

Scenario load_scenario(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
	{
		throw std::invalid_argument("cannot open scenario file '" + path + "'");
	}
	json doc;
	try
	{
		in >> doc;
	}
	catch (const json::exception& e)
	{
		throw std::invalid_argument("scenario file '" + path + "': " + e.what());
	}
	return scenario_from_json(doc);
}

json scenario_to_json(const Scenario& s)
{
	json doc;
	doc["host_classes"] = json::array();
	for (const auto& c : s.host_classes)
	{
		doc["host_classes"].push_back({{"id", c.id},
		                               {"cpu_capacity", c.cpu_capacity},
		                               {"ram_gb", c.ram_gb},
		                               {"c_min", c.c_min},
		                               {"c_max", c.c_max},
		                               {"switch_energy_on", c.switch_energy_on},
		                               {"switch_energy_off", c.switch_energy_off}});
	}
	doc["vm_classes"] = json::array();
	for (const auto& c : s.vm_classes)
	{
		doc["vm_classes"].push_back(
		    {{"id", c.id}, {"cpu_capacity", c.cpu_capacity}, {"ram_gb", c.ram_gb}, {"revenue_rate", c.revenue_rate}});
	}
	if (!s.shares.empty())
	{
		doc["shares"] = {{"cpu", write_matrix(s.shares.cpu)}, {"ram", write_matrix(s.shares.ram)}};
	}
	doc["providers"] = json::array();
	for (const auto& p : s.providers)
	{
		json pj = {{"id", p.id}, {"energy_price", p.energy_price}};
		pj["hosts"] = json::array();
		for (std::size_t k = 0; k < p.hosts.size();)
		{
			std::size_t e = k + 1;
			while (e < p.hosts.size() && p.hosts[e].cls == p.hosts[k].cls
			       && p.hosts[e].initially_on == p.hosts[k].initially_on)
			{
				++e;
			}
			pj["hosts"].push_back(
			    {{"class", p.hosts[k].cls}, {"count", e - k}, {"initially_on", p.hosts[k].initially_on}});
			k = e;
		}
		pj["vms"] = json::array();
		for (std::size_t k = 0; k < p.vms.size();)
		{
			std::size_t e = k + 1;
			while (e < p.vms.size() && p.vms[e].cls == p.vms[k].cls && p.vms[e].current_host == p.vms[k].current_host)
			{
				++e;
			}
			json vj = {{"class", p.vms[k].cls}, {"count", e - k}};
			if (p.vms[k].current_host)
			{
				vj["current_host"] = *p.vms[k].current_host;
			}
			pj["vms"].push_back(std::move(vj));
			k = e;
		}
		doc["providers"].push_back(std::move(pj));
	}
	doc["migration"] = {{"transfer_cost_per_gb", s.migration.transfer_cost_per_gb},
	                    {"data_rate_mbit_s", s.migration.data_rate_mbit_s},
	                    {"migration_time_s", s.migration.migration_time_s},
	                    {"same_cp_cost", s.migration.same_cp_cost}};
	if (!s.migration.pair_time_s.empty())
	{
		json pairs = json::array();
		for (const auto& pt : s.migration.pair_time_s)
		{
			pairs.push_back({{"from", pt.from}, {"to", pt.to}, {"time_s", pt.time_s}});
		}
		doc["migration"]["pair_time_s"] = std::move(pairs);
	}
	doc["planning_period_hours"] = s.planning_period_hours;
	return doc;
}

void save_scenario(const Scenario& scenario, const std::string& path)
{
	std::ofstream out(path);
	if (!out)
	{
		throw std::invalid_argument("cannot write scenario file '" + path + "'");
	}
	out << scenario_to_json(scenario).dump(2) << '\n';
}

}  // namespace fedform
