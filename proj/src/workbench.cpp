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

#include <fedform/workbench.hpp>

#include <fedform/coalitional.hpp>
#include <fedform/fixtures.hpp>
#include <fedform/rng.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fedform {

using nlohmann::json;

GeneratorConfig GeneratorConfig::experiment()
{
	GeneratorConfig c;
	for (const auto& row : fixtures::experiment_hosts)
	{
		c.provider_hosts.emplace_back(row.begin(), row.end());
	}
	return c;
}

void GeneratorConfig::validate() const
{
	auto fail = [](const std::string& why) { throw std::invalid_argument("generator config: " + why); };
	if (provider_hosts.empty())
	{
		fail("no providers");
	}
	for (const auto& row : provider_hosts)
	{
		if (row.size() != 3)
		{
			fail("each provider needs a host count for each of the 3 host classes");
		}
		for (int c : row)
		{
			if (c < 0)
			{
				fail("host counts must be nonnegative");
			}
		}
	}
	if (vm_count_min < 0 || vm_count_min > vm_count_max)
	{
		fail("vm count range must be a nonempty interval of nonnegative integers");
	}
	if (!(power_state_prob >= 0 && power_state_prob <= 1))
	{
		fail("power_state_prob must lie in [0,1]");
	}
	if (migration_time_s.size() != 3)
	{
		fail("migration_time_s needs one distribution per VM class");
	}
	auto check_normal = [&](const NormalSpec& n, const char* what) {
		if (!(n.sd >= 0) || !std::isfinite(n.mean))
		{
			fail(std::string(what) + " needs a finite mean and nonnegative sd");
		}
	};
	check_normal(switch_time_s, "switch_time_s");
	for (const auto& n : migration_time_s)
	{
		check_normal(n, "migration_time_s");
	}
	if (!(data_rate_mbit_s >= 0 && transfer_cost_per_gb >= 0 && energy_price_per_kwh >= 0))
	{
		fail("rates and prices must be nonnegative");
	}
	if (!(planning_period_hours > 0))
	{
		fail("planning_period_hours must be positive");
	}
}

namespace {

NormalSpec normal_from_json(const json& j, const std::string& where)
{
	if (!j.is_object() || !j.contains("mean") || !j.contains("sd") || !j.at("mean").is_number()
	    || !j.at("sd").is_number())
	{
		throw std::invalid_argument(where + " must be {\"mean\": x, \"sd\": y}");
	}
	return {j.at("mean").get<double>(), j.at("sd").get<double>()};
}

template <typename T>
void read_number(const json& doc, const char* key, T& out)
{
	if (!doc.contains(key))
	{
		return;
	}
	const auto& v = doc.at(key);
	if (!v.is_number())
	{
		throw std::invalid_argument(std::string("generator config: '") + key + "' must be a number");
	}
	out = v.get<T>();
}

}  // namespace

GeneratorConfig generator_config_from_json(const json& doc)
{
	if (!doc.is_object())
	{
		throw std::invalid_argument("generator config must be an object");
	}
	GeneratorConfig c = GeneratorConfig::experiment();
	if (doc.contains("provider_hosts"))
	{
		try
		{
			c.provider_hosts = doc.at("provider_hosts").get<std::vector<std::vector<int>>>();
		}
		catch (const json::exception&)
		{
			throw std::invalid_argument("generator config: provider_hosts must be a list of integer lists");
		}
	}
	if (doc.contains("vm_count_range"))
	{
		const auto& r = doc.at("vm_count_range");
		if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
		{
			throw std::invalid_argument("generator config: vm_count_range must be [lo, hi]");
		}
		c.vm_count_min = r[0].get<int>();
		c.vm_count_max = r[1].get<int>();
	}
	read_number(doc, "power_state_prob", c.power_state_prob);
	if (doc.contains("switch_time_s"))
	{
		c.switch_time_s = normal_from_json(doc.at("switch_time_s"), "switch_time_s");
	}
	if (doc.contains("migration_time_s"))
	{
		const auto& m = doc.at("migration_time_s");
		if (!m.is_array())
		{
			throw std::invalid_argument("generator config: migration_time_s must be a list");
		}
		c.migration_time_s.clear();
		for (const auto& e : m)
		{
			c.migration_time_s.push_back(normal_from_json(e, "migration_time_s entry"));
		}
	}
	read_number(doc, "data_rate_mbit_s", c.data_rate_mbit_s);
	read_number(doc, "transfer_cost_per_gb", c.transfer_cost_per_gb);
	read_number(doc, "energy_price_per_kwh", c.energy_price_per_kwh);
	read_number(doc, "planning_period_hours", c.planning_period_hours);
	read_number(doc, "seed", c.seed);
	c.validate();
	return c;
}

json generator_config_to_json(const GeneratorConfig& c)
{
	json mig = json::array();
	for (const auto& n : c.migration_time_s)
	{
		mig.push_back({{"mean", n.mean}, {"sd", n.sd}});
	}
	return {{"provider_hosts", c.provider_hosts},
	        {"vm_count_range", {c.vm_count_min, c.vm_count_max}},
	        {"power_state_prob", c.power_state_prob},
	        {"switch_time_s", {{"mean", c.switch_time_s.mean}, {"sd", c.switch_time_s.sd}}},
	        {"migration_time_s", mig},
	        {"data_rate_mbit_s", c.data_rate_mbit_s},
	        {"transfer_cost_per_gb", c.transfer_cost_per_gb},
	        {"energy_price_per_kwh", c.energy_price_per_kwh},
	        {"planning_period_hours", c.planning_period_hours},
	        {"seed", c.seed}};
}

Scenario generate_scenario(const GeneratorConfig& config, std::uint64_t run_index)
{
	config.validate();
	Rng rng(config.seed, run_index);
	Scenario s = fixtures::base();
	s.planning_period_hours = config.planning_period_hours;
	for (auto& hc : s.host_classes)
	{
		hc.switch_energy_on = hc.c_max * rng.truncated_normal(config.switch_time_s.mean, config.switch_time_s.sd) / 3600.0;
		hc.switch_energy_off = hc.c_max * rng.truncated_normal(config.switch_time_s.mean, config.switch_time_s.sd) / 3600.0;
	}
	const double price = config.energy_price_per_kwh / 1000.0;
	const std::size_t np = config.provider_hosts.size();
	std::vector<std::vector<int>> vms(np);
	for (std::size_t p = 0; p < np; ++p)
	{
		for (std::size_t q = 0; q < s.vm_classes.size(); ++q)
		{
			vms[p].push_back(static_cast<int>(rng.uniform_int(config.vm_count_min, config.vm_count_max)));
		}
	}
	for (std::size_t p = 0; p < np; ++p)
	{
		Provider& prov = fixtures::add_provider(s, config.provider_hosts[p], vms[p], price);
		for (auto& h : prov.hosts)
		{
			h.initially_on = rng.bernoulli(config.power_state_prob);
		}
		if (!prov.hosts.empty())
		{
			for (auto& vm : prov.vms)
			{
				vm.current_host = prov.hosts.front().id;
			}
		}
	}
	s.migration.transfer_cost_per_gb = config.transfer_cost_per_gb;
	s.migration.data_rate_mbit_s = config.data_rate_mbit_s;
	for (const auto& n : config.migration_time_s)
	{
		s.migration.migration_time_s.push_back(n.mean);
	}
	for (std::size_t from = 1; from <= np; ++from)
	{
		for (std::size_t to = 1; to <= np; ++to)
		{
			if (from == to)
			{
				continue;
			}
			PairMigrationTime pt;
			pt.from = static_cast<ProviderId>(from);
			pt.to = static_cast<ProviderId>(to);
			for (const auto& n : config.migration_time_s)
			{
				pt.time_s.push_back(rng.truncated_normal(n.mean, n.sd));
			}
			s.migration.pair_time_s.push_back(std::move(pt));
		}
	}
	return s;
}

const char* to_string(RunStatus status)
{
	switch (status)
	{
	case RunStatus::ok:
		return "ok";
	case RunStatus::time_limited:
		return "time_limited";
	case RunStatus::failed:
		return "failed";
	}
	return "unknown";
}

double RunRecord::energy_reduction_pct() const
{
	return energy_nofed_kw > 0 ? 100.0 * (energy_nofed_kw - energy_fed_kw) / energy_nofed_kw : 0.0;
}

double RunRecord::profit_increase_pct() const
{
	return profit_nofed > 0 ? 100.0 * (profit_fed - profit_nofed) / profit_nofed : 0.0;
}

RunRecord evaluate_run(const Scenario& scenario, const EvaluateOptions& options)
{
	const auto t0 = std::chrono::steady_clock::now();
	RunRecord r;
	try
	{
		TableOptions topt;
		topt.solver_options = options.solver;
		CharacteristicTable table(scenario, topt);
		const int n = table.num_players();
		table.warm_up(options.workers);

		auto power_kw = [&](Coalition c) {
			const auto e = table.entry(c);
			return e.report && e.report->allocation ? e.report->allocation->power_watts / 1000.0 : 0.0;
		};
		for (ProviderId i = 1; i <= n; ++i)
		{
			const Coalition solo{i};
			r.standalone.push_back(table.value(solo));
			r.profit_nofed += r.standalone.back();
			r.energy_nofed_kw += power_kw(solo);
		}
		const FormationTrace trace = run_formation(table, Partition::singletons(n), options.policy);
		r.n_shifts = static_cast<int>(trace.steps.size());
		r.partition = trace.final_partition.to_string();
		r.payoff.assign(static_cast<std::size_t>(n), 0.0);
		for (const auto& block : trace.final_partition.blocks())
		{
			r.profit_fed += table.value(block);
			r.energy_fed_kw += power_kw(block);
			for (const auto& [i, phi] : table.payoffs(block))
			{
				r.payoff[static_cast<std::size_t>(i) - 1] = phi;
			}
		}
		const std::uint32_t full = Coalition::grand(n).mask();
		for (std::uint32_t m = 1; m <= full; ++m)
		{
			const auto e = table.entry(Coalition::from_mask(m));
			if (e.report && e.report->status == SolveStatus::time_limited)
			{
				r.status = RunStatus::time_limited;
			}
		}
	}
	catch (const std::exception& ex)
	{
		r.status = RunStatus::failed;
		r.error = ex.what();
	}
	r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
	return r;
}

BatchSummary summarize(const std::vector<RunRecord>& records)
{
	BatchSummary s;
	s.runs = static_cast<int>(records.size());
	std::vector<double> sums;
	std::vector<int> counts;
	auto add = [](Stat& st, double x, int k) {
		if (k == 0)
		{
			st.min = st.max = x;
		}
		st.min = std::min(st.min, x);
		st.max = std::max(st.max, x);
		st.mean += x;
	};
	for (const auto& r : records)
	{
		if (r.status == RunStatus::failed)
		{
			++s.failed;
			continue;
		}
		add(s.energy_reduction_pct, r.energy_reduction_pct(), s.completed);
		add(s.profit_increase_pct, r.profit_increase_pct(), s.completed);
		++s.completed;
		if (sums.size() < r.payoff.size())
		{
			sums.resize(r.payoff.size(), 0.0);
			counts.resize(r.payoff.size(), 0);
		}
		for (std::size_t i = 0; i < r.payoff.size(); ++i)
		{
			if (r.standalone[i] > 0)
			{
				sums[i] += 100.0 * (r.payoff[i] - r.standalone[i]) / r.standalone[i];
				++counts[i];
			}
		}
	}
	if (s.completed > 0)
	{
		s.energy_reduction_pct.mean /= s.completed;
		s.profit_increase_pct.mean /= s.completed;
	}
	for (std::size_t i = 0; i < sums.size(); ++i)
	{
		s.provider_profit_increase_pct.push_back(counts[i] > 0 ? sums[i] / counts[i] : 0.0);
	}
	return s;
}

BatchResult run_batch(const GeneratorConfig& config, int runs, int workers, const EvaluateOptions& options)
{
	if (runs < 1)
	{
		throw std::invalid_argument("run_batch: runs must be at least 1");
	}
	config.validate();
	BatchResult out;
	out.records.resize(static_cast<std::size_t>(runs));
	auto one = [&](int k) {
		RunRecord r;
		try
		{
			r = evaluate_run(generate_scenario(config, static_cast<std::uint64_t>(k)), options);
		}
		catch (const std::exception& ex)
		{
			r.status = RunStatus::failed;
			r.error = ex.what();
		}
		r.run_index = static_cast<std::uint64_t>(k);
		r.seed = config.seed;
		out.records[static_cast<std::size_t>(k)] = std::move(r);
	};
	if (workers <= 1)
	{
		for (int k = 0; k < runs; ++k)
		{
			one(k);
		}
	}
	else
	{
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
		for (int k = 0; k < runs; ++k)
		{
			one(k);
		}
	}
	out.summary = summarize(out.records);
	return out;
}

namespace {

std::string fmt(double x)
{
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", x);
	return buf;
}

std::string quote(const std::string& s)
{
	std::string out = "\"";
	for (char c : s)
	{
		if (c == '"')
		{
			out += '"';
		}
		out += c;
	}
	return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line)
{
	std::vector<std::string> out;
	std::string cur;
	bool quoted = false;
	for (std::size_t k = 0; k < line.size(); ++k)
	{
		const char c = line[k];
		if (quoted)
		{
			if (c == '"' && k + 1 < line.size() && line[k + 1] == '"')
			{
				cur += '"';
				++k;
			}
			else if (c == '"')
			{
				quoted = false;
			}
			else
			{
				cur += c;
			}
		}
		else if (c == '"')
		{
			quoted = true;
		}
		else if (c == ',')
		{
			out.push_back(std::move(cur));
			cur.clear();
		}
		else
		{
			cur += c;
		}
	}
	out.push_back(std::move(cur));
	return out;
}

double parse_double(const std::string& s)
{
	std::size_t used = 0;
	const double x = std::stod(s, &used);
	if (used != s.size())
	{
		throw std::invalid_argument("bad number '" + s + "'");
	}
	return x;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<RunRecord>& records)
{
	std::size_t n = 0;
	for (const auto& r : records)
	{
		n = std::max(n, r.payoff.size());
	}
	out << "run_index,seed,status,n_shifts,partition,energy_nofed_kw,energy_fed_kw,profit_nofed,profit_fed";
	for (std::size_t i = 1; i <= n; ++i)
	{
		out << ",payoff_" << i;
	}
	for (std::size_t i = 1; i <= n; ++i)
	{
		out << ",standalone_" << i;
	}
	out << ",error\n";
	for (const auto& r : records)
	{
		out << r.run_index << ',' << r.seed << ',' << to_string(r.status) << ',' << r.n_shifts << ','
		    << quote(r.partition) << ',' << fmt(r.energy_nofed_kw) << ',' << fmt(r.energy_fed_kw) << ','
		    << fmt(r.profit_nofed) << ',' << fmt(r.profit_fed);
		for (std::size_t i = 0; i < n; ++i)
		{
			out << ',' << (i < r.payoff.size() ? fmt(r.payoff[i]) : "");
		}
		for (std::size_t i = 0; i < n; ++i)
		{
			out << ',' << (i < r.standalone.size() ? fmt(r.standalone[i]) : "");
		}
		out << ',' << quote(r.error) << '\n';
	}
}

std::vector<RunRecord> read_csv(std::istream& in)
{
	std::string line;
	if (!std::getline(in, line))
	{
		throw std::invalid_argument("csv: missing header");
	}
	const auto header = split_csv(line);
	if (header.size() < 10 || header[0] != "run_index" || header.back() != "error")
	{
		throw std::invalid_argument("csv: unexpected header");
	}
	const std::size_t n = (header.size() - 10) / 2;
	std::vector<RunRecord> out;
	int line_no = 1;
	while (std::getline(in, line))
	{
		++line_no;
		if (line.empty())
		{
			continue;
		}
		const auto f = split_csv(line);
		if (f.size() != header.size())
		{
			throw std::invalid_argument("csv line " + std::to_string(line_no) + ": wrong field count");
		}
		RunRecord r;
		try
		{
			r.run_index = std::stoull(f[0]);
			r.seed = std::stoull(f[1]);
			if (f[2] == "ok")
			{
				r.status = RunStatus::ok;
			}
			else if (f[2] == "time_limited")
			{
				r.status = RunStatus::time_limited;
			}
			else if (f[2] == "failed")
			{
				r.status = RunStatus::failed;
			}
			else
			{
				throw std::invalid_argument("unknown status '" + f[2] + "'");
			}
			r.n_shifts = std::stoi(f[3]);
			r.partition = f[4];
			r.energy_nofed_kw = parse_double(f[5]);
			r.energy_fed_kw = parse_double(f[6]);
			r.profit_nofed = parse_double(f[7]);
			r.profit_fed = parse_double(f[8]);
			for (std::size_t i = 0; i < n; ++i)
			{
				if (!f[9 + i].empty())
				{
					r.payoff.push_back(parse_double(f[9 + i]));
				}
				if (!f[9 + n + i].empty())
				{
					r.standalone.push_back(parse_double(f[9 + n + i]));
				}
			}
			r.error = f.back();
		}
		catch (const std::invalid_argument& ex)
		{
			throw std::invalid_argument("csv line " + std::to_string(line_no) + ": " + ex.what());
		}
		catch (const std::out_of_range&)
		{
			throw std::invalid_argument("csv line " + std::to_string(line_no) + ": number out of range");
		}
		out.push_back(std::move(r));
	}
	return out;
}

}  // namespace fedform
