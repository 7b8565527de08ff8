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

// Command-line front end: placement, coalition values, formation, stability,
// core analysis, batch experiments and golden reproduction.

#include <fedform/coalitional.hpp>
#include <fedform/core.hpp>
#include <fedform/fixtures.hpp>
#include <fedform/hedonic.hpp>
#include <fedform/placement.hpp>
#include <fedform/reproduce.hpp>
#include <fedform/scenario_io.hpp>
#include <fedform/workbench.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace fedform;
using nlohmann::json;

namespace {

enum ExitCode
{
	exit_ok = 0,
	exit_mismatch = 1,
	exit_input = 2,
	exit_limit = 3
};

/// Signals that a solver stopped at its limit; the partial output is printed.
struct solver_limit
{
	std::string what;
};

Scenario scenario_arg(const std::string& arg)
{
	if (!std::filesystem::exists(arg))
	{
		const auto names = fixtures::names();
		if (std::find(names.begin(), names.end(), arg) != names.end())
		{
			return fixtures::by_name(arg);
		}
	}
	return load_scenario(arg);
}

Coalition coalition_arg(const std::string& text, int n)
{
	Coalition c;
	std::stringstream ss(text);
	std::string tok;
	while (std::getline(ss, tok, ','))
	{
		tok.erase(std::remove_if(tok.begin(), tok.end(), [](char ch) { return ch == ' ' || ch == '{' || ch == '}'; }),
		          tok.end());
		if (tok.empty())
		{
			continue;
		}
		std::size_t used = 0;
		int id = 0;
		try
		{
			id = std::stoi(tok, &used);
		}
		catch (const std::exception&)
		{
			used = 0;
		}
		if (used != tok.size() || id < 1 || id > n)
		{
			throw std::invalid_argument("bad provider id '" + tok + "' in coalition '" + text + "'");
		}
		c.insert(id);
	}
	if (c.empty())
	{
		throw std::invalid_argument("empty coalition '" + text + "'");
	}
	return c;
}

std::string fmt(const char* f, double x)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, f, x);
	return buf;
}

std::string payoff_string(const PayoffVector& phi)
{
	std::string s = "{";
	for (const auto& [i, x] : phi)
	{
		s += (s.size() > 1 ? ", " : "") + fmt("%.4f", x);
	}
	return s + "}";
}

SolverKind solver_kind(const std::string& name)
{
	return name == "naive" ? SolverKind::naive : SolverKind::symmetric;
}

// ---------------------------------------------------------------- solve

struct SolveArgs
{
	std::string scenario;
	std::string coalition;
	std::string solver = "symmetric";
	double time_limit = 300;
	bool json = false;
};

int cmd_solve(const SolveArgs& a)
{
	const Scenario s = scenario_arg(a.scenario);
	const Coalition c = coalition_arg(a.coalition, static_cast<int>(s.providers.size()));
	const PlacementProblem prob = build_problem(s, c);
	SolverOptions opt;
	opt.time_limit_s = a.time_limit;
	const SolveReport rep = solve(prob, solver_kind(a.solver), opt);
	if (!rep.allocation)
	{
		if (rep.status == SolveStatus::time_limited)
		{
			throw solver_limit{rep.message};
		}
		throw std::invalid_argument("coalition " + c.to_string() + " is infeasible: " + rep.message);
	}
	const Allocation& al = *rep.allocation;
	const CostBreakdown cb = cost_breakdown(prob, al);
	std::vector<std::vector<VmId>> vms(prob.num_hosts());
	for (std::size_t j = 0; j < prob.num_vms(); ++j)
	{
		vms[al.host_of[j]].push_back(prob.vms[j].id);
	}
	if (a.json)
	{
		json hosts = json::array();
		for (std::size_t i = 0; i < prob.num_hosts(); ++i)
		{
			hosts.push_back({{"id", prob.hosts[i].id},
			                 {"owner", prob.hosts[i].owner},
			                 {"class", prob.host_classes[prob.hosts[i].cls].id},
			                 {"powered", bool(al.powered_on[i])},
			                 {"utilization", al.utilization[i]},
			                 {"vms", vms[i]}});
		}
		json doc{{"coalition", c.to_string()},
		         {"status", to_string(rep.status)},
		         {"objective", rep.objective},
		         {"lower_bound", rep.lower_bound},
		         {"nodes", rep.nodes_explored},
		         {"power_watts", al.power_watts},
		         {"cost",
		          {{"idle", cb.idle_power},
		           {"dynamic", cb.dynamic_power},
		           {"switch", cb.switch_cost},
		           {"migration", cb.migration_cost},
		           {"total", cb.total()}}},
		         {"hosts", hosts}};
		std::cout << doc.dump(2) << "\n";
	}
	else
	{
		std::cout << "coalition " << c.to_string() << "  status " << to_string(rep.status) << "  nodes "
		          << rep.nodes_explored << "\n";
		for (std::size_t i = 0; i < prob.num_hosts(); ++i)
		{
			if (!al.powered_on[i] && vms[i].empty())
			{
				continue;
			}
			std::cout << "host " << prob.hosts[i].id << " (CP" << prob.hosts[i].owner << ", class "
			          << prob.host_classes[prob.hosts[i].cls].id << ") " << (al.powered_on[i] ? "on " : "off")
			          << " util " << fmt("%.3f", al.utilization[i]) << " vms";
			for (VmId v : vms[i])
			{
				std::cout << ' ' << v;
			}
			std::cout << "\n";
		}
		int on = static_cast<int>(std::count(al.powered_on.begin(), al.powered_on.end(), true));
		std::cout << "powered hosts " << on << " of " << prob.num_hosts() << ", power "
		          << fmt("%.2f", al.power_watts / 1000.0) << " kW\n";
		std::cout << "cost $/h: idle " << fmt("%.4f", cb.idle_power) << "  dynamic " << fmt("%.4f", cb.dynamic_power)
		          << "  switch " << fmt("%.4f", cb.switch_cost) << "  migration " << fmt("%.4f", cb.migration_cost)
		          << "  total " << fmt("%.4f", cb.total()) << "\n";
		for (const auto& [p, u] : usage_by_provider(prob, al))
		{
			std::cout << "  CP" << p << ": " << u.hosts_on << " hosts, " << fmt("%.2f", u.power_watts / 1000.0)
			          << " kW, " << fmt("%.4f", u.energy_cost) << " $/h\n";
		}
	}
	if (rep.status == SolveStatus::time_limited)
	{
		throw solver_limit{"time limit reached; best allocation shown"};
	}
	return exit_ok;
}

// ---------------------------------------------------------------- value

struct ValueArgs
{
	std::string scenario;
	std::string coalition;
	bool all = false;
	std::string csv;
	int workers = 1;
};

void check_limits(CharacteristicTable& table)
{
	const std::uint32_t full = table.grand().mask();
	for (std::uint32_t m = 1; m <= full; ++m)
	{
		const auto e = table.entry(Coalition::from_mask(m));
		if (e.report && e.report->status == SolveStatus::time_limited)
		{
			throw solver_limit{"placement of " + Coalition::from_mask(m).to_string() + " hit the time limit"};
		}
	}
}

int cmd_value(const ValueArgs& a)
{
	const Scenario s = scenario_arg(a.scenario);
	CharacteristicTable table(s);
	const int n = table.num_players();
	std::vector<Coalition> rows;
	if (a.all || a.coalition.empty())
	{
		table.warm_up(a.workers);
		for (std::uint32_t m = 1; m <= table.grand().mask(); ++m)
		{
			rows.push_back(Coalition::from_mask(m));
		}
		std::stable_sort(rows.begin(), rows.end(),
		                 [](Coalition x, Coalition y) { return x.size() != y.size() ? x.size() < y.size() : x < y; });
	}
	else
	{
		rows.push_back(coalition_arg(a.coalition, n));
	}
	std::ofstream csv;
	if (!a.csv.empty())
	{
		csv.open(a.csv);
		if (!csv)
		{
			throw std::invalid_argument("cannot write " + a.csv);
		}
		csv << "coalition,value";
		for (int i = 1; i <= n; ++i)
		{
			csv << ",phi_" << i;
		}
		csv << "\n";
	}
	std::printf("%-14s %10s  %s\n", "coalition", "v", "phi");
	for (Coalition c : rows)
	{
		if (!table.feasible(c))
		{
			std::printf("%-14s %10s  -\n", c.to_string().c_str(), "infeasible");
			if (csv)
			{
				csv << '"' << c.to_string() << "\",";
				for (int i = 1; i <= n; ++i)
				{
					csv << ',';
				}
				csv << "\n";
			}
			continue;
		}
		const double v = table.value(c);
		PayoffVector phi;
		std::string phi_text = "-";
		try
		{
			phi = table.payoffs(c);
			phi_text = payoff_string(phi);
		}
		catch (const infeasible_coalition_error&)
		{
			phi_text = "(sub-coalition infeasible)";
		}
		std::printf("%-14s %10.4f  %s\n", c.to_string().c_str(), v, phi_text.c_str());
		if (csv)
		{
			csv << '"' << c.to_string() << "\"," << fmt("%.17g", v);
			for (int i = 1; i <= n; ++i)
			{
				csv << ',';
				if (phi.count(i))
				{
					csv << fmt("%.17g", phi.at(i));
				}
			}
			csv << "\n";
		}
	}
	check_limits(table);
	return exit_ok;
}

// ---------------------------------------------------------------- form

struct FormArgs
{
	std::string scenario;
	std::string order = "round-robin";
	std::uint64_t seed = 1;
	std::string initial = "singletons";
	std::string trace;
};

SchedulePolicy policy_arg(const std::string& order, std::uint64_t seed, int n)
{
	if (order == "round-robin")
	{
		return SchedulePolicy::round_robin();
	}
	if (order == "random")
	{
		return SchedulePolicy::random(seed);
	}
	const Coalition everyone = coalition_arg(order, n);
	std::vector<ProviderId> ids;
	std::stringstream ss(order);
	std::string tok;
	while (std::getline(ss, tok, ','))
	{
		ids.push_back(std::stoi(tok));
	}
	if (everyone != Coalition::grand(n) || static_cast<int>(ids.size()) != n)
	{
		throw std::invalid_argument("--order must be round-robin, random, or a permutation of 1.." + std::to_string(n));
	}
	return SchedulePolicy::fixed(ids);
}

int cmd_form(const FormArgs& a)
{
	const Scenario s = scenario_arg(a.scenario);
	CharacteristicTable table(s);
	const int n = table.num_players();
	const Partition initial = a.initial == "singletons" ? Partition::singletons(n) : Partition::parse(a.initial, n);
	const FormationTrace trace = run_formation(table, initial, policy_arg(a.order, a.seed, n));
	std::cout << "initial " << trace.initial.to_string() << "\n";
	json steps = json::array();
	for (std::size_t k = 0; k < trace.steps.size(); ++k)
	{
		const auto& st = trace.steps[k];
		const double before = table.payoffs(st.from).at(st.provider);
		const double after = table.payoffs(st.to).at(st.provider);
		std::cout << "shift " << k + 1 << ": CP" << st.provider << " " << st.from.to_string() << " -> "
		          << st.to.to_string() << "  payoff " << fmt("%.4f", before) << " -> " << fmt("%.4f", after) << "  now "
		          << st.after.to_string() << "\n";
		steps.push_back({{"provider", st.provider},
		                 {"from", st.from.to_string()},
		                 {"to", st.to.to_string()},
		                 {"payoff_before", before},
		                 {"payoff_after", after},
		                 {"partition", st.after.to_string()}});
	}
	const Partition& fin = trace.final_partition;
	double total = 0;
	json payoffs = json::object();
	for (Coalition b : fin.blocks())
	{
		total += table.value(b);
		for (const auto& [i, x] : table.payoffs(b))
		{
			payoffs[std::to_string(i)] = x;
		}
	}
	const bool nash = is_nash_stable(fin, table).stable;
	std::cout << "final " << fin.to_string() << "  value " << fmt("%.4f", total) << "  activations "
	          << trace.activations << "  nash-stable " << (nash ? "yes" : "no") << "\n";
	if (!a.trace.empty())
	{
		std::ofstream out(a.trace);
		if (!out)
		{
			throw std::invalid_argument("cannot write " + a.trace);
		}
		out << json{{"initial", trace.initial.to_string()},
		            {"steps", steps},
		            {"final", fin.to_string()},
		            {"total_value", total},
		            {"payoffs", payoffs},
		            {"activations", trace.activations},
		            {"nash_stable", nash}}
		           .dump(2)
		    << "\n";
	}
	check_limits(table);
	return exit_ok;
}

// ---------------------------------------------------------------- stable

struct StableArgs
{
	std::string scenario;
	std::string partition;
	bool enumerate = false;
	int workers = 1;
};

std::string witness(const StabilityResult& r)
{
	if (r.stable)
	{
		return "";
	}
	return "CP" + std::to_string(r.provider) + " -> " + (r.target.empty() ? std::string("alone") : r.target.to_string());
}

int cmd_stable(const StableArgs& a)
{
	const Scenario s = scenario_arg(a.scenario);
	CharacteristicTable table(s);
	const int n = table.num_players();
	if (!a.partition.empty() && !a.enumerate)
	{
		const Partition p = Partition::parse(a.partition, n);
		const auto ns = is_nash_stable(p, table);
		const auto is = is_individually_stable(p, table);
		std::cout << p.to_string() << "\n  nash-stable " << (ns.stable ? "yes" : "no  (" + witness(ns) + ")")
		          << "\n  individually-stable " << (is.stable ? "yes" : "no  (" + witness(is) + ")") << "\n";
		check_limits(table);
		return exit_ok;
	}
	const auto reports = analyze_partitions(table, a.workers);
	std::printf("%-22s %-24s %8s  %-40s %s\n", "partition", "values", "total", "payoffs", "stable");
	for (const auto& r : reports)
	{
		std::string vals = "{";
		std::string pays = "{";
		for (std::size_t b = 0; b < r.values.size(); ++b)
		{
			vals += (b ? ", " : "") + fmt("%.2f", r.values[b]);
			pays += (b ? ", " : "") + (r.payoffs[b].empty() ? std::string("-") : payoff_string(r.payoffs[b]));
		}
		vals += "}";
		pays += "}";
		std::string flags = r.nash_stable ? "nash" : "";
		if (r.individually_stable)
		{
			flags += flags.empty() ? "individual" : "+individual";
		}
		std::printf("%-22s %-24s %8.4f  %-40s %s\n", r.partition.to_string().c_str(), vals.c_str(), r.total,
		            pays.c_str(), r.feasible ? flags.c_str() : "infeasible");
	}
	check_limits(table);
	return exit_ok;
}

// ---------------------------------------------------------------- core

struct CoreArgs
{
	std::string scenario;
	std::string values;
};

CoreGame game_from_values(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
	{
		throw std::invalid_argument("cannot open " + path);
	}
	json doc;
	try
	{
		in >> doc;
	}
	catch (const json::exception& e)
	{
		throw std::invalid_argument(path + ": " + e.what());
	}
	if (!doc.is_object() || !doc.contains("players") || !doc.contains("values") || !doc.at("values").is_object())
	{
		throw std::invalid_argument(path + ": expected {\"players\": n, \"values\": {\"{1}\": v, ...}}");
	}
	CoreGame g;
	g.n = doc.at("players").get<int>();
	if (g.n < 1 || g.n > max_core_players)
	{
		throw std::invalid_argument(path + ": players must lie in 1.." + std::to_string(max_core_players));
	}
	for (const auto& [key, v] : doc.at("values").items())
	{
		const std::string text = v.is_string() ? v.get<std::string>() : v.dump();
		g.values[coalition_arg(key, g.n)] = parse_decimal(text);
	}
	return g;
}

int cmd_core(const CoreArgs& a)
{
	CoreGame g;
	std::unique_ptr<CharacteristicTable> table;
	if (!a.values.empty())
	{
		g = game_from_values(a.values);
	}
	else
	{
		table = std::make_unique<CharacteristicTable>(scenario_arg(a.scenario));
		table->warm_up();
		check_limits(*table);
		g = core_game(*table);
	}
	const CoreResult r = check_core(g);
	if (r.empty)
	{
		std::cout << "core: EMPTY\n";
		std::cout << "balanced certificate (sum alpha v = " << to_decimal(r.weighted_value) << " > v(N) = "
		          << to_decimal(r.grand_value) << "):\n";
		for (const auto& [c, w] : r.certificate)
		{
			std::cout << "  alpha" << c.to_string() << " = " << w.get_str() << "\n";
		}
	}
	else
	{
		std::cout << "core: NON-EMPTY\nimputation:";
		for (std::size_t i = 0; i < r.imputation.size(); ++i)
		{
			std::cout << "  x" << i + 1 << " = " << to_decimal(r.imputation[i]);
		}
		std::cout << "\n";
	}
	return exit_ok;
}

// ---------------------------------------------------------------- batch

struct BatchArgs
{
	std::string config;
	int runs = 20;
	std::uint64_t seed = 1;
	bool seed_set = false;
	std::string out;
	int workers = 1;
	std::string order = "round-robin";
};

void print_stat(const char* name, const Stat& s)
{
	std::printf("%-26s mean %7.2f  min %7.2f  max %7.2f\n", name, s.mean, s.min, s.max);
}

int cmd_batch(const BatchArgs& a)
{
	GeneratorConfig cfg = GeneratorConfig::experiment();
	if (!a.config.empty())
	{
		std::ifstream in(a.config);
		if (!in)
		{
			throw std::invalid_argument("cannot open " + a.config);
		}
		json doc;
		try
		{
			in >> doc;
		}
		catch (const json::exception& e)
		{
			throw std::invalid_argument(a.config + ": " + e.what());
		}
		cfg = generator_config_from_json(doc);
	}
	if (a.seed_set)
	{
		cfg.seed = a.seed;
	}
	if (a.runs < 1)
	{
		throw std::invalid_argument("--runs must be at least 1");
	}
	EvaluateOptions opt;
	opt.policy = a.order == "random" ? SchedulePolicy::random(cfg.seed) : SchedulePolicy::round_robin();
	const BatchResult res = run_batch(cfg, a.runs, a.workers, opt);
	if (!a.out.empty())
	{
		std::ofstream out(a.out);
		if (!out)
		{
			throw std::invalid_argument("cannot write " + a.out);
		}
		write_csv(out, res.records);
	}
	const auto& s = res.summary;
	std::printf("runs %d  completed %d  failed %d\n", s.runs, s.completed, s.failed);
	print_stat("energy reduction %", s.energy_reduction_pct);
	print_stat("profit increase %", s.profit_increase_pct);
	for (std::size_t i = 0; i < s.provider_profit_increase_pct.size(); ++i)
	{
		std::printf("CP%zu mean profit increase %% %7.2f\n", i + 1, s.provider_profit_increase_pct[i]);
	}
	for (const auto& r : res.records)
	{
		if (r.status == RunStatus::failed)
		{
			std::fprintf(stderr, "run %llu failed: %s\n", static_cast<unsigned long long>(r.run_index),
			             r.error.c_str());
		}
	}
	const bool limited = std::any_of(res.records.begin(), res.records.end(),
	                                 [](const RunRecord& r) { return r.status == RunStatus::time_limited; });
	if (limited)
	{
		throw solver_limit{"some runs hit the placement time limit"};
	}
	return exit_ok;
}

// ---------------------------------------------------------------- reproduce

struct ReproduceArgs
{
	std::string target = "all";
	bool verbose = false;
	int workers = 1;
};

int cmd_reproduce(const ReproduceArgs& a)
{
	std::vector<std::string> targets;
	if (a.target == "all")
	{
		targets = reproduce_targets();
	}
	else
	{
		targets.push_back(a.target);
	}
	int failures = 0;
	for (const auto& t : targets)
	{
		const ReproduceReport rep = reproduce(t, a.workers);
		print_report(std::cout, rep, !a.verbose);
		failures += rep.failures();
	}
	return failures == 0 ? exit_ok : exit_mismatch;
}

}  // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Energy-aware cloud federation formation toolkit"};
	app.require_subcommand(1);

	SolveArgs solve_args;
	auto* solve_cmd = app.add_subcommand("solve", "Energy-minimizing VM placement for one coalition");
	solve_cmd->add_option("--scenario", solve_args.scenario, "Scenario JSON file or built-in fixture name")->required();
	solve_cmd->add_option("--coalition", solve_args.coalition, "Provider ids, e.g. 1,2,3")->required();
	solve_cmd->add_option("--solver", solve_args.solver)->check(CLI::IsMember({"naive", "symmetric"}));
	solve_cmd->add_option("--time-limit", solve_args.time_limit, "Seconds")->check(CLI::PositiveNumber);
	solve_cmd->add_flag("--json", solve_args.json, "Machine-readable output");

	ValueArgs value_args;
	auto* value_cmd = app.add_subcommand("value", "Coalition values and Shapley payoffs");
	value_cmd->add_option("--scenario", value_args.scenario)->required();
	auto* value_one = value_cmd->add_option("--coalition", value_args.coalition);
	value_cmd->add_flag("--all", value_args.all, "Every nonempty coalition")->excludes(value_one);
	value_cmd->add_option("--csv", value_args.csv, "Also write the table as CSV");
	value_cmd->add_option("--workers", value_args.workers)->check(CLI::PositiveNumber);

	FormArgs form_args;
	auto* form_cmd = app.add_subcommand("form", "Run hedonic coalition formation");
	form_cmd->add_option("--scenario", form_args.scenario)->required();
	form_cmd->add_option("--order", form_args.order, "round-robin, random, or a comma list such as 3,2,4,1");
	form_cmd->add_option("--seed", form_args.seed, "Seed for --order random");
	form_cmd->add_option("--initial", form_args.initial, "singletons or a partition such as {1,3}{2,4}");
	form_cmd->add_option("--trace", form_args.trace, "Write the shift trace as JSON");

	StableArgs stable_args;
	auto* stable_cmd = app.add_subcommand("stable", "Stability of a partition or of all partitions");
	stable_cmd->add_option("--scenario", stable_args.scenario)->required();
	auto* stable_one = stable_cmd->add_option("--partition", stable_args.partition);
	stable_cmd->add_flag("--enumerate", stable_args.enumerate)->excludes(stable_one);
	stable_cmd->add_option("--workers", stable_args.workers)->check(CLI::PositiveNumber);

	CoreArgs core_args;
	auto* core_cmd = app.add_subcommand("core", "Decide core emptiness in exact arithmetic");
	auto* core_scn = core_cmd->add_option("--scenario", core_args.scenario);
	auto* core_val = core_cmd->add_option("--values", core_args.values, "JSON {\"players\": n, \"values\": {...}}");
	core_scn->excludes(core_val);
	core_cmd->callback([&] {
		if (core_args.scenario.empty() && core_args.values.empty())
		{
			throw CLI::ValidationError("core", "one of --scenario or --values is required");
		}
	});

	BatchArgs batch_args;
	auto* batch_cmd = app.add_subcommand("batch", "Randomized experiment batch");
	batch_cmd->add_option("--config", batch_args.config, "Generator configuration JSON");
	batch_cmd->add_option("--runs", batch_args.runs)->check(CLI::PositiveNumber);
	batch_cmd->add_option("--seed", batch_args.seed)->each([&](const std::string&) { batch_args.seed_set = true; });
	batch_cmd->add_option("--out", batch_args.out, "CSV output file");
	batch_cmd->add_option("--workers", batch_args.workers)->check(CLI::PositiveNumber);
	batch_cmd->add_option("--order", batch_args.order)->check(CLI::IsMember({"round-robin", "random"}));

	ReproduceArgs repro_args;
	auto* repro_cmd = app.add_subcommand("reproduce", "Diff built-in fixtures against the published tables");
	repro_cmd->add_option("target", repro_args.target, "scenario1, scenario2, appendix, casestudy or all")
	    ->check(CLI::IsMember({"scenario1", "scenario2", "appendix", "casestudy", "all"}));
	repro_cmd->add_flag("-v,--verbose", repro_args.verbose, "Print passing checks too");
	repro_cmd->add_option("--workers", repro_args.workers)->check(CLI::PositiveNumber);

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::CallForHelp& e)
	{
		return app.exit(e);
	}
	catch (const CLI::ParseError& e)
	{
		app.exit(e);
		return exit_input;
	}

	try
	{
		if (solve_cmd->parsed())
		{
			return cmd_solve(solve_args);
		}
		if (value_cmd->parsed())
		{
			return cmd_value(value_args);
		}
		if (form_cmd->parsed())
		{
			return cmd_form(form_args);
		}
		if (stable_cmd->parsed())
		{
			return cmd_stable(stable_args);
		}
		if (core_cmd->parsed())
		{
			return cmd_core(core_args);
		}
		if (batch_cmd->parsed())
		{
			return cmd_batch(batch_args);
		}
		if (repro_cmd->parsed())
		{
			return cmd_reproduce(repro_args);
		}
	}
	catch (const solver_limit& e)
	{
		std::cerr << "solver limit: " << e.what << "\n";
		return exit_limit;
	}
	catch (const convergence_error& e)
	{
		std::cerr << "formation: " << e.what() << "\n";
		return exit_limit;
	}
	catch (const infeasible_coalition_error& e)
	{
		std::cerr << "infeasible: " << e.what() << "\n";
		return exit_input;
	}
	catch (const std::invalid_argument& e)
	{
		std::cerr << "input error: " << e.what() << "\n";
		return exit_input;
	}
	catch (const std::domain_error& e)
	{
		std::cerr << "input error: " << e.what() << "\n";
		return exit_input;
	}
	catch (const std::length_error& e)
	{
		std::cerr << "size limit: " << e.what() << "\n";
		return exit_input;
	}
	return exit_ok;
}
