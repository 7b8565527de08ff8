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
 * \file fedform/workbench.hpp
 *
 * \brief Random scenario generation, single-run evaluation and batches.
 */

#ifndef FEDFORM_WORKBENCH_HPP
#define FEDFORM_WORKBENCH_HPP

#include <fedform/domain.hpp>
#include <fedform/hedonic.hpp>

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fedform {

struct NormalSpec
{
	double mean = 0;
	double sd = 0;
};

struct GeneratorConfig
{
	std::vector<std::vector<int>> provider_hosts;  ///< Per provider, hosts per host class.
	int vm_count_min = 0;
	int vm_count_max = 20;
	double power_state_prob = 0.5;
	NormalSpec switch_time_s{300e-6, 50e-6};
	std::vector<NormalSpec> migration_time_s{{277, 182}, {554, 364}, {1108, 728}};
	double data_rate_mbit_s = 100;
	double transfer_cost_per_gb = 0.001;
	double energy_price_per_kwh = 0.4;
	double planning_period_hours = 12;
	std::uint64_t seed = 1;

	/// Four providers of the experiment configuration.
	static GeneratorConfig experiment();

	/// Throws std::invalid_argument on a broken invariant.
	void validate() const;
};

/// Reads a config; missing keys keep the experiment defaults.
GeneratorConfig generator_config_from_json(const nlohmann::json& doc);
nlohmann::json generator_config_to_json(const GeneratorConfig& config);

/**
 * \brief Deterministic scenario for (config.seed, run_index).
 *
 * Draw order: switch-on and switch-off time per host class; VM counts per
 * provider and class; power state per host; migration time per ordered
 * provider pair and VM class. Every VM starts on its owner's first host.
 */
Scenario generate_scenario(const GeneratorConfig& config, std::uint64_t run_index);

enum class RunStatus
{
	ok,
	time_limited,
	failed
};

const char* to_string(RunStatus status);

struct RunRecord
{
	std::uint64_t run_index = 0;
	std::uint64_t seed = 0;
	RunStatus status = RunStatus::ok;
	std::string error;
	int n_shifts = 0;
	std::string partition;
	double energy_nofed_kw = 0;
	double energy_fed_kw = 0;
	double profit_nofed = 0;
	double profit_fed = 0;
	std::vector<double> payoff;      ///< Per provider, in the final partition.
	std::vector<double> standalone;  ///< Per provider, alone.
	double wall_seconds = 0;         ///< Not written to CSV.

	double energy_reduction_pct() const;
	double profit_increase_pct() const;
};

struct EvaluateOptions
{
	SchedulePolicy policy;
	SolverOptions solver;
	int workers = 1;  ///< Threads for warming the characteristic table.
};

/// Forms coalitions from singletons and compares against working alone.
RunRecord evaluate_run(const Scenario& scenario, const EvaluateOptions& options = {});

struct Stat
{
	double min = 0;
	double max = 0;
	double mean = 0;
};

struct BatchSummary
{
	int runs = 0;
	int completed = 0;
	int failed = 0;
	Stat energy_reduction_pct;
	Stat profit_increase_pct;
	std::vector<double> provider_profit_increase_pct;  ///< Mean over runs with positive standalone value.
};

struct BatchResult
{
	std::vector<RunRecord> records;  ///< In run-index order.
	BatchSummary summary;
};

/// Evaluates runs 0..runs-1; `workers` <= 1 runs serially.
BatchResult run_batch(const GeneratorConfig& config, int runs, int workers = 1, const EvaluateOptions& options = {});

BatchSummary summarize(const std::vector<RunRecord>& records);

void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_csv(std::istream& in);

}  // namespace fedform

#endif  // FEDFORM_WORKBENCH_HPP
