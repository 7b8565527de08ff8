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
 * \file fedform/fixtures.hpp
 *
 * \brief Built-in scenarios with published reference results.
 *
 * All fixtures share the three host classes and three VM classes of the
 * published setup, with the explicit per-class share table. Energy is priced
 * at 0.4 $/kWh.
 */

#ifndef FEDFORM_FIXTURES_HPP
#define FEDFORM_FIXTURES_HPP

#include <fedform/domain.hpp>

#include <array>
#include <string>
#include <vector>

namespace fedform::fixtures {

inline constexpr double energy_price = 0.0004;  ///< $/Wh

/// Host and VM classes, explicit shares, no migration, 12 h period.
Scenario base();

/// Host counts per class (class 1, 2, 3) of the four experiment providers.
inline constexpr std::array<std::array<int, 3>, 4> experiment_hosts{{{40, 0, 0}, {0, 40, 0}, {0, 0, 40}, {15, 15, 10}}};

/// Appends a provider with `hosts[g]` hosts and `vms[q]` VMs per class.
/// Hosts start powered on; VMs have no current host.
Provider& add_provider(Scenario& scenario, const std::vector<int>& hosts, const std::vector<int>& vms,
                       double price = energy_price);

/// Three providers with 30 hosts of one class each and 10 class-3 VMs each.
Scenario scenario1();

/// 42 class-2 hosts and 65 class-2 VMs, then twice 41 class-3 hosts and 61 class-2 VMs.
Scenario scenario2();

/// Three-provider game with an empty core.
Scenario appendix();

/**
 * \brief Four-provider experiment instance with a fixed workload.
 *
 * Uses the full cost model at the means of the sampling distributions: all
 * hosts on, switch time 300 us, per-class mean migration times, every VM
 * currently on one of its owner's hosts.
 */
Scenario case_study();

/// Fixture by name: scenario1, scenario2, appendix, casestudy.
Scenario by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace fedform::fixtures

#endif  // FEDFORM_FIXTURES_HPP
