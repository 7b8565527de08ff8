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

#ifndef FEDFORM_SCENARIO_IO_HPP
#define FEDFORM_SCENARIO_IO_HPP

#include <fedform/domain.hpp>

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace fedform {

/**
 * \brief Reads a scenario document.
 *
 * Host and VM entries carry a `count`; they expand to individuals numbered
 * consecutively (hosts and VMs separately, starting at 1) in document order.
 * Throws std::invalid_argument on malformed input.
 */
Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

/// Inverse of scenario_from_json; runs of identical entries are compressed.
nlohmann::json scenario_to_json(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace fedform

#endif  // FEDFORM_SCENARIO_IO_HPP
