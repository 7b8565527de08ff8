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
 * \file fedform/reproduce.hpp
 *
 * \brief Golden reproduction of the published tables from built-in fixtures.
 */

#ifndef FEDFORM_REPRODUCE_HPP
#define FEDFORM_REPRODUCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fedform {

/// One compared table cell. Boolean facts use expected 1 and tolerance 0.
struct GoldenCheck
{
	std::string cell;
	double expected = 0;
	double actual = 0;
	double tolerance = 0;

	bool pass() const;
};

struct ReproduceReport
{
	std::string target;
	std::vector<GoldenCheck> checks;
	double wall_seconds = 0;

	int failures() const;
	bool passed() const { return failures() == 0; }
	const GoldenCheck* find(const std::string& cell) const;
};

std::vector<std::string> reproduce_targets();

/// Runs one target (scenario1, scenario2, appendix, casestudy). Unknown
/// names raise invalid_argument.
ReproduceReport reproduce(const std::string& target, int workers = 1);

void print_report(std::ostream& out, const ReproduceReport& report, bool failures_only = false);

}  // namespace fedform

#endif  // FEDFORM_REPRODUCE_HPP
