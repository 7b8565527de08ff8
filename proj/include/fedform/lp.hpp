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
 * \file fedform/lp.hpp
 *
 * \brief Dense bounded-variable primal simplex in double precision.
 *
 * Solves  min c'x  s.t.  A x = b,  l <= x <= u  with finite lower bounds.
 * Used for the relaxations inside the placement branch-and-bound; problems
 * there have at most a few hundred rows.
 */

#ifndef FEDFORM_LP_HPP
#define FEDFORM_LP_HPP

#include <limits>
#include <utility>
#include <vector>

namespace fedform::lp {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct LinearProgram
{
	struct Row
	{
		std::vector<std::pair<int, double>> coefs;
		double rhs = 0;
	};

	std::vector<double> cost;
	std::vector<double> lower;
	std::vector<double> upper;
	std::vector<Row> rows;

	int add_column(double c, double lo, double hi)
	{
		cost.push_back(c);
		lower.push_back(lo);
		upper.push_back(hi);
		return static_cast<int>(cost.size()) - 1;
	}

	int add_row(std::vector<std::pair<int, double>> coefs, double rhs)
	{
		rows.push_back(Row{std::move(coefs), rhs});
		return static_cast<int>(rows.size()) - 1;
	}

	int num_cols() const { return static_cast<int>(cost.size()); }
	int num_rows() const { return static_cast<int>(rows.size()); }
};

enum class Status
{
	optimal,
	infeasible,
	unbounded,
	iteration_limit
};

struct Solution
{
	Status status = Status::infeasible;
	double objective = infinity;
	std::vector<double> x;
	int iterations = 0;
};

struct Options
{
	double feasibility_tol = 1e-7;
	double optimality_tol = 1e-9;
	double pivot_tol = 1e-9;
	int max_iterations = 200000;
};

/// Solves the program with the bounds stored in it.
Solution solve(const LinearProgram& program, const Options& options = {});

/// Solves the program with overriding column bounds.
Solution solve(const LinearProgram& program, const std::vector<double>& lower, const std::vector<double>& upper,
               const Options& options = {});

}  // namespace fedform::lp

#endif  // FEDFORM_LP_HPP
