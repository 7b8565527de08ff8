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

#include <fedform/lp.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace fedform::lp {

namespace {

/// Dense tableau over structural columns followed by one artificial per row.
class Tableau
{
public:
	Tableau(const LinearProgram& prog, const std::vector<double>& lo, const std::vector<double>& hi,
	        const Options& opt)
	    : opt_(opt), m_(prog.num_rows()), n_(prog.num_cols()), width_(n_ + m_)
	{
		lower_.assign(width_, 0.0);
		upper_.assign(width_, 0.0);
		for (int j = 0; j < n_; ++j)
		{
			lower_[j] = lo[j];
			upper_[j] = hi[j];
			if (!std::isfinite(lower_[j]))
			{
				throw std::invalid_argument("lp: lower bounds must be finite");
			}
		}
		for (int i = 0; i < m_; ++i)
		{
			upper_[n_ + i] = infinity;
		}

		at_upper_.assign(width_, false);
		basic_row_.assign(width_, -1);
		basis_.assign(m_, 0);
		beta_.assign(m_, 0.0);
		rows_.assign(static_cast<std::size_t>(m_) * width_, 0.0);

		for (int i = 0; i < m_; ++i)
		{
			double r = prog.rows[i].rhs;
			for (const auto& [j, a] : prog.rows[i].coefs)
			{
				r -= a * lower_[j];
			}
			const double sign = r < 0 ? -1.0 : 1.0;
			double* row = &rows_[static_cast<std::size_t>(i) * width_];
			for (const auto& [j, a] : prog.rows[i].coefs)
			{
				row[j] += sign * a;
			}
			row[n_ + i] = 1.0;
			basis_[i] = n_ + i;
			basic_row_[n_ + i] = i;
			beta_[i] = std::abs(r);
		}
	}

	Status run_phase(const std::vector<double>& cost, bool phase_one, int& iterations)
	{
		cost_ = cost;
		reduced_.assign(width_, 0.0);
		for (int j = 0; j < width_; ++j)
		{
			if (basic_row_[j] >= 0)
			{
				continue;
			}
			double d = cost_[j];
			for (int i = 0; i < m_; ++i)
			{
				d -= cost_[basis_[i]] * at(i, j);
			}
			reduced_[j] = d;
		}

		int degenerate_run = 0;
		while (true)
		{
			if (iterations >= opt_.max_iterations)
			{
				return Status::iteration_limit;
			}
			const bool bland = degenerate_run > 50;
			int enter = -1;
			double best = 0;
			for (int j = 0; j < width_; ++j)
			{
				if (basic_row_[j] >= 0 || upper_[j] - lower_[j] <= 0)
				{
					continue;
				}
				if (!phase_one && j >= n_)
				{
					continue;
				}
				const double d = reduced_[j];
				const double gain = at_upper_[j] ? d : -d;
				if (gain > opt_.optimality_tol)
				{
					if (bland)
					{
						enter = j;
						break;
					}
					if (gain > best)
					{
						best = gain;
						enter = j;
					}
				}
			}
			if (enter < 0)
			{
				return Status::optimal;
			}
			++iterations;

			const double dir = at_upper_[enter] ? -1.0 : 1.0;
			double step = upper_[enter] - lower_[enter];
			int leave_row = -1;
			bool leave_to_upper = false;
			double leave_alpha = 0;
			for (int i = 0; i < m_; ++i)
			{
				const double alpha = dir * at(i, enter);
				const int b = basis_[i];
				double limit;
				bool to_upper;
				if (alpha > opt_.pivot_tol)
				{
					limit = (beta_[i] - lower_[b]) / alpha;
					to_upper = false;
				}
				else if (alpha < -opt_.pivot_tol && std::isfinite(upper_[b]))
				{
					limit = (upper_[b] - beta_[i]) / -alpha;
					to_upper = true;
				}
				else
				{
					continue;
				}
				limit = std::max(limit, 0.0);
				bool take = false;
				if (leave_row < 0)
				{
					take = limit < step;
				}
				else if (limit < step - 1e-12)
				{
					take = true;
				}
				else if (limit <= step + 1e-12)
				{
					take = bland ? b < basis_[leave_row] : std::abs(alpha) > std::abs(leave_alpha);
				}
				if (take)
				{
					step = limit;
					leave_row = i;
					leave_to_upper = to_upper;
					leave_alpha = alpha;
				}
			}
			if (!std::isfinite(step))
			{
				return Status::unbounded;
			}
			degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;

			for (int i = 0; i < m_; ++i)
			{
				beta_[i] -= dir * step * at(i, enter);
			}
			if (leave_row < 0)
			{
				at_upper_[enter] = !at_upper_[enter];
				continue;
			}
			const int leaving = basis_[leave_row];
			beta_[leave_row] = (at_upper_[enter] ? upper_[enter] : lower_[enter]) + dir * step;
			pivot(leave_row, enter);
			at_upper_[leaving] = leave_to_upper;
			at_upper_[enter] = false;
		}
	}

	double value(int j) const
	{
		if (basic_row_[j] >= 0)
		{
			return beta_[basic_row_[j]];
		}
		return at_upper_[j] ? upper_[j] : lower_[j];
	}

	double artificial_sum() const
	{
		double s = 0;
		for (int i = 0; i < m_; ++i)
		{
			s += value(n_ + i);
		}
		return s;
	}

	/// Freezes artificials at zero and pivots basic ones out where possible.
	void retire_artificials()
	{
		for (int i = 0; i < m_; ++i)
		{
			upper_[n_ + i] = 0.0;
		}
		for (int i = 0; i < m_; ++i)
		{
			if (basis_[i] < n_)
			{
				continue;
			}
			int best = -1;
			double best_abs = 1e-7;
			for (int j = 0; j < n_; ++j)
			{
				if (basic_row_[j] < 0 && std::abs(at(i, j)) > best_abs)
				{
					best_abs = std::abs(at(i, j));
					best = j;
				}
			}
			if (best >= 0)
			{
				const int leaving = basis_[i];
				const double entering_value = value(best);
				beta_[i] = entering_value;
				pivot(i, best);
				at_upper_[leaving] = false;
			}
		}
	}

	int width() const { return width_; }
	int structural() const { return n_; }

private:
	double& at(int i, int j) { return rows_[static_cast<std::size_t>(i) * width_ + j]; }
	double at(int i, int j) const { return rows_[static_cast<std::size_t>(i) * width_ + j]; }

	void pivot(int r, int enter)
	{
		const int leaving = basis_[r];
		double* prow = &rows_[static_cast<std::size_t>(r) * width_];
		const double inv = 1.0 / prow[enter];
		for (int j = 0; j < width_; ++j)
		{
			prow[j] *= inv;
		}
		prow[enter] = 1.0;
		for (int i = 0; i < m_; ++i)
		{
			if (i == r)
			{
				continue;
			}
			double* row = &rows_[static_cast<std::size_t>(i) * width_];
			const double f = row[enter];
			if (f == 0.0)
			{
				continue;
			}
			for (int j = 0; j < width_; ++j)
			{
				row[j] -= f * prow[j];
			}
			row[enter] = 0.0;
		}
		const double f = reduced_[enter];
		if (f != 0.0)
		{
			for (int j = 0; j < width_; ++j)
			{
				reduced_[j] -= f * prow[j];
			}
		}
		reduced_[enter] = 0.0;
		basis_[r] = enter;
		basic_row_[enter] = r;
		basic_row_[leaving] = -1;
	}

	Options opt_;
	int m_;
	int n_;
	int width_;
	std::vector<double> rows_;
	std::vector<double> beta_;
	std::vector<double> lower_;
	std::vector<double> upper_;
	std::vector<bool> at_upper_;
	std::vector<int> basis_;
	std::vector<int> basic_row_;
	std::vector<double> cost_;
	std::vector<double> reduced_;
};

}  // namespace

Solution solve(const LinearProgram& program, const Options& options)
{
	return solve(program, program.lower, program.upper, options);
}

Solution solve(const LinearProgram& program, const std::vector<double>& lower, const std::vector<double>& upper,
               const Options& options)
{
	Solution sol;
	const int n = program.num_cols();
	for (int j = 0; j < n; ++j)
	{
		if (lower[j] > upper[j] + options.feasibility_tol)
		{
			sol.status = Status::infeasible;
			return sol;
		}
	}

	Tableau tab(program, lower, upper, options);
	std::vector<double> cost(tab.width(), 0.0);
	for (int j = n; j < tab.width(); ++j)
	{
		cost[j] = 1.0;
	}
	Status st = tab.run_phase(cost, true, sol.iterations);
	if (st != Status::optimal)
	{
		sol.status = st == Status::unbounded ? Status::infeasible : st;
		return sol;
	}
	if (tab.artificial_sum() > options.feasibility_tol * std::max(1, program.num_rows()))
	{
		sol.status = Status::infeasible;
		return sol;
	}
	tab.retire_artificials();

	std::fill(cost.begin(), cost.end(), 0.0);
	std::copy(program.cost.begin(), program.cost.end(), cost.begin());
	st = tab.run_phase(cost, false, sol.iterations);
	sol.status = st;
	if (st != Status::optimal)
	{
		return sol;
	}
	sol.x.resize(n);
	sol.objective = 0;
	for (int j = 0; j < n; ++j)
	{
		sol.x[j] = std::clamp(tab.value(j), lower[j], upper[j]);
		sol.objective += program.cost[j] * sol.x[j];
	}
	return sol;
}

}  // namespace fedform::lp
