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

// Aggregated formulation. Hosts are grouped by (class, owner, energy price)
// and VMs by (class, migration-rate profile). For every host group k
// and packing pattern p (a vector of per-VM-class counts that fits one host)
// an integer z[k,p] counts the hosts of k running p. Continuous flows x[k,m]
// say how many VMs of group m land on group k; for integral z the flow part is
// a transportation problem and therefore has an integral optimum, so only
// z (and the aggregates y = hosts on, s = slots per class) are branched on.
// Dynamic power is linear in the VMs placed, so it is charged on the flows and
// a pattern only buys capacity. Slots may stay empty, which makes every
// non-maximal pattern dominated by a maximal one; only maximal patterns are
// generated.

#include <fedform/lp.hpp>
#include <fedform/placement.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <queue>
#include <tuple>

namespace fedform {

namespace {

constexpr double capacity_tol = 1e-9;
constexpr double integrality_tol = 1e-6;

struct HostGroup
{
	std::size_t cls = 0;
	std::vector<std::size_t> hosts;
	double idle_cost = 0;     ///< Sum over the group of each host's cost when left without VMs.
	std::vector<std::pair<double, int>> tiers;  ///< (extra cost of powering a host, host count), ascending.
	double dyn_per_util = 0;  ///< E (C_max - C_min).
};

struct VmGroup
{
	std::size_t cls = 0;
	std::vector<std::size_t> vms;
	std::vector<double> rate;  ///< Migration rate to each host group.
};

struct Model
{
	std::vector<HostGroup> host_groups;
	std::vector<VmGroup> vm_groups;
	std::vector<int> demand_by_class;
	std::vector<std::vector<std::vector<int>>> patterns;  ///< Per host class.

	lp::LinearProgram program;
	double constant = 0;
	std::vector<int> y_col;                          ///< Per host group.
	std::vector<std::vector<int>> tier_col;          ///< Powered hosts per cost tier [k][t]
	std::vector<std::vector<int>> z_col;             ///< [k][p]
	std::vector<std::vector<int>> s_col;             ///< [k][q], -1 if absent
	std::vector<std::vector<int>> u_col;             ///< Unused slots [k][q], -1 if absent
	std::vector<std::vector<int>> x_col;             ///< [k][m], -1 if absent
	std::vector<int> integer_cols;                   ///< In branching priority order.
};

void enumerate_patterns(const PlacementProblem& prob, std::size_t g, const std::vector<int>& demand,
                        std::vector<std::vector<int>>& out)
{
	const std::size_t nq = demand.size();
	std::vector<int> cur(nq, 0);
	auto maximal = [&](double cpu, double ram) {
		for (std::size_t q = 0; q < nq; ++q)
		{
			if (cur[q] < demand[q] && cpu + prob.cpu_share[q][g] <= 1.0 + capacity_tol
			    && ram + prob.ram_share[q][g] <= 1.0 + capacity_tol)
			{
				return false;
			}
		}
		return true;
	};
	auto rec = [&](auto&& self, std::size_t q, double cpu, double ram) -> void {
		if (q == nq)
		{
			if (std::any_of(cur.begin(), cur.end(), [](int c) { return c > 0; }) && maximal(cpu, ram))
			{
				out.push_back(cur);
			}
			return;
		}
		const double a = prob.cpu_share[q][g];
		const double m = prob.ram_share[q][g];
		for (int c = 0; c <= demand[q]; ++c)
		{
			const double nc = cpu + c * a;
			const double nr = ram + c * m;
			if (nc > 1.0 + capacity_tol || nr > 1.0 + capacity_tol)
			{
				break;
			}
			cur[q] = c;
			self(self, q + 1, nc, nr);
		}
		cur[q] = 0;
	};
	rec(rec, 0, 0.0, 0.0);
}

Model build_model(const PlacementProblem& prob)
{
	Model md;
	const std::size_t nq = prob.cpu_share.size();
	const std::size_t ng = prob.host_classes.size();

	// Hosts of one class and owner differ only in the cost of being powered
	// (initial state and switch energy). Powering a cheaper host of the group
	// instead of a dearer one never hurts, so each group carries a convex
	// piecewise-linear cost in its number of powered hosts and hosts are kept
	// in ascending order of that cost.
	{
		using Key = std::tuple<std::size_t, ProviderId, double>;
		std::map<Key, std::size_t> index;
		std::vector<std::map<double, int>> tiers;
		std::vector<std::vector<std::pair<double, std::size_t>>> members;
		for (std::size_t i = 0; i < prob.num_hosts(); ++i)
		{
			const auto& h = prob.hosts[i];
			const Key key{h.cls, h.owner, h.energy_price};
			auto [it, inserted] = index.emplace(key, 0);
			if (inserted)
			{
				it->second = md.host_groups.size();
				HostGroup hg;
				hg.cls = h.cls;
				const auto& hc = prob.host_classes[h.cls];
				hg.dyn_per_util = h.energy_price * (hc.c_max - hc.c_min);
				md.host_groups.push_back(hg);
				tiers.emplace_back();
				members.emplace_back();
			}
			const std::size_t k = it->second;
			const double idle = std::min(prob.on_cost(i), prob.off_cost(i));
			const double extra = prob.on_cost(i) - idle;
			md.host_groups[k].idle_cost += idle;
			++tiers[k][extra];
			members[k].emplace_back(extra, i);
		}
		for (std::size_t k = 0; k < md.host_groups.size(); ++k)
		{
			std::stable_sort(members[k].begin(), members[k].end(),
			                 [](const auto& a, const auto& b) { return a.first < b.first; });
			for (const auto& [extra, i] : members[k])
			{
				md.host_groups[k].hosts.push_back(i);
			}
			md.host_groups[k].tiers.assign(tiers[k].begin(), tiers[k].end());
		}
	}
	const std::size_t nk = md.host_groups.size();

	{
		std::map<std::pair<std::size_t, std::vector<double>>, std::size_t> index;
		for (std::size_t j = 0; j < prob.num_vms(); ++j)
		{
			std::vector<double> rate(nk);
			for (std::size_t k = 0; k < nk; ++k)
			{
				const auto& hs = md.host_groups[k].hosts;
				rate[k] = prob.migration_rate(j, hs.front());
				for (std::size_t i : hs)
				{
					if (prob.migration_rate(j, i) != rate[k])
					{
						throw std::logic_error("solve_symmetric: migration rate not uniform within a host group");
					}
				}
			}
			auto key = std::make_pair(prob.vms[j].cls, rate);
			auto [it, inserted] = index.emplace(key, 0);
			if (inserted)
			{
				it->second = md.vm_groups.size();
				md.vm_groups.push_back(VmGroup{prob.vms[j].cls, {}, rate});
			}
			md.vm_groups[it->second].vms.push_back(j);
		}
	}
	const std::size_t nm = md.vm_groups.size();

	md.demand_by_class.assign(nq, 0);
	for (const auto& vg : md.vm_groups)
	{
		md.demand_by_class[vg.cls] += static_cast<int>(vg.vms.size());
	}
	md.patterns.assign(ng, {});
	std::vector<bool> class_used(ng, false);
	for (const auto& hg : md.host_groups)
	{
		class_used[hg.cls] = true;
	}
	for (std::size_t g = 0; g < ng; ++g)
	{
		if (class_used[g])
		{
			enumerate_patterns(prob, g, md.demand_by_class, md.patterns[g]);
		}
	}

	auto& lp = md.program;
	md.y_col.resize(nk);
	md.tier_col.resize(nk);
	md.z_col.resize(nk);
	md.s_col.assign(nk, std::vector<int>(nq, -1));
	md.u_col.assign(nk, std::vector<int>(nq, -1));
	md.x_col.assign(nk, std::vector<int>(nm, -1));
	for (std::size_t k = 0; k < nk; ++k)
	{
		const auto& hg = md.host_groups[k];
		const double count = static_cast<double>(hg.hosts.size());
		md.constant += hg.idle_cost;
		md.y_col[k] = lp.add_column(0.0, 0.0, count);
		for (const auto& [extra, n] : hg.tiers)
		{
			md.tier_col[k].push_back(lp.add_column(extra, 0.0, n));
		}
		std::vector<int> max_per_class(nq, 0);
		for (const auto& p : md.patterns[hg.cls])
		{
			for (std::size_t q = 0; q < nq; ++q)
			{
				max_per_class[q] = std::max(max_per_class[q], p[q]);
			}
			md.z_col[k].push_back(lp.add_column(0.0, 0.0, count));
		}
		for (std::size_t q = 0; q < nq; ++q)
		{
			if (max_per_class[q] > 0)
			{
				md.s_col[k][q] = lp.add_column(0.0, 0.0, count * max_per_class[q]);
				md.u_col[k][q] = lp.add_column(0.0, 0.0, count * max_per_class[q]);
			}
		}
		for (std::size_t m = 0; m < nm; ++m)
		{
			const auto& vg = md.vm_groups[m];
			if (md.s_col[k][vg.cls] >= 0)
			{
				const double dyn = hg.dyn_per_util * prob.cpu_share[vg.cls][hg.cls];
				md.x_col[k][m] = lp.add_column(vg.rate[k] + dyn, 0.0, static_cast<double>(vg.vms.size()));
			}
		}
	}

	for (std::size_t k = 0; k < nk; ++k)
	{
		const auto& pats = md.patterns[md.host_groups[k].cls];
		std::vector<std::pair<int, double>> row{{md.y_col[k], 1.0}};
		for (std::size_t p = 0; p < pats.size(); ++p)
		{
			row.emplace_back(md.z_col[k][p], -1.0);
		}
		lp.add_row(std::move(row), 0.0);
		std::vector<std::pair<int, double>> split{{md.y_col[k], 1.0}};
		for (int c : md.tier_col[k])
		{
			split.emplace_back(c, -1.0);
		}
		lp.add_row(std::move(split), 0.0);
		for (std::size_t q = 0; q < nq; ++q)
		{
			if (md.s_col[k][q] < 0)
			{
				continue;
			}
			std::vector<std::pair<int, double>> link{{md.s_col[k][q], 1.0}};
			for (std::size_t p = 0; p < pats.size(); ++p)
			{
				if (pats[p][q] > 0)
				{
					link.emplace_back(md.z_col[k][p], -static_cast<double>(pats[p][q]));
				}
			}
			lp.add_row(std::move(link), 0.0);
			std::vector<std::pair<int, double>> flow{{md.s_col[k][q], -1.0}, {md.u_col[k][q], 1.0}};
			for (std::size_t m = 0; m < nm; ++m)
			{
				if (md.vm_groups[m].cls == q && md.x_col[k][m] >= 0)
				{
					flow.emplace_back(md.x_col[k][m], 1.0);
				}
			}
			lp.add_row(std::move(flow), 0.0);
		}
	}
	for (std::size_t m = 0; m < nm; ++m)
	{
		std::vector<std::pair<int, double>> row;
		for (std::size_t k = 0; k < nk; ++k)
		{
			if (md.x_col[k][m] >= 0)
			{
				row.emplace_back(md.x_col[k][m], 1.0);
			}
		}
		lp.add_row(std::move(row), static_cast<double>(md.vm_groups[m].vms.size()));
	}

	for (std::size_t k = 0; k < nk; ++k)
	{
		md.integer_cols.push_back(md.y_col[k]);
	}
	for (std::size_t k = 0; k < nk; ++k)
	{
		for (int c : md.s_col[k])
		{
			if (c >= 0)
			{
				md.integer_cols.push_back(c);
			}
		}
	}
	for (std::size_t k = 0; k < nk; ++k)
	{
		for (int c : md.z_col[k])
		{
			md.integer_cols.push_back(c);
		}
	}
	return md;
}

/// Integral min-cost transportation by successive shortest paths.
std::vector<std::vector<int>> transport(const std::vector<int>& supply, const std::vector<int>& demand,
                                        const std::vector<std::vector<double>>& cost,
                                        const std::vector<std::vector<bool>>& allowed)
{
	const int ns = static_cast<int>(supply.size());
	const int nd = static_cast<int>(demand.size());
	std::vector<std::vector<int>> flow(ns, std::vector<int>(nd, 0));
	std::vector<int> sup = supply;
	std::vector<int> dem = demand;
	const int nodes = ns + nd;
	while (true)
	{
		// Bellman-Ford from all sources with spare supply over the residual graph.
		std::vector<double> dist(nodes, std::numeric_limits<double>::infinity());
		std::vector<int> prev(nodes, -1);
		for (int s = 0; s < ns; ++s)
		{
			if (sup[s] > 0)
			{
				dist[s] = 0;
			}
		}
		for (int iter = 0; iter < nodes; ++iter)
		{
			bool changed = false;
			for (int s = 0; s < ns; ++s)
			{
				for (int d = 0; d < nd; ++d)
				{
					if (!allowed[s][d])
					{
						continue;
					}
					if (dist[s] + cost[s][d] < dist[ns + d] - 1e-15)
					{
						dist[ns + d] = dist[s] + cost[s][d];
						prev[ns + d] = s;
						changed = true;
					}
					if (flow[s][d] > 0 && dist[ns + d] - cost[s][d] < dist[s] - 1e-15)
					{
						dist[s] = dist[ns + d] - cost[s][d];
						prev[s] = ns + d;
						changed = true;
					}
				}
			}
			if (!changed)
			{
				break;
			}
		}
		int target = -1;
		for (int d = 0; d < nd; ++d)
		{
			if (dem[d] > 0 && std::isfinite(dist[ns + d]) && (target < 0 || dist[ns + d] < dist[target] - 1e-15))
			{
				target = ns + d;
			}
		}
		if (target < 0)
		{
			break;
		}
		int amount = dem[target - ns];
		int v = target;
		while (prev[v] >= 0)
		{
			const int u = prev[v];
			if (v >= ns)
			{
				v = u;
			}
			else
			{
				amount = std::min(amount, flow[v][u - ns]);
				v = u;
			}
		}
		amount = std::min(amount, sup[v]);
		const int origin = v;
		v = target;
		while (prev[v] >= 0)
		{
			const int u = prev[v];
			if (v >= ns)
			{
				flow[u][v - ns] += amount;
			}
			else
			{
				flow[v][u - ns] -= amount;
			}
			v = u;
		}
		sup[origin] -= amount;
		dem[target - ns] -= amount;
	}
	for (int d = 0; d < nd; ++d)
	{
		if (dem[d] != 0)
		{
			throw std::logic_error("solve_symmetric: transportation problem left demand unmet");
		}
	}
	return flow;
}

/// Turns integral pattern counts into an individual-level allocation.
Allocation expand(const PlacementProblem& prob, const Model& md, const std::vector<double>& x)
{
	const std::size_t nk = md.host_groups.size();
	const std::size_t nm = md.vm_groups.size();
	const std::size_t nq = md.demand_by_class.size();

	// Per host group: (host, pattern) in host order, patterns by index.
	std::vector<std::vector<std::pair<std::size_t, std::size_t>>> used(nk);
	std::vector<std::vector<int>> slots(nk, std::vector<int>(nq, 0));
	for (std::size_t k = 0; k < nk; ++k)
	{
		const auto& hg = md.host_groups[k];
		const auto& pats = md.patterns[hg.cls];
		std::size_t next = 0;
		for (std::size_t p = 0; p < pats.size(); ++p)
		{
			const int mult = static_cast<int>(std::lround(x[md.z_col[k][p]]));
			for (int r = 0; r < mult; ++r)
			{
				if (next >= hg.hosts.size())
				{
					throw std::logic_error("solve_symmetric: pattern multiplicities exceed host count");
				}
				used[k].emplace_back(hg.hosts[next++], p);
				for (std::size_t q = 0; q < nq; ++q)
				{
					slots[k][q] += pats[p][q];
				}
			}
		}
	}

	std::vector<std::size_t> host_of(prob.num_vms(), prob.num_hosts());
	for (std::size_t q = 0; q < nq; ++q)
	{
		std::vector<std::size_t> groups;
		for (std::size_t m = 0; m < nm; ++m)
		{
			if (md.vm_groups[m].cls == q)
			{
				groups.push_back(m);
			}
		}
		if (groups.empty())
		{
			continue;
		}
		std::vector<int> supply(nk);
		std::vector<int> demand(groups.size());
		std::vector<std::vector<double>> cost(nk, std::vector<double>(groups.size(), 0.0));
		std::vector<std::vector<bool>> allowed(nk, std::vector<bool>(groups.size(), false));
		for (std::size_t k = 0; k < nk; ++k)
		{
			supply[k] = slots[k][q];
			for (std::size_t t = 0; t < groups.size(); ++t)
			{
				const auto& hg = md.host_groups[k];
				cost[k][t] = md.vm_groups[groups[t]].rate[k] + hg.dyn_per_util * prob.cpu_share[q][hg.cls];
				allowed[k][t] = md.x_col[k][groups[t]] >= 0;
			}
		}
		for (std::size_t t = 0; t < groups.size(); ++t)
		{
			demand[t] = static_cast<int>(md.vm_groups[groups[t]].vms.size());
		}
		const auto flow = transport(supply, demand, cost, allowed);

		std::vector<std::size_t> taken(groups.size(), 0);
		for (std::size_t k = 0; k < nk; ++k)
		{
			const auto& pats = md.patterns[md.host_groups[k].cls];
			std::size_t t = 0;
			int left_in_group = groups.empty() ? 0 : flow[k][0];
			for (const auto& [host, p] : used[k])
			{
				for (int c = 0; c < pats[p][q]; ++c)
				{
					while (left_in_group == 0 && t + 1 < groups.size())
					{
						++t;
						left_in_group = flow[k][t];
					}
					if (left_in_group == 0)
					{
						break;
					}
					const auto& vg = md.vm_groups[groups[t]];
					host_of[vg.vms[taken[t]++]] = host;
					--left_in_group;
				}
			}
		}
	}
	return make_allocation(prob, std::move(host_of));
}

struct Node
{
	double bound;
	long id;
	std::vector<double> lower;
	std::vector<double> upper;
	std::vector<double> x;
};

struct NodeOrder
{
	bool operator()(const Node& a, const Node& b) const
	{
		if (a.bound != b.bound)
		{
			return a.bound > b.bound;
		}
		return a.id > b.id;
	}
};

int pick_branch(const Model& md, const std::vector<double>& x)
{
	// Aggregates first (hosts on, then slots), then pattern counts; within a
	// tier the value whose fractional part is closest to one half.
	const std::size_t ny = md.host_groups.size();
	std::size_t ns = 0;
	for (const auto& row : md.s_col)
	{
		ns += std::count_if(row.begin(), row.end(), [](int c) { return c >= 0; });
	}
	const std::size_t tiers[3] = {ny, ny + ns, md.integer_cols.size()};
	std::size_t begin = 0;
	for (std::size_t end : tiers)
	{
		int best = -1;
		double best_dist = 1.0;
		for (std::size_t t = begin; t < end; ++t)
		{
			const int c = md.integer_cols[t];
			const double frac = x[c] - std::floor(x[c]);
			if (frac <= integrality_tol || frac >= 1.0 - integrality_tol)
			{
				continue;
			}
			const double dist = std::abs(frac - 0.5);
			if (dist < best_dist - 1e-12)
			{
				best_dist = dist;
				best = c;
			}
		}
		if (best >= 0)
		{
			return best;
		}
		begin = end;
	}
	return -1;
}

}  // namespace

SolveReport solve_symmetric(const PlacementProblem& problem, const SolverOptions& options)
{
	const auto t0 = std::chrono::steady_clock::now();
	auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
	SolveReport rep;
	if (problem.infeasibility)
	{
		rep.status = SolveStatus::infeasible;
		rep.message = *problem.infeasibility;
		return rep;
	}
	if (problem.num_vms() == 0)
	{
		rep.allocation = make_allocation(problem, {});
		rep.objective = rep.allocation->energy_cost_rate;
		rep.lower_bound = rep.objective;
		rep.status = SolveStatus::optimal;
		rep.wall_seconds = elapsed();
		return rep;
	}

	const Model md = build_model(problem);
	lp::Options lp_opt;
	lp_opt.feasibility_tol = options.feas_tol;

	double incumbent = std::numeric_limits<double>::infinity();
	try
	{
		Allocation a = heuristic_ffd(problem);
		incumbent = a.energy_cost_rate;
		rep.allocation = std::move(a);
	}
	catch (const infeasible_placement_error&)
	{
	}

	std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
	long next_id = 0;
	auto evaluate = [&](std::vector<double> lower, std::vector<double> upper) -> bool {
		const auto sol = lp::solve(md.program, lower, upper, lp_opt);
		if (sol.status != lp::Status::optimal)
		{
			return false;
		}
		const double bound = sol.objective + md.constant;
		if (bound >= incumbent - options.gap_tol)
		{
			return false;
		}
		open.push(Node{bound, next_id++, std::move(lower), std::move(upper), sol.x});
		return true;
	};

	evaluate(md.program.lower, md.program.upper);
	bool root_feasible = !open.empty() || rep.allocation.has_value();
	bool timed_out = false;
	while (!open.empty())
	{
		if (elapsed() > options.time_limit_s)
		{
			timed_out = true;
			break;
		}
		Node node = open.top();
		open.pop();
		++rep.nodes_explored;
		if (node.bound >= incumbent - options.gap_tol)
		{
			continue;
		}
		const int col = pick_branch(md, node.x);
		if (col < 0)
		{
			Allocation a = expand(problem, md, node.x);
			if (a.energy_cost_rate < incumbent)
			{
				incumbent = a.energy_cost_rate;
				rep.allocation = std::move(a);
			}
			continue;
		}
		const double v = node.x[col];
		auto down_upper = node.upper;
		down_upper[col] = std::floor(v);
		auto up_lower = node.lower;
		up_lower[col] = std::ceil(v);
		evaluate(node.lower, std::move(down_upper));
		evaluate(std::move(up_lower), node.upper);
	}

	rep.wall_seconds = elapsed();
	if (!rep.allocation)
	{
		rep.status = timed_out ? SolveStatus::time_limited : SolveStatus::infeasible;
		rep.message = timed_out ? "time limit reached without a feasible allocation"
		                        : (root_feasible ? "no integral allocation exists" : "no feasible allocation exists");
		return rep;
	}
	rep.objective = rep.allocation->energy_cost_rate;
	if (timed_out)
	{
		rep.status = SolveStatus::time_limited;
		rep.lower_bound = open.empty() ? rep.objective : std::min(rep.objective, open.top().bound);
		rep.message = "time limit reached";
	}
	else
	{
		rep.status = SolveStatus::optimal;
		rep.lower_bound = rep.objective;
	}
	return rep;
}

}  // namespace fedform
