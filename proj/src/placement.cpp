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

#include <fedform/placement.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace fedform {

namespace {

constexpr double capacity_tol = 1e-9;

}  // namespace

bool PlacementProblem::fits(std::size_t vm, std::size_t host) const
{
	return cpu(vm, host) <= 1.0 + capacity_tol && ram(vm, host) <= 1.0 + capacity_tol;
}

double PlacementProblem::on_cost(std::size_t host) const
{
	const auto& h = hosts[host];
	return h.energy_price * (host_classes[h.cls].c_min + h.switch_on_w);
}

double PlacementProblem::off_cost(std::size_t host) const
{
	const auto& h = hosts[host];
	return h.energy_price * h.switch_off_w;
}

double PlacementProblem::dynamic_cost(std::size_t vm, std::size_t host) const
{
	const auto& h = hosts[host];
	const auto& hc = host_classes[h.cls];
	return h.energy_price * cpu(vm, host) * (hc.c_max - hc.c_min);
}

void PlacementProblem::refresh_feasibility()
{
	infeasibility.reset();
	for (std::size_t j = 0; j < vms.size(); ++j)
	{
		bool any = false;
		for (std::size_t i = 0; i < hosts.size() && !any; ++i)
		{
			any = fits(j, i);
		}
		if (!any)
		{
			infeasibility = "VM " + std::to_string(vms[j].id) + " fits no host of the coalition";
			return;
		}
	}
}

PlacementProblem build_problem(const Scenario& scenario, const Coalition& coalition)
{
	if (coalition.empty())
	{
		throw std::domain_error("build_problem: empty coalition");
	}
	PlacementProblem prob;
	prob.host_classes = scenario.host_classes;
	prob.planning_period_hours = scenario.planning_period_hours;
	const double period = scenario.planning_period_hours;

	const std::size_t nq = scenario.vm_classes.size();
	const std::size_t ng = scenario.host_classes.size();
	prob.cpu_share.assign(nq, std::vector<double>(ng, 0.0));
	prob.ram_share.assign(nq, std::vector<double>(ng, 0.0));
	for (std::size_t q = 0; q < nq; ++q)
	{
		for (std::size_t g = 0; g < ng; ++g)
		{
			prob.cpu_share[q][g] = scenario.cpu_share_at(q, g);
			prob.ram_share[q][g] = scenario.ram_share_at(q, g);
		}
	}

	for (ProviderId pid : coalition.members())
	{
		const Provider* provider = nullptr;
		for (const auto& p : scenario.providers)
		{
			if (p.id == pid)
			{
				provider = &p;
			}
		}
		if (provider == nullptr)
		{
			throw std::domain_error("build_problem: provider " + std::to_string(pid) + " not in scenario");
		}
		for (const auto& h : provider->hosts)
		{
			PlacementHost ph;
			ph.id = h.id;
			ph.cls = scenario.host_class_index(h.cls);
			ph.owner = pid;
			ph.initially_on = h.initially_on;
			ph.energy_price = provider->energy_price;
			const auto& hc = scenario.host_classes[ph.cls];
			ph.switch_on_w = h.initially_on ? 0.0 : hc.switch_energy_on / period;
			ph.switch_off_w = h.initially_on ? hc.switch_energy_off / period : 0.0;
			prob.hosts.push_back(ph);
		}
		for (const auto& vm : provider->vms)
		{
			PlacementVm pv;
			pv.id = vm.id;
			pv.cls = scenario.vm_class_index(vm.cls);
			pv.owner = pid;
			if (vm.current_host)
			{
				const Host* h = scenario.find_host(*vm.current_host);
				if (h == nullptr)
				{
					throw std::domain_error("build_problem: VM " + std::to_string(vm.id) + " on unknown host");
				}
				pv.current_cp = h->owner;
			}
			prob.vms.push_back(pv);
		}
	}

	prob.migration.assign(prob.vms.size() * prob.hosts.size(), 0.0);
	for (std::size_t j = 0; j < prob.vms.size(); ++j)
	{
		const auto& vm = prob.vms[j];
		if (!vm.current_cp)
		{
			continue;
		}
		for (std::size_t i = 0; i < prob.hosts.size(); ++i)
		{
			prob.migration[j * prob.hosts.size() + i] =
			    scenario.migration_rate(vm.cls, *vm.current_cp, prob.hosts[i].owner);
		}
	}
	prob.refresh_feasibility();
	return prob;
}

Allocation make_allocation(const PlacementProblem& problem, std::vector<std::size_t> host_of)
{
	Allocation a;
	a.host_of = std::move(host_of);
	a.utilization.assign(problem.num_hosts(), 0.0);
	a.powered_on.assign(problem.num_hosts(), false);
	for (std::size_t j = 0; j < a.host_of.size(); ++j)
	{
		const std::size_t i = a.host_of[j];
		a.utilization[i] += problem.cpu(j, i);
		a.powered_on[i] = true;
	}
	for (std::size_t i = 0; i < problem.num_hosts(); ++i)
	{
		if (!a.powered_on[i] && problem.empty_host_on(i))
		{
			a.powered_on[i] = true;
		}
	}
	a.breakdown = cost_breakdown(problem, a);
	a.energy_cost_rate = a.breakdown.total();
	a.power_watts = 0;
	for (std::size_t i = 0; i < problem.num_hosts(); ++i)
	{
		if (a.powered_on[i])
		{
			a.power_watts += power_draw(problem.host_classes[problem.hosts[i].cls], std::min(a.utilization[i], 1.0));
		}
	}
	return a;
}

void check_allocation(const PlacementProblem& problem, const Allocation& a)
{
	const std::size_t nh = problem.num_hosts();
	if (a.host_of.size() != problem.num_vms())
	{
		throw constraint_violation("assignment", "allocation covers " + std::to_string(a.host_of.size()) + " of "
		                                             + std::to_string(problem.num_vms()) + " VMs");
	}
	if (a.utilization.size() != nh || a.powered_on.size() != nh)
	{
		throw constraint_violation("assignment", "per-host vectors have wrong length");
	}
	std::vector<double> cpu(nh, 0.0);
	std::vector<double> ram(nh, 0.0);
	for (std::size_t j = 0; j < a.host_of.size(); ++j)
	{
		const std::size_t i = a.host_of[j];
		if (i >= nh)
		{
			throw constraint_violation("assignment", "VM " + std::to_string(problem.vms[j].id) + " has no host");
		}
		if (!a.powered_on[i])
		{
			throw constraint_violation("powered-host", "VM " + std::to_string(problem.vms[j].id)
			                                               + " placed on powered-off host "
			                                               + std::to_string(problem.hosts[i].id));
		}
		cpu[i] += problem.cpu(j, i);
		ram[i] += problem.ram(j, i);
	}
	for (std::size_t i = 0; i < nh; ++i)
	{
		const auto hid = std::to_string(problem.hosts[i].id);
		if (std::abs(a.utilization[i] - cpu[i]) > capacity_tol)
		{
			throw constraint_violation("utilization", "host " + hid + " reports " + std::to_string(a.utilization[i])
			                                              + " but VMs use " + std::to_string(cpu[i]));
		}
		if (cpu[i] > 1.0 + capacity_tol)
		{
			throw constraint_violation("cpu-capacity", "host " + hid + " CPU share " + std::to_string(cpu[i]));
		}
		if (ram[i] > 1.0 + capacity_tol)
		{
			throw constraint_violation("ram-capacity", "host " + hid + " RAM share " + std::to_string(ram[i]));
		}
		if (!a.powered_on[i] && a.utilization[i] != 0.0)
		{
			throw constraint_violation("utilization", "powered-off host " + hid + " has nonzero utilization");
		}
	}
}

CostBreakdown cost_breakdown(const PlacementProblem& problem, const Allocation& a)
{
	check_allocation(problem, a);
	CostBreakdown b;
	for (std::size_t i = 0; i < problem.num_hosts(); ++i)
	{
		const auto& h = problem.hosts[i];
		const auto& hc = problem.host_classes[h.cls];
		if (a.powered_on[i])
		{
			b.idle_power += h.energy_price * hc.c_min;
			b.dynamic_power += h.energy_price * a.utilization[i] * (hc.c_max - hc.c_min);
			b.switch_cost += h.energy_price * h.switch_on_w;
		}
		else
		{
			b.switch_cost += h.energy_price * h.switch_off_w;
		}
	}
	for (std::size_t j = 0; j < a.host_of.size(); ++j)
	{
		b.migration_cost += problem.migration_rate(j, a.host_of[j]);
	}
	return b;
}

double objective_value(const PlacementProblem& problem, const Allocation& allocation)
{
	return cost_breakdown(problem, allocation).total();
}

std::map<ProviderId, ProviderUsage> usage_by_provider(const PlacementProblem& problem, const Allocation& a)
{
	std::map<ProviderId, ProviderUsage> out;
	for (std::size_t i = 0; i < problem.num_hosts(); ++i)
	{
		const auto& h = problem.hosts[i];
		auto& u = out[h.owner];
		if (!a.powered_on[i])
		{
			u.energy_cost += h.energy_price * h.switch_off_w;
			continue;
		}
		const double w = power_draw(problem.host_classes[h.cls], std::min(a.utilization[i], 1.0));
		++u.hosts_on;
		u.power_watts += w;
		u.energy_cost += h.energy_price * (w + h.switch_on_w);
	}
	return out;
}

const char* to_string(SolveStatus status)
{
	switch (status)
	{
	case SolveStatus::optimal:
		return "optimal";
	case SolveStatus::heuristic:
		return "heuristic";
	case SolveStatus::time_limited:
		return "time_limited";
	case SolveStatus::infeasible:
		return "infeasible";
	}
	return "unknown";
}

Allocation heuristic_ffd(const PlacementProblem& problem)
{
	if (problem.infeasibility)
	{
		throw infeasible_placement_error(*problem.infeasibility);
	}
	const std::size_t nh = problem.num_hosts();
	std::vector<std::size_t> host_order(nh);
	std::iota(host_order.begin(), host_order.end(), std::size_t{0});
	auto proxy = [&](std::size_t i) {
		const auto& h = problem.hosts[i];
		const auto& hc = problem.host_classes[h.cls];
		return hc.c_max * h.energy_price / hc.cpu_capacity;
	};
	std::stable_sort(host_order.begin(), host_order.end(), [&](std::size_t a, std::size_t b) {
		const double pa = proxy(a);
		const double pb = proxy(b);
		if (pa != pb)
		{
			return pa < pb;
		}
		return problem.hosts[a].initially_on && !problem.hosts[b].initially_on;
	});

	std::vector<std::size_t> vm_order(problem.num_vms());
	std::iota(vm_order.begin(), vm_order.end(), std::size_t{0});
	std::stable_sort(vm_order.begin(), vm_order.end(), [&](std::size_t a, std::size_t b) {
		// Decreasing CPU demand; shares scale with Cap_v on any host class.
		double sa = 0;
		double sb = 0;
		for (std::size_t g = 0; g < problem.host_classes.size(); ++g)
		{
			sa = std::max(sa, problem.cpu_share[problem.vms[a].cls][g]);
			sb = std::max(sb, problem.cpu_share[problem.vms[b].cls][g]);
		}
		return sa > sb;
	});

	std::vector<double> cpu(nh, 0.0);
	std::vector<double> ram(nh, 0.0);
	std::vector<std::size_t> host_of(problem.num_vms(), nh);
	for (std::size_t j : vm_order)
	{
		bool placed = false;
		for (std::size_t i : host_order)
		{
			if (cpu[i] + problem.cpu(j, i) <= 1.0 + capacity_tol && ram[i] + problem.ram(j, i) <= 1.0 + capacity_tol)
			{
				cpu[i] += problem.cpu(j, i);
				ram[i] += problem.ram(j, i);
				host_of[j] = i;
				placed = true;
				break;
			}
		}
		if (!placed)
		{
			throw infeasible_placement_error("first-fit-decreasing could not place VM "
			                                 + std::to_string(problem.vms[j].id));
		}
	}
	return make_allocation(problem, std::move(host_of));
}

namespace {

/// Depth-first enumeration with a simple additive bound.
class NaiveSearch
{
public:
	NaiveSearch(const PlacementProblem& p, const SolverOptions& opt)
	    : p_(p), opt_(opt), start_(std::chrono::steady_clock::now())
	{
		const std::size_t nh = p.num_hosts();
		const std::size_t nv = p.num_vms();
		cpu_.assign(nh, 0.0);
		ram_.assign(nh, 0.0);
		count_.assign(nh, 0);
		current_.assign(nv, nh);
		base_ = 0;
		for (std::size_t i = 0; i < nh; ++i)
		{
			base_ += std::min(p.on_cost(i), p.off_cost(i));
		}
		suffix_.assign(nv + 1, 0.0);
		for (std::size_t j = nv; j-- > 0;)
		{
			double best = std::numeric_limits<double>::infinity();
			for (std::size_t i = 0; i < nh; ++i)
			{
				if (p.fits(j, i))
				{
					best = std::min(best, p.dynamic_cost(j, i) + p.migration_rate(j, i));
				}
			}
			suffix_[j] = suffix_[j + 1] + best;
		}
	}

	void run(double incumbent)
	{
		best_ = incumbent;
		descend(0, base_);
	}

	bool found() const { return have_; }
	bool timed_out() const { return timed_out_; }
	long nodes() const { return nodes_; }
	const std::vector<std::size_t>& best_assignment() const { return best_assignment_; }

private:
	void descend(std::size_t j, double cost)
	{
		++nodes_;
		if ((nodes_ & 0xfff) == 0 && elapsed() > opt_.time_limit_s)
		{
			timed_out_ = true;
		}
		if (timed_out_)
		{
			return;
		}
		if (j == p_.num_vms())
		{
			if (!have_ || cost < best_)
			{
				best_ = cost;
				best_assignment_ = current_;
				have_ = true;
			}
			return;
		}
		if (have_ && cost + suffix_[j] >= best_ - 1e-12)
		{
			return;
		}
		for (std::size_t i = 0; i < p_.num_hosts(); ++i)
		{
			const double c = p_.cpu(j, i);
			const double r = p_.ram(j, i);
			if (cpu_[i] + c > 1.0 + capacity_tol || ram_[i] + r > 1.0 + capacity_tol)
			{
				continue;
			}
			double delta = p_.dynamic_cost(j, i) + p_.migration_rate(j, i);
			if (count_[i] == 0)
			{
				delta += p_.on_cost(i) - std::min(p_.on_cost(i), p_.off_cost(i));
			}
			cpu_[i] += c;
			ram_[i] += r;
			++count_[i];
			current_[j] = i;
			descend(j + 1, cost + delta);
			--count_[i];
			cpu_[i] -= c;
			ram_[i] -= r;
			if (count_[i] == 0)
			{
				cpu_[i] = 0;
				ram_[i] = 0;
			}
		}
	}

	double elapsed() const
	{
		return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
	}

	const PlacementProblem& p_;
	SolverOptions opt_;
	std::chrono::steady_clock::time_point start_;
	std::vector<double> cpu_;
	std::vector<double> ram_;
	std::vector<int> count_;
	std::vector<std::size_t> current_;
	std::vector<std::size_t> best_assignment_;
	std::vector<double> suffix_;
	double base_ = 0;
	double best_ = std::numeric_limits<double>::infinity();
	long nodes_ = 0;
	bool have_ = false;
	bool timed_out_ = false;
};

}  // namespace

SolveReport solve_naive(const PlacementProblem& problem, const SolverOptions& options)
{
	const auto t0 = std::chrono::steady_clock::now();
	SolveReport rep;
	if (problem.infeasibility)
	{
		rep.status = SolveStatus::infeasible;
		rep.message = *problem.infeasibility;
		return rep;
	}
	NaiveSearch search(problem, options);
	search.run(std::numeric_limits<double>::infinity());
	rep.nodes_explored = search.nodes();
	if (search.found())
	{
		rep.allocation = make_allocation(problem, search.best_assignment());
		rep.objective = rep.allocation->energy_cost_rate;
		rep.status = search.timed_out() ? SolveStatus::time_limited : SolveStatus::optimal;
		rep.lower_bound = search.timed_out() ? -std::numeric_limits<double>::infinity() : rep.objective;
	}
	else
	{
		rep.status = search.timed_out() ? SolveStatus::time_limited : SolveStatus::infeasible;
		rep.message = search.timed_out() ? "time limit reached without a feasible allocation"
		                                 : "no feasible allocation exists";
	}
	rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
	return rep;
}

SolveReport solve(const PlacementProblem& problem, SolverKind kind, const SolverOptions& options)
{
	return kind == SolverKind::naive ? solve_naive(problem, options) : solve_symmetric(problem, options);
}

}  // namespace fedform
