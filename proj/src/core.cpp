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

#include <fedform/core.hpp>

#include <cctype>
#include <stdexcept>

namespace fedform {

Rational parse_decimal(const std::string& text)
{
	auto fail = [&] { throw std::invalid_argument("not a decimal number: '" + text + "'"); };
	std::size_t pos = 0;
	bool negative = false;
	if (pos < text.size() && (text[pos] == '+' || text[pos] == '-'))
	{
		negative = text[pos] == '-';
		++pos;
	}
	std::string digits;
	int scale = 0;
	bool any = false;
	bool dot = false;
	for (; pos < text.size(); ++pos)
	{
		const char c = text[pos];
		if (std::isdigit(static_cast<unsigned char>(c)))
		{
			digits += c;
			any = true;
			if (dot)
			{
				++scale;
			}
		}
		else if (c == '.' && !dot)
		{
			dot = true;
		}
		else
		{
			break;
		}
	}
	if (!any)
	{
		fail();
	}
	if (pos < text.size())
	{
		if (text[pos] != 'e' && text[pos] != 'E')
		{
			fail();
		}
		++pos;
		std::size_t used = 0;
		int exponent = 0;
		try
		{
			exponent = std::stoi(text.substr(pos), &used);
		}
		catch (const std::exception&)
		{
			fail();
		}
		if (pos + used != text.size())
		{
			fail();
		}
		scale -= exponent;
	}
	mpz_class num(digits, 10);
	mpz_class ten_pow;
	mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
	Rational q = scale >= 0 ? Rational(num, ten_pow) : Rational(num * ten_pow);
	q.canonicalize();
	return negative ? Rational(-q) : q;
}

Rational exact(double x)
{
	return Rational(x);
}

std::string to_decimal(const Rational& q, int digits)
{
	mpf_class f(q, 256);
	char buf[128];
	gmp_snprintf(buf, sizeof buf, "%.*Ff", digits, f.get_mpf_t());
	return buf;
}

const Rational& CoreGame::value(Coalition coalition) const
{
	const auto it = values.find(coalition);
	if (it == values.end())
	{
		throw std::domain_error("core game: no value for coalition " + coalition.to_string());
	}
	return it->second;
}

CoreGame core_game(CharacteristicTable& table)
{
	CoreGame g;
	g.n = table.num_players();
	if (g.n > max_core_players)
	{
		throw size_error("core analysis is capped at " + std::to_string(max_core_players) + " players");
	}
	const std::uint32_t full = Coalition::grand(g.n).mask();
	for (std::uint32_t m = 1; m <= full; ++m)
	{
		const Coalition c = Coalition::from_mask(m);
		g.values.emplace(c, exact(table.value(c)));
	}
	return g;
}

namespace {

/// Dense rational tableau for  max c'x, A x = b, x >= 0, b >= 0, with one
/// artificial column per row appended. Bland's rule throughout.
class RationalSimplex
{
public:
	RationalSimplex(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
	                const std::vector<Rational>& c)
	    : m_(static_cast<int>(a.size())), n_(static_cast<int>(c.size())), width_(n_ + m_), c_(c)
	{
		t_.assign(m_, std::vector<Rational>(width_ + 1, 0));
		basis_.resize(m_);
		for (int i = 0; i < m_; ++i)
		{
			for (int j = 0; j < n_; ++j)
			{
				t_[i][j] = a[i][j];
			}
			t_[i][n_ + i] = 1;
			t_[i][width_] = b[i];
			basis_[i] = n_ + i;
		}
	}

	/// Returns false if the constraints are infeasible.
	bool solve()
	{
		// Phase 1: maximize minus the artificial sum.
		std::vector<Rational> cost(width_, 0);
		for (int j = n_; j < width_; ++j)
		{
			cost[j] = -1;
		}
		run(cost, width_);
		for (int i = 0; i < m_; ++i)
		{
			if (basis_[i] >= n_ && sgn(t_[i][width_]) != 0)
			{
				return false;
			}
		}
		// Drive zero-valued artificials out of the basis where possible.
		for (int i = 0; i < m_; ++i)
		{
			if (basis_[i] < n_)
			{
				continue;
			}
			for (int j = 0; j < n_; ++j)
			{
				if (sgn(t_[i][j]) != 0)
				{
					pivot(i, j);
					break;
				}
			}
		}
		std::fill(cost.begin(), cost.end(), 0);
		std::copy(c_.begin(), c_.end(), cost.begin());
		run(cost, n_);
		return true;
	}

	Rational objective() const
	{
		Rational z = 0;
		for (int i = 0; i < m_; ++i)
		{
			if (basis_[i] < n_)
			{
				z += c_[basis_[i]] * t_[i][width_];
			}
		}
		return z;
	}

	std::vector<Rational> primal() const
	{
		std::vector<Rational> x(n_, 0);
		for (int i = 0; i < m_; ++i)
		{
			if (basis_[i] < n_)
			{
				x[basis_[i]] = t_[i][width_];
			}
		}
		return x;
	}

	/// Row prices c_B B^-1, read from the artificial columns.
	std::vector<Rational> duals() const
	{
		std::vector<Rational> y(m_, 0);
		for (int k = 0; k < m_; ++k)
		{
			for (int i = 0; i < m_; ++i)
			{
				if (basis_[i] < n_)
				{
					y[k] += c_[basis_[i]] * t_[i][n_ + k];
				}
			}
		}
		return y;
	}

	int pivots() const { return pivots_; }

private:
	void run(const std::vector<Rational>& cost, int enter_limit)
	{
		while (true)
		{
			int enter = -1;
			for (int j = 0; j < enter_limit && enter < 0; ++j)
			{
				if (is_basic(j))
				{
					continue;
				}
				Rational d = cost[j];
				for (int i = 0; i < m_; ++i)
				{
					d -= cost[basis_[i]] * t_[i][j];
				}
				if (sgn(d) > 0)
				{
					enter = j;
				}
			}
			if (enter < 0)
			{
				return;
			}
			int leave = -1;
			Rational best_ratio;
			for (int i = 0; i < m_; ++i)
			{
				if (sgn(t_[i][enter]) <= 0)
				{
					continue;
				}
				Rational ratio = t_[i][width_] / t_[i][enter];
				if (leave < 0 || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave]))
				{
					leave = i;
					best_ratio = ratio;
				}
			}
			if (leave < 0)
			{
				throw std::logic_error("core LP unbounded; weights are bounded by construction");
			}
			pivot(leave, enter);
		}
	}

	bool is_basic(int j) const
	{
		for (int b : basis_)
		{
			if (b == j)
			{
				return true;
			}
		}
		return false;
	}

	void pivot(int r, int enter)
	{
		++pivots_;
		const Rational inv = 1 / t_[r][enter];
		for (auto& v : t_[r])
		{
			v *= inv;
		}
		for (int i = 0; i < m_; ++i)
		{
			if (i == r || sgn(t_[i][enter]) == 0)
			{
				continue;
			}
			const Rational f = t_[i][enter];
			for (int j = 0; j <= width_; ++j)
			{
				t_[i][j] -= f * t_[r][j];
			}
		}
		basis_[r] = enter;
	}

	int m_;
	int n_;
	int width_;
	std::vector<Rational> c_;
	std::vector<std::vector<Rational>> t_;
	std::vector<int> basis_;
	int pivots_ = 0;
};

}  // namespace

CoreResult check_core(const CoreGame& game)
{
	const int n = game.n;
	if (n < 1 || n > max_core_players)
	{
		throw size_error("core analysis needs 1.." + std::to_string(max_core_players) + " players");
	}
	const std::uint32_t full = Coalition::grand(n).mask();
	std::vector<Coalition> cols;
	std::vector<Rational> c;
	for (std::uint32_t m = 1; m <= full; ++m)
	{
		cols.push_back(Coalition::from_mask(m));
		c.push_back(game.value(cols.back()));
	}
	std::vector<std::vector<Rational>> a(n, std::vector<Rational>(cols.size(), 0));
	for (std::size_t j = 0; j < cols.size(); ++j)
	{
		for (ProviderId i : cols[j].members())
		{
			a[i - 1][j] = 1;
		}
	}
	RationalSimplex lp(a, std::vector<Rational>(n, 1), c);
	if (!lp.solve())
	{
		throw std::logic_error("balancedness constraints infeasible; singletons always satisfy them");
	}

	CoreResult r;
	r.weighted_value = lp.objective();
	r.grand_value = game.value(Coalition::grand(n));
	r.pivots = lp.pivots();
	r.empty = r.weighted_value > r.grand_value;
	if (r.empty)
	{
		const auto alpha = lp.primal();
		for (std::size_t j = 0; j < cols.size(); ++j)
		{
			if (sgn(alpha[j]) != 0)
			{
				r.certificate.emplace(cols[j], alpha[j]);
			}
		}
	}
	else
	{
		r.imputation = lp.duals();
	}
	return r;
}

BondarevaReport bondareva_violation(const CoreGame& game, const std::map<Coalition, Rational>& alpha)
{
	std::vector<Rational> weight(game.n, 0);
	for (const auto& [s, a] : alpha)
	{
		if (s.empty() || (s.mask() & ~Coalition::grand(game.n).mask()) != 0)
		{
			throw std::domain_error("weight on invalid coalition " + s.to_string());
		}
		if (sgn(a) < 0)
		{
			throw std::domain_error("negative weight on coalition " + s.to_string());
		}
		for (ProviderId i : s.members())
		{
			weight[i - 1] += a;
		}
	}
	for (int i = 0; i < game.n; ++i)
	{
		if (weight[i] != 1)
		{
			throw std::domain_error("weights are not balanced: player " + std::to_string(i + 1) + " has total "
			                        + weight[i].get_str());
		}
	}
	BondarevaReport rep;
	for (const auto& [s, a] : alpha)
	{
		rep.lhs += a * game.value(s);
	}
	rep.rhs = game.value(Coalition::grand(game.n));
	rep.violated = rep.lhs > rep.rhs;
	return rep;
}

bool in_core(const CoreGame& game, const std::vector<Rational>& x)
{
	if (static_cast<int>(x.size()) != game.n)
	{
		return false;
	}
	for (const auto& [s, v] : game.values)
	{
		Rational sum = 0;
		for (ProviderId i : s.members())
		{
			sum += x[i - 1];
		}
		if (sum < v)
		{
			return false;
		}
		if (s == Coalition::grand(game.n) && sum != v)
		{
			return false;
		}
	}
	return true;
}

}  // namespace fedform
