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
 * \file fedform/core.hpp
 *
 * \brief Core non-emptiness in exact rational arithmetic.
 *
 * check_core() solves
 *
 *   max  sum_S alpha_S v(S)   s.t.  sum_{S containing i} alpha_S = 1 for all i,
 *                                   alpha >= 0
 *
 * whose optimum equals v(N) exactly when the core is non-empty. The optimal
 * dual prices are then a core allocation; otherwise the optimal alpha is a
 * balanced family with sum alpha_S v(S) > v(N).
 */

#ifndef FEDFORM_CORE_HPP
#define FEDFORM_CORE_HPP

#include <fedform/coalition.hpp>
#include <fedform/coalitional.hpp>

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace fedform {

using Rational = mpq_class;

inline constexpr int max_core_players = 10;

/// Exact value of a decimal literal such as "0.623", "-12", "1.5e-3".
Rational parse_decimal(const std::string& text);

/// Exact value of a binary double.
Rational exact(double x);

std::string to_decimal(const Rational& q, int digits = 6);

struct CoreGame
{
	int n = 0;
	std::map<Coalition, Rational> values;  ///< Every nonempty coalition.

	/// v(S); throws domain_error when S is missing.
	const Rational& value(Coalition coalition) const;
};

/// Game built from a table's values (exact binary conversion). Throws
/// infeasible_coalition_error if any coalition is infeasible.
CoreGame core_game(CharacteristicTable& table);

struct CoreResult
{
	bool empty = false;
	std::vector<Rational> imputation;         ///< x_1..x_n when non-empty.
	std::map<Coalition, Rational> certificate; ///< Balanced weights when empty.
	Rational weighted_value;                  ///< Optimal sum alpha_S v(S).
	Rational grand_value;                     ///< v(N).
	int pivots = 0;
};

/// Throws size_error above 10 players and domain_error on missing values.
CoreResult check_core(const CoreGame& game);

struct BondarevaReport
{
	Rational lhs;  ///< sum alpha_S v(S)
	Rational rhs;  ///< v(N)
	bool violated = false;
};

/// Throws domain_error naming the first player whose weights do not sum to 1.
BondarevaReport bondareva_violation(const CoreGame& game, const std::map<Coalition, Rational>& alpha);

/// Whether x satisfies every core inequality and efficiency exactly.
bool in_core(const CoreGame& game, const std::vector<Rational>& x);

}  // namespace fedform

#endif  // FEDFORM_CORE_HPP
