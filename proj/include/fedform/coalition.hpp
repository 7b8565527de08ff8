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

#ifndef FEDFORM_COALITION_HPP
#define FEDFORM_COALITION_HPP

#include <fedform/domain.hpp>

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace fedform {

inline constexpr int max_players = 31;

/**
 * \brief A set of provider ids 1..31 stored as a bit mask (bit i-1 for id i).
 *
 * Equal member sets are equal values, so a Coalition is directly usable as a
 * map key. Ordering is lexicographic on the sorted member lists.
 */
class Coalition
{
public:
	constexpr Coalition() = default;

	Coalition(std::initializer_list<ProviderId> ids)
	{
		for (ProviderId id : ids)
		{
			insert(id);
		}
	}

	static constexpr Coalition from_mask(std::uint32_t mask)
	{
		Coalition c;
		c.mask_ = mask;
		return c;
	}

	static Coalition from_ids(const std::vector<ProviderId>& ids)
	{
		Coalition c;
		for (ProviderId id : ids)
		{
			c.insert(id);
		}
		return c;
	}

	/// The grand coalition {1..n}.
	static constexpr Coalition grand(int n)
	{
		return from_mask(n >= 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1));
	}

	void insert(ProviderId id);
	void erase(ProviderId id) { mask_ &= ~bit(id); }

	constexpr bool contains(ProviderId id) const { return id >= 1 && id <= max_players && (mask_ & bit(id)) != 0; }
	constexpr bool empty() const { return mask_ == 0; }
	constexpr int size() const { return std::popcount(mask_); }
	constexpr std::uint32_t mask() const { return mask_; }

	Coalition with(ProviderId id) const
	{
		Coalition c = *this;
		c.insert(id);
		return c;
	}

	Coalition without(ProviderId id) const
	{
		Coalition c = *this;
		c.erase(id);
		return c;
	}

	constexpr bool disjoint(const Coalition& o) const { return (mask_ & o.mask_) == 0; }
	constexpr Coalition operator|(const Coalition& o) const { return from_mask(mask_ | o.mask_); }
	constexpr Coalition operator&(const Coalition& o) const { return from_mask(mask_ & o.mask_); }

	std::vector<ProviderId> members() const;

	/// Smallest member id (0 if empty).
	ProviderId front() const { return empty() ? 0 : std::countr_zero(mask_) + 1; }

	/// "{1,3}" style.
	std::string to_string() const;

	friend constexpr bool operator==(const Coalition& a, const Coalition& b) { return a.mask_ == b.mask_; }
	friend std::strong_ordering operator<=>(const Coalition& a, const Coalition& b);

private:
	static constexpr std::uint32_t bit(ProviderId id) { return std::uint32_t{1} << (id - 1); }

	std::uint32_t mask_ = 0;
};

}  // namespace fedform

#endif  // FEDFORM_COALITION_HPP
