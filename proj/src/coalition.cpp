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

#include <fedform/coalition.hpp>

#include <algorithm>
#include <stdexcept>

namespace fedform {

void Coalition::insert(ProviderId id)
{
	if (id < 1 || id > max_players)
	{
		throw std::domain_error("provider id " + std::to_string(id) + " outside 1.." + std::to_string(max_players));
	}
	mask_ |= bit(id);
}

std::vector<ProviderId> Coalition::members() const
{
	std::vector<ProviderId> out;
	out.reserve(size());
	for (std::uint32_t m = mask_; m != 0; m &= m - 1)
	{
		out.push_back(std::countr_zero(m) + 1);
	}
	return out;
}

std::string Coalition::to_string() const
{
	std::string s = "{";
	bool first = true;
	for (ProviderId id : members())
	{
		if (!first)
		{
			s += ',';
		}
		s += std::to_string(id);
		first = false;
	}
	return s + "}";
}

std::strong_ordering operator<=>(const Coalition& a, const Coalition& b)
{
	const auto ma = a.members();
	const auto mb = b.members();
	return std::lexicographical_compare_three_way(ma.begin(), ma.end(), mb.begin(), mb.end());
}

}  // namespace fedform
