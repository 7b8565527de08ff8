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
 * \file fedform/rng.hpp
 *
 * \brief Portable seeded random streams.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard. Seeds are derived with splitmix64 from a base seed and a stream
 * index. Distributions are implemented here rather than taken from <random>,
 * whose distribution algorithms differ between standard libraries.
 */

#ifndef FEDFORM_RNG_HPP
#define FEDFORM_RNG_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace fedform {

std::uint64_t splitmix64(std::uint64_t x);

class Rng
{
public:
	explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

	std::uint64_t next() { return engine_(); }

	/// Uniform on [0, 1) with 53 random bits.
	double uniform01();

	/// Uniform integer on [lo, hi] by rejection; requires lo <= hi.
	std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

	bool bernoulli(double p) { return uniform01() < p; }

	/// Box-Muller; the second variate of each pair is cached.
	double normal(double mean, double sd);

	/// Normal resampled until nonnegative (100 tries), then clamped at 0.
	double truncated_normal(double mean, double sd);

	template <typename T>
	void shuffle(std::vector<T>& v)
	{
		for (std::size_t i = v.size(); i > 1; --i)
		{
			const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
			std::swap(v[i - 1], v[j]);
		}
	}

private:
	std::mt19937_64 engine_;
	bool has_spare_ = false;
	double spare_ = 0;
};

}  // namespace fedform

#endif  // FEDFORM_RNG_HPP
