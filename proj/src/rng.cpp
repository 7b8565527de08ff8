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

#include <fedform/rng.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fedform {

std::uint64_t splitmix64(std::uint64_t x)
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(splitmix64(seed) ^ stream)) {}

double Rng::uniform01()
{
	return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi)
{
	if (lo > hi)
	{
		throw std::invalid_argument("uniform_int: empty range");
	}
	const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
	if (span == ~std::uint64_t{0})
	{
		return static_cast<std::int64_t>(engine_());
	}
	const std::uint64_t range = span + 1;
	const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range + 1) % range;
	std::uint64_t r;
	do
	{
		r = engine_();
	} while (r > limit);
	return lo + static_cast<std::int64_t>(r % range);
}

double Rng::normal(double mean, double sd)
{
	if (has_spare_)
	{
		has_spare_ = false;
		return mean + sd * spare_;
	}
	double u1;
	do
	{
		u1 = uniform01();
	} while (u1 <= 0.0);
	const double u2 = uniform01();
	const double r = std::sqrt(-2.0 * std::log(u1));
	const double theta = 2.0 * std::numbers::pi * u2;
	spare_ = r * std::sin(theta);
	has_spare_ = true;
	return mean + sd * r * std::cos(theta);
}

double Rng::truncated_normal(double mean, double sd)
{
	double x = 0;
	for (int attempt = 0; attempt < 100; ++attempt)
	{
		x = normal(mean, sd);
		if (x >= 0)
		{
			return x;
		}
	}
	return 0.0;
}

}  // namespace fedform
