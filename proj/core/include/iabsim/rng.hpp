// SPDX-License-Identifier: Apache-2.0
//
// iabsim: slot-level simulator for mmWave integrated access and backhaul networks
// Copyright (C) 2026 The iabsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#ifndef IABSIM_RNG_HPP
#define IABSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace iabsim {

using Rng = std::mt19937_64;

// Independent random streams per purpose, so that changing one part of a
// configuration (e.g. the blockage density) leaves the draws of every other
// stream untouched across runs with the same seed.
enum class Stream : std::uint64_t {
    IabPlacement = 1,
    UePlacement = 2,
    Mobility = 3,
    Channel = 4,
    Blockage = 5,
    TrafficDl = 6,
    TrafficUl = 7,
};

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Rng make_stream(std::uint64_t seed, Stream stream, std::uint64_t index = 0)
{
    const std::uint64_t s = splitmix64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream))) + index);
    return Rng{s};
}

// Uniform in [0, 1). Written out instead of std::uniform_real_distribution
// so that draws are identical across standard library implementations.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double exponential(Rng &rng, double mean) { return -mean * std::log1p(-uniform01(rng)); }

// Box-Muller, one draw per call.
inline double standard_normal(Rng &rng)
{
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace iabsim

#endif
