// SPDX-License-Identifier: Apache-2.0
//
// ltechest: pilot-aided OFDM channel estimation for LTE downlink links
// Copyright (C) 2026 The ltechest authors
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

#ifndef LTECHEST_SEEDING_HPP
#define LTECHEST_SEEDING_HPP

#include <cstdint>

namespace ltechest
{

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Combines a parent seed with a stream label: splitmix64(splitmix64(parent) ^ label).
constexpr std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t label)
{
    return splitmix64(splitmix64(parent) ^ label);
}

/// Per-frame seed of a Monte Carlo sweep: mix_seed(mix_seed(master, point), frame).
constexpr std::uint64_t derive_frame_seed(std::uint64_t master_seed, std::uint64_t point_index,
                                          std::uint64_t frame_index)
{
    return mix_seed(mix_seed(master_seed, point_index), frame_index);
}

/// Stream labels used to split one frame seed into independent generators.
enum class SeedStream : std::uint64_t
{
    channel = 1,
    bits = 2,
    awgn = 3,
    impulse = 4,
};

constexpr std::uint64_t stream_seed(std::uint64_t frame_seed, SeedStream stream)
{
    return mix_seed(frame_seed, static_cast<std::uint64_t>(stream));
}

} // namespace ltechest

#endif
