// Copyright 2026 The otocqp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace otocqp {

// Trials are grouped into fixed-size blocks; block b of stream s draws from an
// mt19937_64 seeded with (seed, s, b). Results therefore depend only on the
// seed and the trial index, never on how blocks are spread over threads.
inline constexpr std::size_t kTrialBlock = 4096;

inline std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(block),
                      static_cast<std::uint32_t>(block >> 32)};
    return std::mt19937_64(seq);
}

inline double uniform01(std::mt19937_64& engine) {
    return std::generate_canonical<double, 53>(engine);
}

// Index of the outcome selected by u in [0,1) given an inclusive cumulative
// distribution. Zero-probability outcomes are never selected.
inline std::size_t sample_cumulative(std::span<const double> cumulative, double u) {
    const double target = u * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    if (it == cumulative.end()) --it;
    return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace otocqp
