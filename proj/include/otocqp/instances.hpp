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

// instances.hpp - the seeded random instance family used by the theorem
// verification suite (CLI `verify` with a suite, and selftest).

#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "otocqp/model.hpp"
#include "otocqp/random.hpp"

namespace otocqp {

struct TheoremInstance {
    std::string label;
    DensityOperator rho;
    EigenUnitary w;
    EigenUnitary v;
    Propagator u;
};

// Instance `index` of the suite seeded by `seed`: D cycles through
// {2, 4, 8, 16}, the state through {1/D, Gibbs(T=1), random full rank},
// t is uniform in [0, 2]. Every third W and every fourth V has a degenerate
// spectrum.
inline TheoremInstance random_theorem_instance(std::size_t index, std::uint64_t seed) {
    static constexpr std::array<Index, 4> dims{2, 4, 8, 16};
    Rng rng(seed * 1000003ULL + index);
    const Index d = dims[index % dims.size()];
    std::uniform_real_distribution<double> time(0.0, 2.0);
    const double t = time(rng);

    const HermitianEigen spectrum = eig_hermitian(random_hermitian(d, rng, 2.0));
    DensityOperator rho = [&] {
        switch (index % 3) {
            case 0: return maximally_mixed(d);
            case 1: return gibbs_state(spectrum, 1.0);
            default: return random_full_rank_state(d, rng);
        }
    }();
    const Index levels = std::max<Index>(1, d / 2);
    const CMatrix gw = index % 3 == 2 ? random_degenerate_generator(d, levels, rng) : random_hermitian(d, rng, 3.0);
    const CMatrix gv = index % 4 == 3 ? random_degenerate_generator(d, levels, rng) : random_hermitian(d, rng, 3.0);

    static constexpr std::array<const char*, 3> state_names{"mixed", "gibbs(T=1)", "random"};
    std::string label = "D=" + std::to_string(d) + " rho=" + state_names[index % 3] + " t=" + std::to_string(t);
    return TheoremInstance{std::move(label), std::move(rho), eigen_unitary_from_generator(gw),
                           eigen_unitary_from_generator(gv), make_propagator(spectrum, t, "random")};
}

}  // namespace otocqp
