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

// otoc.hpp - direct evaluation of C(t) = Tr(rho W^dag(t) V^dag W(t) V).

#pragma once

#include <span>
#include <vector>

#include "otocqp/model.hpp"
#include "otocqp/parallel.hpp"

namespace otocqp {

struct OtocPoint {
    double t = 0.0;
    Complex value;
};

// W(t) = U^dag W U
inline CMatrix heisenberg(const CMatrix& w, const Propagator& u) {
    require_same_dim(w.rows(), u.dim(), "heisenberg");
    return u.U.adjoint() * w * u.U;
}

inline CMatrix heisenberg(const EigenUnitary& w, const Propagator& u) { return heisenberg(w.matrix(), u); }

inline OtocPoint otoc_direct(const DensityOperator& rho, const EigenUnitary& w, const EigenUnitary& v,
                             const Propagator& u) {
    require_same_dim(rho.dim(), w.dim(), "otoc_direct");
    require_same_dim(rho.dim(), v.dim(), "otoc_direct");
    require_same_dim(rho.dim(), u.dim(), "otoc_direct");
    const CMatrix wt = heisenberg(w, u);
    const CMatrix& vm = v.matrix();
    const CMatrix product = rho.matrix * wt.adjoint() * vm.adjoint() * wt * vm;
    return OtocPoint{u.t, product.trace()};
}

// Everything needed to evaluate C(t) at many times; H is diagonalized once.
struct OtocSetup {
    HermitianEigen spectrum;
    std::string label;
    DensityOperator rho;
    EigenUnitary w;
    EigenUnitary v;
};

inline std::vector<OtocPoint> otoc_sweep(const OtocSetup& setup, std::span<const double> times,
                                         unsigned threads = 1) {
    for (double t : times) {
        if (!std::isfinite(t)) throw Error(Errc::InvalidArgument, "otoc_sweep: non-finite time");
    }
    std::vector<OtocPoint> out(times.size());
    parallel_for(times.size(), threads, [&](std::size_t i) {
        const Propagator u = make_propagator(setup.spectrum, times[i], setup.label);
        out[i] = otoc_direct(setup.rho, setup.w, setup.v, u);
    });
    return out;
}

}  // namespace otocqp
