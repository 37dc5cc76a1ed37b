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

#include <gtest/gtest.h>

#include "otocqp/linalg.hpp"

namespace otocqp::testing {

inline CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

inline CVector ket(std::initializer_list<Complex> entries) {
    CVector v(static_cast<Index>(entries.size()));
    Index k = 0;
    for (const Complex& e : entries) v(k++) = e;
    return v;
}

#define EXPECT_MAT_NEAR(a, b, tol) EXPECT_LT(::otocqp::max_abs((a) - (b)), (tol))
#define EXPECT_MAT_EQ(a, b) EXPECT_EQ(::otocqp::max_abs((a) - (b)), 0.0)
#define EXPECT_COMPLEX_NEAR(a, b, tol) EXPECT_LT(std::abs((a) - (b)), (tol)) << (a) << " vs " << (b)

template <typename F>
void expect_errc(Errc code, F&& f) {
    try {
        f();
        ADD_FAILURE() << "expected error " << errc_name(code);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

}  // namespace otocqp::testing
