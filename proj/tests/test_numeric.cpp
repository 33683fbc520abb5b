// Copyright (c) 2026 The qvir project
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

#include <doctest.h>

#include "qvir/numeric.hpp"
#include "qvir/rings.hpp"

using namespace qvir;

namespace {

struct DigitsGuard {
    DigitsGuard() { set_working_digits(60); }
};

}  // namespace

TEST_CASE("frozen sample value of the shifted quantum integer") {
    DigitsGuard g;
    // [lv + 2] at q = 2, lv = 1: (8 - 1/8)/(2 - 1/2) = 21/4
    NumericScalar s = sample(qint(LinearExponent{Rat(1), Rat(2)}), Rat(2), Rat(1));
    CHECK(mp_close_ulps(s.value.re, mp_from_rat(Rat(21, 4)), 10));
    CHECK(s.value.im == 0);
}

TEST_CASE("sampling is multiplicative within ten ulps") {
    DigitsGuard g;
    Rat q0(7, 10), k0(3, 10);
    Scalar xs[] = {
        qint(3),
        qt_pow2(2, -1) + mu_pow(2),
        (qint2(2, 2) - qint(1)) / (qint(2) + qt_pow2(0, 3)),
        mu_pow(-3) / qint2(4, 4),
    };
    for (const Scalar& a : xs) {
        for (const Scalar& b : xs) {
            NumericScalar pa = sample(a, q0, k0);
            NumericScalar pb = sample(b, q0, k0);
            NumericScalar pab = sample(a * b, q0, k0);
            MpComplex prod = pa.value * pb.value;
            CHECK(mp_close_ulps(pab.value.re, prod.re, 10));
        }
    }
}

TEST_CASE("sample points are part of the value") {
    DigitsGuard g;
    NumericScalar a = sample(qint(2), Rat(2), Rat(1));
    NumericScalar b = sample(qint(2), Rat(3), Rat(1));
    CHECK_THROWS_AS(a + b, std::invalid_argument);
    CHECK_THROWS_AS(sample(qint(2), Rat(-1), Rat(0)), std::domain_error);
}

TEST_CASE("third unit roots evaluate consistently") {
    DigitsGuard g;
    // at q = 2, lv = 1 the third unit is 2^(1/6); its 6th power is 2
    NumericScalar m = sample(mu_pow(1), Rat(2), Rat(1));
    MpReal p = boost::multiprecision::pow(m.value.re, 6);
    CHECK(mp_close_ulps(p, MpReal(2), 16));
}

TEST_CASE("numeric ring matches direct sampling") {
    DigitsGuard g;
    NumPointRing ring(Rat(7, 10), Rat(3, 10));
    Scalar sym = qt_pow2(3, -2);
    NumericScalar direct = sample(sym, ring.q0, ring.k0);
    MpComplex viaring = ring.qp(3, -2);
    CHECK(mp_close_ulps(direct.value.re, viaring.re, 10));

    NumericScalar di = sample(qint2(2, 1), ring.q0, ring.k0);
    MpComplex vi = ring.qi(2, 1);
    CHECK(mp_close_ulps(di.value.re, vi.re, 10));
}

TEST_CASE("rational point ring is exact") {
    RatPointRing ring;
    CHECK(ring.qp(2, 1) == Rat(25, 49) * Rat(3, 2));
    CHECK(ring.qp(-2, 0) == Rat(49, 25));
    CHECK(ring.mu(2) == Rat(4, 9));
    // qi(0, n) agrees with the integer recursion at the sample point
    Rat q0 = ring.q0;
    Rat expect = (rat_ipow(q0, 3) - rat_ipow(q0, -3)) / (q0 - 1 / q0);
    CHECK(ring.qi(0, 3) == expect);
}
