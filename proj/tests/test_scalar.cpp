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

#include "qvir/scalar.hpp"
#include "qvir/series.hpp"
#include "qvir/subst.hpp"

using namespace qvir;

TEST_CASE("symmetric quantum integers") {
    CHECK(qint(0).is_zero());
    CHECK(qint(1) == qt_int(1));
    CHECK(qint(2) == qt_pow2(0, 1) + qt_pow2(0, -1));
    for (long n = -6; n <= 6; ++n) {
        CHECK(qint(-n) == Scalar() - qint(n));
    }
}

TEST_CASE("quantum integer addition rule") {
    // [m+n] = q^n [m] + q^{-m} [n]
    for (long m = -4; m <= 4; ++m) {
        for (long n = -4; n <= 4; ++n) {
            Scalar lhs = qint(m + n);
            Scalar rhs = qt_pow2(0, n) * qint(m) + qt_pow2(0, -m) * qint(n);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("quantum binomial frozen value") {
    // [4 over 2] = q^4 + q^2 + 2 + q^-2 + q^-4
    Scalar expect = qt_pow2(0, 4) + qt_pow2(0, 2) + qt_int(2) + qt_pow2(0, -2) +
                    qt_pow2(0, -4);
    CHECK(qbinomial(4, 2) == expect);
    // edge rows and symmetry
    for (long n = 0; n <= 6; ++n) {
        CHECK(qbinomial(n, 0) == qt_int(1));
        CHECK(qbinomial(n, n) == qt_int(1));
        for (long l = 0; l <= n; ++l) {
            CHECK(qbinomial(n, l) == qbinomial(n, n - l));
        }
    }
    CHECK(qbinomial(3, 5).is_zero());
}

TEST_CASE("level-linear exponents make monomials exactly when on the grid") {
    LinearExponent e{Rat(1), Rat(2)};  // lv + 2
    CHECK(qt_pow(e) == qt_pow2(2, 2));
    CHECK(qt_pow(e) * qt_pow(-e) == qt_int(1));
    LinearExponent half{Rat(1, 2), Rat(0)};
    CHECK(qt_pow(half) == qt_pow2(1, 0));
    LinearExponent off{Rat(1, 4), Rat(0)};
    CHECK_THROWS_AS(qt_pow(off), std::domain_error);
    LinearExponent offb{Rat(0), Rat(1, 2)};
    CHECK_THROWS_AS(qt_pow(offb), std::domain_error);
}

TEST_CASE("third unit is never forced into denominators") {
    Scalar s = mu_pow(3) / qt_pow2(2, 1);
    CHECK(s.den().min_exp(QV_MU) == 0);
    CHECK(s.den().max_exp(QV_MU) == 0);
    Scalar r = qt_int(1) / (mu_pow(2) - qt_int(1));
    // representation keeps the unit content in the numerator
    CHECK(r.den().min_exp(QV_MU) == 0);
}

TEST_CASE("bar flip inverts all units") {
    CHECK(bar_flip(qt_pow2(3, -2)) == qt_pow2(-3, 2));
    CHECK(bar_flip(mu_pow(2)) == mu_pow(-2));
    for (long n = 1; n <= 5; ++n) {
        CHECK(bar_flip(qint(n)) == qint(n));
        CHECK(bar_flip(qint2(2, n)) == qint2(2, n));
    }
    Scalar s = (qint(3) + mu_pow(1) * qt_pow2(2, 0)) / (qint(2) - qt_pow2(0, 2));
    CHECK(bar_flip(bar_flip(s)) == s);
}

TEST_CASE("level flip is an involution on its domain") {
    // t^a q^b with even a
    for (long a = -4; a <= 4; a += 2) {
        for (long b = -3; b <= 3; ++b) {
            Scalar m = qt_pow2(a, b);
            CHECK(level_flip(level_flip(m)) == m);
        }
    }
    // q (odd t-exponent absent, fine) maps to t^-2 q^-2
    CHECK(level_flip(qt_pow2(0, 1)) == qt_pow2(-2, -2));
    // third unit and odd t-exponents are out of the domain
    CHECK_THROWS_AS(level_flip(mu_pow(1)), std::domain_error);
    CHECK_THROWS_AS(level_flip(qt_pow2(1, 0)), std::domain_error);
}

TEST_CASE("classical limit of quantum integers") {
    for (long n = -20; n <= 20; ++n) {
        CHECK(classical_limit(qint(n)) == cl_int(n));
    }
    // [lv] -> lv, [lv + 2] -> lv + 2
    CHECK(classical_limit(qint2(2, 0)) == cl_level());
    CHECK(classical_limit(qint2(2, 2)) == cl_level() + cl_int(2));
    // ratio with a finite limit
    CHECK(classical_limit(qint(6) / qint(3)) == cl_int(2));
    // genuine pole diverges
    CHECK_THROWS_AS(classical_limit(qt_int(1) / (qt_pow2(0, 1) - qt_int(1))),
                    std::domain_error);
    // third unit: mu = q^{1/(2(lv+2))} -> 1, and (mu-1)/(q-1) -> 1/(2(lv+2))
    CHECK(classical_limit(mu_pow(4)) == cl_int(1));
    ClassicalScalar lim = classical_limit((mu_pow(1) - qt_int(1)) /
                                          (qt_pow2(0, 1) - qt_int(1)));
    CHECK(lim == cl_int(1) / (cl_int(2) * (cl_level() + cl_int(2))));
}

TEST_CASE("classical limit of binomials hits ordinary binomials") {
    CHECK(classical_limit(qbinomial(4, 2)) == cl_int(6));
    CHECK(classical_limit(qbinomial(6, 3)) == cl_int(20));
}

TEST_CASE("truncated series inverse and exp") {
    using S = TruncSeries<Scalar>;
    S one = S::constant(6, qt_int(1));

    S a(6);
    a[0] = qt_int(1);
    a[1] = Scalar() - qt_int(1);  // 1 - x
    S inv = a.inverse();
    for (std::size_t i = 0; i <= 6; ++i) {
        CHECK(inv[i] == qt_int(1));  // geometric series
    }
    CHECK((a * inv - one).is_zero());

    S b(6);
    b[1] = qint(2);
    S e = b.exp();
    S bm(6);
    bm[1] = Scalar() - qint(2);
    CHECK((e * bm.exp() - one).is_zero());
    CHECK(e[2] == qint(2) * qint(2) / qt_int(2));
}
