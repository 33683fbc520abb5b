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

#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "qvir/ratfunc.hpp"

namespace qvir {

// Deformed coefficient field: rational functions in the units
//   q   (deformation parameter),
//   t = q^(level/2),
//   m = q^(1/(2*(level+2))).
// The three stay independent transcendentals; relations involving the level
// enter only through integer exponent bookkeeping. Lexicographic variable
// order (m, t, q), strongest first.
inline constexpr int QV_MU = 0;
inline constexpr int QV_T = 1;
inline constexpr int QV_Q = 2;

using QtPoly = MultiPoly<3>;
using Scalar = RatFunc<3>;

inline const std::array<std::string, 3>& qt_names() {
    static const std::array<std::string, 3> n{"m", "t", "q"};
    return n;
}

// Classical coefficient field: rational functions in the highest weight and
// the level. Lexicographic order (wt, lv).
inline constexpr int CL_WT = 0;
inline constexpr int CL_LV = 1;

using ClPoly = MultiPoly<2>;
using ClassicalScalar = RatFunc<2>;

inline const std::array<std::string, 2>& cl_names() {
    static const std::array<std::string, 2> n{"wt", "lv"};
    return n;
}

// Exponent of the form a*level + b with rational a, b. It denotes a power
// q^(a*level+b), which is a monomial t^(2a) q^b exactly when 2a and b are
// integers.
struct LinearExponent {
    Rat slope;   // coefficient of the level
    Rat offset;  // constant part

    LinearExponent() : slope(0), offset(0) {}
    LinearExponent(Rat a, Rat b) : slope(std::move(a)), offset(std::move(b)) {
        // mpq_class values built from integer pairs are stored verbatim;
        // reduce here so integrality tests and comparisons are reliable.
        slope.canonicalize();
        offset.canonicalize();
    }
    static LinearExponent constant(long b) { return {Rat(0), Rat(b)}; }

    LinearExponent operator+(const LinearExponent& o) const {
        return {slope + o.slope, offset + o.offset};
    }
    LinearExponent operator-(const LinearExponent& o) const {
        return {slope - o.slope, offset - o.offset};
    }
    LinearExponent operator-() const { return {-slope, -offset}; }
    LinearExponent scaled(const Rat& c) const { return {slope * c, offset * c}; }
    bool operator==(const LinearExponent& o) const = default;

    bool is_monomial_exponent() const {
        return is_integer(slope * 2) && is_integer(offset);
    }
};

// q^(a*level+b) as the monomial t^(2a) q^b.
inline Scalar qt_pow(const LinearExponent& e) {
    if (!e.is_monomial_exponent()) {
        throw std::domain_error("exponent does not reduce to a (t, q) monomial");
    }
    Mono<3> m;
    m.e[QV_T] = static_cast<int32_t>(to_long(e.slope * 2));
    m.e[QV_Q] = static_cast<int32_t>(to_long(e.offset));
    return Scalar::from_poly(QtPoly::monomial(m));
}

// q^((a2/2)*level + b); the doubled slope keeps call sites integral.
inline Scalar qt_pow2(long a2, long b) {
    Mono<3> m;
    m.e[QV_T] = static_cast<int32_t>(a2);
    m.e[QV_Q] = static_cast<int32_t>(b);
    return Scalar::from_poly(QtPoly::monomial(m));
}

inline Scalar mu_pow(long c) {
    Mono<3> m;
    m.e[QV_MU] = static_cast<int32_t>(c);
    return Scalar::from_poly(QtPoly::monomial(m));
}

inline Scalar qt_rat(const Rat& r) { return Scalar(r); }
inline Scalar qt_int(long n) { return Scalar(Rat(n)); }

// Symmetric quantum integer [a*level+b] = (q^e - q^-e)/(q - q^-1).
inline Scalar qint(const LinearExponent& e) {
    Scalar num = qt_pow(e) - qt_pow(-e);
    Scalar den = qt_pow2(0, 1) - qt_pow2(0, -1);
    return num / den;
}

inline Scalar qint(long n) { return qint(LinearExponent::constant(n)); }

inline Scalar qint2(long a2, long b) {
    return qint(LinearExponent{Rat(a2, 2), Rat(b)});
}

// Symmetric quantum binomial [n over l] built from quantum factorial ratios.
inline Scalar qbinomial(long n, long l) {
    if (l < 0 || l > n) return Scalar();
    Scalar r = qt_int(1);
    for (long i = 1; i <= l; ++i) {
        r *= qint(n - l + i) / qint(i);
    }
    return r;
}

inline ClassicalScalar cl_rat(const Rat& r) { return ClassicalScalar(r); }
inline ClassicalScalar cl_int(long n) { return ClassicalScalar(Rat(n)); }
// The symbolic highest weight.
inline ClassicalScalar cl_weight() { return ClassicalScalar::variable(CL_WT); }
// The symbolic level.
inline ClassicalScalar cl_level() { return ClassicalScalar::variable(CL_LV); }
// a*level + b as a classical value.
inline ClassicalScalar cl_linear(const LinearExponent& e) {
    return cl_level() * ClassicalScalar(e.slope) + ClassicalScalar(e.offset);
}

}  // namespace qvir
