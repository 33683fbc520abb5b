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

#include <boost/multiprecision/mpfr.hpp>
#include <stdexcept>
#include <string>

#include "qvir/scalar.hpp"

namespace qvir {

// Arbitrary-precision real; precision is the process-wide default set via
// set_working_digits before any computation in a numeric scope.
using MpReal = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

inline void set_working_digits(unsigned digits10) {
    MpReal::default_precision(digits10);
}

inline MpReal mp_from_rat(const Rat& r) {
    return MpReal(r.get_num().get_str()) / MpReal(r.get_den().get_str());
}

// base^e for rational e and positive base.
inline MpReal mp_pow(const MpReal& base, const Rat& e) {
    if (base <= 0) {
        throw std::domain_error("rational power needs a positive base");
    }
    return boost::multiprecision::pow(base, mp_from_rat(e));
}

// Minimal complex value on top of MpReal; only the operations the numeric
// backend needs.
struct MpComplex {
    MpReal re;
    MpReal im;

    MpComplex() : re(0), im(0) {}
    MpComplex(MpReal r) : re(std::move(r)), im(0) {}
    MpComplex(MpReal r, MpReal i) : re(std::move(r)), im(std::move(i)) {}
    explicit MpComplex(const Rat& r) : re(mp_from_rat(r)), im(0) {}

    bool is_zero() const { return re == 0 && im == 0; }

    MpComplex operator+(const MpComplex& o) const { return {re + o.re, im + o.im}; }
    MpComplex operator-(const MpComplex& o) const { return {re - o.re, im - o.im}; }
    MpComplex operator-() const { return {-re, -im}; }
    MpComplex operator*(const MpComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    MpComplex operator/(const MpComplex& o) const {
        MpReal n = o.re * o.re + o.im * o.im;
        if (n == 0) throw std::domain_error("complex division by zero");
        return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
    }
    MpComplex& operator+=(const MpComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    MpComplex& operator*=(const MpComplex& o) { return *this = *this * o; }

    MpReal abs() const {
        return boost::multiprecision::sqrt(re * re + im * im);
    }
};

// Evaluation of a deformed scalar at a positive rational deformation
// parameter and rational level (the level reconstructs the other two units).
// Carries its sample point so mismatched combinations fault loudly.
struct NumericScalar {
    MpComplex value;
    Rat q0;
    Rat k0;

    NumericScalar() = default;
    NumericScalar(MpComplex v, Rat q, Rat k)
        : value(std::move(v)), q0(std::move(q)), k0(std::move(k)) {}

    void check_same_point(const NumericScalar& o) const {
        if (q0 != o.q0 || k0 != o.k0) {
            throw std::invalid_argument("numeric scalars from different sample points");
        }
    }
    NumericScalar operator+(const NumericScalar& o) const {
        check_same_point(o);
        return {value + o.value, q0, k0};
    }
    NumericScalar operator-(const NumericScalar& o) const {
        check_same_point(o);
        return {value - o.value, q0, k0};
    }
    NumericScalar operator*(const NumericScalar& o) const {
        check_same_point(o);
        return {value * o.value, q0, k0};
    }
    NumericScalar operator/(const NumericScalar& o) const {
        check_same_point(o);
        return {value / o.value, q0, k0};
    }
};

namespace detail {

// Exponent of the monomial as a rational number at level k0:
// b + (a/2) k0 + c / (2 (k0 + 2)).
inline Rat mono_exponent(const Mono<3>& m, const Rat& k0) {
    Rat e(m.e[QV_Q]);
    e += Rat(m.e[QV_T]) * k0 / 2;
    if (m.e[QV_MU] != 0) {
        Rat shifted = k0 + 2;
        if (shifted == 0) {
            throw std::domain_error("sample level collides with the critical shift");
        }
        e += Rat(m.e[QV_MU]) / (2 * shifted);
    }
    return e;
}

inline MpReal eval_poly(const QtPoly& p, const MpReal& q0r, const Rat& k0) {
    MpReal acc(0);
    for (const auto& [m, c] : p.terms()) {
        acc += mp_from_rat(c) * mp_pow(q0r, mono_exponent(m, k0));
    }
    return acc;
}

}  // namespace detail

// Evaluate a deformed scalar at q = q0 > 0, level = k0. The precision in
// effect is the current working precision.
inline NumericScalar sample(const Scalar& s, Rat q0, Rat k0) {
    // Reduced form is required for the provenance equality in NumericScalar.
    q0.canonicalize();
    k0.canonicalize();
    if (q0 <= 0) {
        throw std::domain_error("sample point must have a positive parameter");
    }
    MpReal q0r = mp_from_rat(q0);
    MpReal num = detail::eval_poly(s.num(), q0r, k0);
    MpReal den = detail::eval_poly(s.den(), q0r, k0);
    if (den == 0) {
        throw std::domain_error("sample hits a pole");
    }
    return {MpComplex(num / den), q0, k0};
}

// Relative closeness within the given number of units in the last place of
// the current working precision.
inline bool mp_close_ulps(const MpReal& a, const MpReal& b, unsigned ulps) {
    MpReal diff = boost::multiprecision::abs(a - b);
    MpReal scale = (std::max)(boost::multiprecision::abs(a),
                              boost::multiprecision::abs(b));
    if (scale == 0) return diff == 0;
    MpReal eps = std::numeric_limits<MpReal>::epsilon();
    return diff <= scale * eps * ulps;
}

}  // namespace qvir
