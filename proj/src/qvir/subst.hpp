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

#include <stdexcept>

#include "qvir/scalar.hpp"
#include "qvir/series.hpp"

namespace qvir {

namespace detail {

// The level substitution lv -> 1/(lv+2) - 2, combined with the compensating
// rescaling h -> -(lv+2) h of the expansion parameter, maps the monomial
// t^a q^b = exp(h (b + (a/2) lv)) to exp(h' (b' + (a'/2) lv)) with
//   a' = 2(a - b),  b' = 2(a - b) - a/2.
// It is defined on monomials free of the third unit and with even a; the
// image always has even a', so the map is an involution on its domain.
inline Mono<3> level_flip_mono(const Mono<3>& m) {
    if (m.e[QV_MU] != 0) {
        throw std::domain_error("level flip undefined on the small unit");
    }
    const long a = m.e[QV_T];
    const long b = m.e[QV_Q];
    if (a % 2 != 0) {
        throw std::domain_error("level flip image leaves the monomial grid");
    }
    Mono<3> r;
    r.e[QV_MU] = 0;
    r.e[QV_T] = static_cast<int32_t>(2 * (a - b));
    r.e[QV_Q] = static_cast<int32_t>(2 * (a - b) - a / 2);
    return r;
}

}  // namespace detail

// Involution induced by lv -> 1/(lv+2) - 2 together with the compensating
// rescaling of the formal expansion parameter; see level_flip_mono.
inline QtPoly level_flip(const QtPoly& p) {
    QtPoly r;
    for (const auto& [m, c] : p.terms()) {
        r += QtPoly::monomial(detail::level_flip_mono(m), c);
    }
    return r;
}

inline Scalar level_flip(const Scalar& s) {
    return Scalar(level_flip(s.num()), level_flip(s.den()));
}

// The bar involution q -> 1/q (all three units invert).
inline QtPoly bar_flip(const QtPoly& p) {
    QtPoly r;
    for (const auto& [m, c] : p.terms()) {
        Mono<3> n;
        for (int v = 0; v < 3; ++v) n.e[v] = -m.e[v];
        r += QtPoly::monomial(n, c);
    }
    return r;
}

inline Scalar bar_flip(const Scalar& s) {
    return Scalar(bar_flip(s.num()), bar_flip(s.den()));
}

namespace detail {

// Exponent of a monomial as a function of the level: the unit assignment is
// q = exp(h), t = exp(h*lv/2), third unit = exp(h/(2*(lv+2))), so the
// monomial's h-coefficient is b + (a/2) lv + c/(2(lv+2)).
inline ClassicalScalar h_exponent(const Mono<3>& m) {
    ClassicalScalar lv = cl_level();
    ClassicalScalar e = cl_int(m.e[QV_Q]);
    e = e + lv * cl_rat(rat_of(m.e[QV_T], 2));
    if (m.e[QV_MU] != 0) {
        e = e + cl_rat(Rat(m.e[QV_MU])) / (cl_int(2) * (lv + cl_int(2)));
    }
    return e;
}

inline TruncSeries<ClassicalScalar> h_series(const QtPoly& p, std::size_t ord) {
    TruncSeries<ClassicalScalar> s(ord);
    for (const auto& [m, c] : p.terms()) {
        ClassicalScalar e = h_exponent(m);
        ClassicalScalar pw = cl_rat(c);
        Rat fact(1);
        for (std::size_t j = 0; j <= ord; ++j) {
            if (j > 0) {
                pw = pw * e;
                fact *= Rat(static_cast<long>(j));
            }
            s[j] = s[j] + pw * cl_rat(Rat(1) / fact);
        }
    }
    return s;
}

}  // namespace detail

// Limit of a deformed scalar as the deformation parameter goes to 1 along
// q = exp(h), h -> 0, with the level kept symbolic. Throws when the limit
// diverges.
inline ClassicalScalar classical_limit(const Scalar& s) {
    if (s.is_zero()) return ClassicalScalar();
    for (std::size_t ord = 4;; ord *= 2) {
        TruncSeries<ClassicalScalar> num = detail::h_series(s.num(), ord);
        TruncSeries<ClassicalScalar> den = detail::h_series(s.den(), ord);
        std::size_t dv = den.valuation();
        if (dv > den.order()) {
            // a nonzero polynomial expands to a nonzero series eventually
            if (ord >= 64) {
                throw std::domain_error("classical limit: denominator vanishes");
            }
            continue;
        }
        std::size_t nv = num.valuation();
        if (nv < dv) {
            throw std::domain_error("classical limit diverges");
        }
        if (nv > dv) return ClassicalScalar();
        return num[nv] / den[dv];
    }
}

// classical_limit specialised to a numeric weight: substitute the symbolic
// weight variable afterwards (the deformed ring has no weight variable, so
// this is just the limit itself; the helper keeps call sites uniform).
inline Rat classical_limit_const(const Scalar& s) {
    ClassicalScalar c = classical_limit(s);
    if (!c.is_rational()) {
        throw std::domain_error("classical limit is not constant");
    }
    return c.rational_value();
}

}  // namespace qvir
