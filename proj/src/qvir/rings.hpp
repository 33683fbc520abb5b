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

#include "qvir/numeric.hpp"
#include "qvir/scalar.hpp"

namespace qvir {

// Coefficient-ring trait instances. Each exposes the same vocabulary so the
// oscillator tables can be written once and instantiated per backend:
//   S            value type
//   integer, rational, qp(a2, b), qi(a2, b), mu(c), is_zero
// where qp(a2, b) = q^((a2/2) lv + b) and qi is the symmetric integer of the
// same exponent.

// Classical coefficient field in the symbolic weight and level. Used by the
// undeformed engines; the deformation vocabulary does not apply here.
struct ClassicalRing {
    using S = ClassicalScalar;
    S integer(long n) const { return cl_int(n); }
    S rational(const Rat& r) const { return cl_rat(r); }
    bool is_zero(const S& x) const { return x.is_zero(); }
};

// Fully symbolic backend over the three-unit field.
struct QtRing {
    using S = Scalar;
    S integer(long n) const { return qt_int(n); }
    S rational(const Rat& r) const { return qt_rat(r); }
    S qp(long a2, long b) const { return qt_pow2(a2, b); }
    S qi(long a2, long b) const { return qint2(a2, b); }
    S mu(long c) const { return mu_pow(c); }
    bool is_zero(const S& x) const { return x.is_zero(); }
};

// Plain rational arithmetic, for computations with every parameter
// specialized.
struct RatRing {
    using S = Rat;
    S integer(long n) const { return Rat(n); }
    S rational(const Rat& r) const { return r; }
    bool is_zero(const S& x) const { return x == 0; }
};

inline Rat rat_ipow(Rat base, long e) {
    if (e < 0) {
        if (base == 0) throw std::domain_error("zero to a negative power");
        base = 1 / base;
        e = -e;
    }
    Rat r(1);
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// Exact evaluation with the three units replaced by independent rationals.
// Generic-point sampling for rank computations; relations between the units
// are deliberately forgotten.
struct RatPointRing {
    using S = Rat;
    Rat q0{3, 2};
    Rat t0{5, 7};
    Rat mu0{2, 3};

    S integer(long n) const { return Rat(n); }
    S rational(const Rat& r) const { return r; }
    S qp(long a2, long b) const { return rat_ipow(t0, a2) * rat_ipow(q0, b); }
    S qi(long a2, long b) const {
        return (qp(a2, b) - qp(-a2, -b)) / (q0 - 1 / q0);
    }
    S mu(long c) const { return rat_ipow(mu0, c); }
    bool is_zero(const S& x) const { return x == 0; }
};

// Floating evaluation at q = q0 > 0, level = k0, at the current working
// precision.
struct NumPointRing {
    using S = MpComplex;
    Rat q0;
    Rat k0;
    MpReal q0r;
    MpReal t0r;
    MpReal mu0r;

    NumPointRing(Rat q, Rat k) : q0(std::move(q)), k0(std::move(k)) {
        q0.canonicalize();
        k0.canonicalize();
        q0r = mp_from_rat(q0);
        t0r = mp_pow(q0r, k0 / 2);
        Rat shifted = k0 + 2;
        if (shifted == 0) {
            throw std::domain_error("sample level collides with the critical shift");
        }
        mu0r = mp_pow(q0r, Rat(1) / (2 * shifted));
    }

    static MpReal ipow(const MpReal& b, long e) {
        return boost::multiprecision::pow(b, static_cast<int>(e));
    }

    S integer(long n) const { return MpComplex(MpReal(n)); }
    S rational(const Rat& r) const { return MpComplex(r); }
    S qp(long a2, long b) const {
        return MpComplex(ipow(t0r, a2) * ipow(q0r, b));
    }
    S qi(long a2, long b) const {
        MpReal e = ipow(t0r, a2) * ipow(q0r, b);
        MpReal ei = ipow(t0r, -a2) * ipow(q0r, -b);
        return MpComplex((e - ei) / (q0r - 1 / q0r));
    }
    S mu(long c) const { return MpComplex(ipow(mu0r, c)); }
    // zero testing is only used to prune exact zeros; floats never prune
    bool is_zero(const S& x) const { return x.re == 0 && x.im == 0; }
};

}  // namespace qvir
