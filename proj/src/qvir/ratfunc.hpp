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
#include <string>

#include "qvir/multipoly.hpp"

namespace qvir {

// Quotient of Laurent polynomials in canonical form:
//  * gcd(numerator, denominator) is a unit,
//  * the denominator is a plain polynomial whose least exponent in every
//    variable is 0, integer-primitive, with positive leading coefficient.
// Monomial units and signs therefore live entirely in the numerator, which
// makes equality a plain component comparison and printing reproducible.
template <int NV>
class RatFunc {
  public:
    using P = MultiPoly<NV>;

    RatFunc() : num_(), den_(Rat(1)) {}
    explicit RatFunc(const Rat& c) : num_(c), den_(Rat(1)) {}
    RatFunc(P num, P den) : num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }
    static RatFunc from_poly(P p) {
        RatFunc r;
        r.num_ = std::move(p);
        return r;
    }
    static RatFunc variable(int v, int32_t power = 1) {
        return from_poly(P::variable(v, power));
    }

    const P& num() const { return num_; }
    const P& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_rational() const { return num_.is_constant() && den_.is_one(); }
    Rat rational_value() const {
        if (!is_rational()) throw std::domain_error("value is not rational");
        return num_.constant_value();
    }

    bool operator==(const RatFunc& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }

    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        // Reduced summands can only grow a common factor with the new
        // denominator inside the old denominators' shared part, so that part
        // carries the only gcd the sum needs.
        P g = poly_gcd(a.den_, b.den_);
        RatFunc r;
        if (g.is_one()) {
            r.num_ = a.num_ * b.den_ + b.num_ * a.den_;
            r.den_ = a.den_ * b.den_;
            r.normalize_units();
            return r;
        }
        P da = P::divexact(a.den_, g);
        P db = P::divexact(b.den_, g);
        r.num_ = a.num_ * db + b.num_ * da;
        if (r.num_.is_zero()) return RatFunc();
        r.den_ = da * b.den_;
        P g2 = poly_gcd(r.num_, g);
        if (!g2.is_one()) {
            r.num_ = P::divexact(r.num_.laurent_normalized(), g2) *
                     unit_of(r.num_);
            r.den_ = P::divexact(r.den_, g2);
        }
        r.normalize_units();
        return r;
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return a + (-b);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero() || b.is_zero()) return RatFunc();
        if (a.is_one()) return b;
        if (b.is_one()) return a;
        // Cross-reduce before multiplying to keep intermediates small.
        RatFunc x(a.num_, b.den_);
        RatFunc y(b.num_, a.den_);
        RatFunc r;
        r.num_ = x.num_ * y.num_;
        r.den_ = x.den_ * y.den_;
        r.normalize_units();
        return r;
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw std::domain_error("division by zero value");
        RatFunc inv;
        inv.num_ = b.den_;
        inv.den_ = b.num_;
        inv.normalize_units();
        return a * inv;
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    RatFunc pow(long n) const {
        if (n == 0) return RatFunc(Rat(1));
        RatFunc base = *this;
        if (n < 0) {
            base = RatFunc(Rat(1)) / base;
            n = -n;
        }
        RatFunc r;
        r.num_ = base.num_.pow(static_cast<unsigned>(n));
        r.den_ = base.den_.pow(static_cast<unsigned>(n));
        // Powers of a canonical form stay reduced; only units need care.
        r.normalize_units();
        return r;
    }

    std::string str(const std::array<std::string, NV>& names) const {
        if (den_.is_one()) return num_.str(names);
        std::string n = num_.str(names);
        std::string d = den_.str(names);
        bool wrap_n = num_.term_count() > 1;
        bool wrap_d = den_.term_count() > 1 || !den_.is_constant() ||
                      den_.constant_value() < 0;
        std::string out = wrap_n ? "(" + n + ")" : n;
        out += "/";
        out += wrap_d ? "(" + d + ")" : d;
        return out;
    }

  private:
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = P(Rat(1));
            return;
        }
        // A single-term side makes the gcd a unit, which the unit pass
        // absorbs without a division.
        if (num_.is_monomial() || den_.is_monomial()) {
            normalize_units();
            return;
        }
        P g = poly_gcd(num_, den_);
        if (!g.is_one()) {
            num_ = P::divexact(num_.laurent_normalized(), g) *
                   unit_of(num_);
            den_ = P::divexact(den_.laurent_normalized(), g) *
                   unit_of(den_);
        }
        normalize_units();
    }

    // Monomial carrying the Laurent offset of p.
    static P unit_of(const P& p) {
        Mono<NV> m;
        for (int v = 0; v < NV; ++v) m.e[v] = p.min_exp(v);
        return P::monomial(m);
    }

    void normalize_units() {
        if (num_.is_zero()) {
            den_ = P(Rat(1));
            return;
        }
        Mono<NV> shift;
        for (int v = 0; v < NV; ++v) shift.e[v] = -den_.min_exp(v);
        num_ = num_.shifted(shift);
        den_ = den_.shifted(shift);
        Rat c = den_.content();
        if (den_.leading().second < 0) c = -c;
        if (c != 1) {
            den_.scale(Rat(1) / c);
            num_.scale(Rat(1) / c);
        }
    }

    P num_, den_;
};

}  // namespace qvir
