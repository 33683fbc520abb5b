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

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qvir/rational.hpp"

namespace qvir {

// Exponent vector of a Laurent monomial. Slot 0 is the strongest in the
// lexicographic term order used everywhere (canonical printing, leading
// terms for division, gcd).
template <int NV>
struct Mono {
    std::array<int32_t, NV> e{};

    bool operator==(const Mono&) const = default;
    bool operator<(const Mono& o) const {
        for (int i = 0; i < NV; ++i) {
            if (e[i] != o.e[i]) return e[i] < o.e[i];
        }
        return false;
    }
    Mono operator+(const Mono& o) const {
        Mono r;
        for (int i = 0; i < NV; ++i) r.e[i] = e[i] + o.e[i];
        return r;
    }
    Mono operator-(const Mono& o) const {
        Mono r;
        for (int i = 0; i < NV; ++i) r.e[i] = e[i] - o.e[i];
        return r;
    }
    bool divides(const Mono& o) const {
        for (int i = 0; i < NV; ++i) {
            if (e[i] > o.e[i]) return false;
        }
        return true;
    }
    bool is_zero() const {
        for (int i = 0; i < NV; ++i) {
            if (e[i] != 0) return false;
        }
        return true;
    }
};

// Sparse Laurent polynomial with exact rational coefficients.
template <int NV>
class MultiPoly {
  public:
    using M = Mono<NV>;
    using TermMap = std::map<M, Rat>;

    MultiPoly() = default;
    // Incoming coefficients are reduced before storage: mpq_class keeps
    // integer-pair constructions verbatim, and a stored 0/2 both defeats the
    // zero pruning and breaks coefficient comparisons later.
    explicit MultiPoly(Rat c) {
        c.canonicalize();
        if (c != 0) terms_[M{}] = std::move(c);
    }
    static MultiPoly monomial(const M& m, Rat c = Rat(1)) {
        c.canonicalize();
        MultiPoly p;
        if (c != 0) p.terms_[m] = std::move(c);
        return p;
    }
    static MultiPoly variable(int v, int32_t power = 1) {
        M m;
        m.e[v] = power;
        return monomial(m);
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero());
    }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first.is_zero() &&
               terms_.begin()->second == 1;
    }
    bool is_monomial() const { return terms_.size() == 1; }
    size_t term_count() const { return terms_.size(); }

    // Constant term view; zero polynomial reads as zero.
    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        assert(is_constant());
        return terms_.begin()->second;
    }

    bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }

    MultiPoly operator-() const {
        MultiPoly r;
        for (auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }
    MultiPoly& operator+=(const MultiPoly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        MultiPoly r;
        if (a.is_zero() || b.is_zero()) return r;
        for (auto& [ma, ca] : a.terms_) {
            for (auto& [mb, cb] : b.terms_) {
                r.add_term(ma + mb, ca * cb);
            }
        }
        return r;
    }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    MultiPoly& scale(Rat c) {
        c.canonicalize();
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }
    MultiPoly scaled(const Rat& c) const {
        MultiPoly r = *this;
        r.scale(c);
        return r;
    }
    MultiPoly shifted(const M& by) const {
        MultiPoly r;
        for (auto& [m, c] : terms_) r.terms_[m + by] = c;
        return r;
    }

    MultiPoly pow(unsigned n) const {
        MultiPoly r{Rat(1)};
        MultiPoly base = *this;
        while (n) {
            if (n & 1) r *= base;
            base = (n >>= 1) ? base * base : base;
        }
        return r;
    }

    // Lexicographically largest term.
    const std::pair<const M, Rat>& leading() const {
        assert(!terms_.empty());
        return *terms_.rbegin();
    }

    int32_t min_exp(int v) const {
        assert(!terms_.empty());
        int32_t r = terms_.begin()->first.e[v];
        for (auto& [m, c] : terms_) r = std::min(r, m.e[v]);
        return r;
    }
    int32_t max_exp(int v) const {
        assert(!terms_.empty());
        int32_t r = terms_.begin()->first.e[v];
        for (auto& [m, c] : terms_) r = std::max(r, m.e[v]);
        return r;
    }
    // Degree spread of variable v; 0 when v does not occur.
    int32_t spread(int v) const {
        if (terms_.empty()) return 0;
        return max_exp(v) - min_exp(v);
    }

    // Multiply by the monomial that makes every variable's least exponent 0.
    MultiPoly laurent_normalized() const {
        if (terms_.empty()) return *this;
        M shift;
        for (int v = 0; v < NV; ++v) shift.e[v] = -min_exp(v);
        return shifted(shift);
    }

    // Rational c > 0 with (*this)/c integer-primitive. Sign is not absorbed.
    Rat content() const {
        if (terms_.empty()) return Rat(1);
        Int num_gcd = 0, den_lcm = 1;
        for (auto& [m, c] : terms_) {
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(),
                    c.get_num().get_mpz_t());
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                    c.get_den().get_mpz_t());
        }
        Rat r(num_gcd, den_lcm);
        r.canonicalize();
        if (r < 0) r = -r;
        return r;
    }

    // Integer-primitive associate with positive leading coefficient.
    MultiPoly primitive() const {
        if (terms_.empty()) return *this;
        Rat c = content();
        if (leading().second < 0) c = -c;
        MultiPoly r = *this;
        for (auto& [m, v] : r.terms_) v /= c;
        return r;
    }

    // Exact division; asserts that no remainder is left. Inputs must be
    // honest polynomials (no negative exponents), which makes the leading
    // term of an exact quotient divisible step by step.
    static MultiPoly divexact(const MultiPoly& a, const MultiPoly& b) {
        assert(!b.is_zero());
        MultiPoly rem = a, quot;
        auto& [lbm, lbc] = b.leading();
        while (!rem.is_zero()) {
            auto& [lrm, lrc] = rem.leading();
            assert(lbm.divides(lrm));
            M qm = lrm - lbm;
            Rat qc = lrc / lbc;
            quot.add_term(qm, qc);
            rem -= b.shifted(qm).scaled(qc);
        }
        return quot;
    }

    std::string str(const std::array<std::string, NV>& names) const;

  private:
    void add_term(const M& m, const Rat& c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (c != 0) terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    TermMap terms_;
};

namespace detail {

// View of p as a dense univariate polynomial in variable v whose
// coefficients are polynomials with zero exponent in v. Laurent inputs must
// be normalized (min exponent of v equal to 0) before calling.
template <int NV>
std::vector<MultiPoly<NV>> uni_view(const MultiPoly<NV>& p, int v) {
    assert(!p.is_zero());
    assert(p.min_exp(v) == 0);
    std::vector<MultiPoly<NV>> coeffs(static_cast<size_t>(p.max_exp(v)) + 1);
    for (auto& [m, c] : p.terms()) {
        Mono<NV> m0 = m;
        int32_t d = m0.e[v];
        m0.e[v] = 0;
        coeffs[d] += MultiPoly<NV>::monomial(m0, c);
    }
    return coeffs;
}

template <int NV>
MultiPoly<NV> from_uni(const std::vector<MultiPoly<NV>>& coeffs, int v) {
    MultiPoly<NV> r;
    for (size_t d = 0; d < coeffs.size(); ++d) {
        Mono<NV> shift;
        shift.e[v] = static_cast<int32_t>(d);
        r += coeffs[d].shifted(shift);
    }
    return r;
}

template <int NV>
int uni_deg(const std::vector<MultiPoly<NV>>& c) {
    for (int d = static_cast<int>(c.size()) - 1; d >= 0; --d) {
        if (!c[d].is_zero()) return d;
    }
    return -1;
}

// Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b in the shared
// univariate view. The full power of lc(b) is always applied so that the
// subresultant divisions downstream stay exact.
template <int NV>
std::vector<MultiPoly<NV>> uni_prem(std::vector<MultiPoly<NV>> a,
                                    const std::vector<MultiPoly<NV>>& b) {
    int db = uni_deg(b);
    assert(db >= 0);
    const MultiPoly<NV>& lb = b[db];
    int da = uni_deg(a);
    int need = da - db + 1;
    int used = 0;
    while (da >= db) {
        MultiPoly<NV> la = a[da];
        for (int i = 0; i <= da; ++i) a[i] *= lb;
        ++used;
        for (int i = 0; i <= db; ++i) {
            a[da - db + i] -= la * b[i];
        }
        int nda = da - 1;
        while (nda >= 0 && a[nda].is_zero()) --nda;
        a.resize(nda + 1);
        da = nda;
    }
    for (; used < need; ++used) {
        for (auto& c : a) c *= lb;
    }
    return a;
}

}  // namespace detail

template <int NV>
MultiPoly<NV> poly_gcd(const MultiPoly<NV>& a_in, const MultiPoly<NV>& b_in);

namespace detail {

template <int NV>
MultiPoly<NV> coeff_gcd(const std::vector<MultiPoly<NV>>& cs) {
    MultiPoly<NV> g;
    for (auto& c : cs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.primitive() : poly_gcd(g, c);
        if (g.is_one()) break;
    }
    return g;
}

}  // namespace detail

// Gcd up to monomial and rational units; the result is Laurent-normalized,
// integer-primitive, with positive leading coefficient. Subresultant PRS on
// the first occurring variable, contents handled recursively.
template <int NV>
MultiPoly<NV> poly_gcd(const MultiPoly<NV>& a_in, const MultiPoly<NV>& b_in) {
    if (!a_in.is_zero() && !b_in.is_zero() &&
        (a_in.is_monomial() || b_in.is_monomial())) {
        return MultiPoly<NV>{Rat(1)};
    }
    if (a_in == b_in) return a_in.laurent_normalized().primitive();
    MultiPoly<NV> a = a_in.laurent_normalized().primitive();
    MultiPoly<NV> b = b_in.laurent_normalized().primitive();
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_monomial() || b.is_monomial()) return MultiPoly<NV>{Rat(1)};

    int v = -1;
    for (int i = 0; i < NV; ++i) {
        if (a.spread(i) > 0 || b.spread(i) > 0) {
            v = i;
            break;
        }
    }
    if (v < 0) return MultiPoly<NV>{Rat(1)};

    auto ua = detail::uni_view(a, v);
    auto ub = detail::uni_view(b, v);
    MultiPoly<NV> ca = detail::coeff_gcd(ua);
    MultiPoly<NV> cb = detail::coeff_gcd(ub);
    for (auto& c : ua) {
        if (!c.is_zero()) c = MultiPoly<NV>::divexact(c, ca);
    }
    for (auto& c : ub) {
        if (!c.is_zero()) c = MultiPoly<NV>::divexact(c, cb);
    }
    MultiPoly<NV> cont = poly_gcd(ca, cb);

    auto* p0 = &ua;
    auto* p1 = &ub;
    if (detail::uni_deg(ua) < detail::uni_deg(ub)) std::swap(p0, p1);

    MultiPoly<NV> g{Rat(1)}, h{Rat(1)};
    std::vector<MultiPoly<NV>> cur0 = *p0, cur1 = *p1;
    while (true) {
        int d0 = detail::uni_deg(cur0);
        int d1 = detail::uni_deg(cur1);
        int delta = d0 - d1;
        auto rem = detail::uni_prem(cur0, cur1);
        if (detail::uni_deg(rem) < 0) break;
        if (detail::uni_deg(rem) == 0) {
            // Nonzero constant remainder in v: primitive parts are coprime.
            cur1.assign(1, MultiPoly<NV>{Rat(1)});
            break;
        }
        MultiPoly<NV> divisor = g * h.pow(static_cast<unsigned>(delta));
        cur0 = cur1;
        for (auto& c : rem) {
            if (!c.is_zero()) c = MultiPoly<NV>::divexact(c, divisor);
        }
        cur1 = rem;
        g = cur0[detail::uni_deg(cur0)];
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            h = MultiPoly<NV>::divexact(g.pow(static_cast<unsigned>(delta)),
                                        h.pow(static_cast<unsigned>(delta - 1)));
        }
    }
    MultiPoly<NV> prim = detail::from_uni(cur1, v);
    MultiPoly<NV> pc = detail::coeff_gcd(detail::uni_view(prim, v));
    prim = MultiPoly<NV>::divexact(prim, pc);
    return (cont * prim).primitive();
}

template <int NV>
std::string MultiPoly<NV>::str(const std::array<std::string, NV>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    // Highest term first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rat ac = c < 0 ? Rat(-c) : c;
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        bool unit = m.is_zero();
        if (ac != 1 || unit) {
            out << rat_str(ac);
            if (!unit) out << "*";
        }
        bool firstv = true;
        for (int v = 0; v < NV; ++v) {
            if (m.e[v] == 0) continue;
            if (!firstv) out << "*";
            firstv = false;
            out << names[v];
            if (m.e[v] != 1) out << "^" << m.e[v];
        }
        first = false;
    }
    return out.str();
}

}  // namespace qvir
