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
#include <atomic>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qvir/field.hpp"
#include "qvir/fock.hpp"
#include "qvir/linalg.hpp"
#include "qvir/rings.hpp"
#include "qvir/scalar.hpp"
#include "qvir/vertex.hpp"

namespace qvir {

// Family indexes of the deformed (and transformed) oscillator algebras.
inline constexpr int OSC_WEIGHT = 0;  // paired against the level-shifted form
inline constexpr int OSC_DOWN = 1;    // charged family, zero mode -2*charge
inline constexpr int OSC_UP = 2;      // charged family, zero mode +2*charge

// Family indexes of the classical three-family algebra.
inline constexpr int OSC_LOWER = 0;  // symplectic pair, creates at n <= 0
inline constexpr int OSC_UPPER = 1;  // symplectic pair, creates at n < 0
inline constexpr int OSC_BOSON = 2;  // weight boson

// Family index of the single-boson algebra used for coset-space checks.
inline constexpr int OSC_COSET_BOSON = 0;

namespace detail {

// q - 1/q, the unit normalizing every exponential coefficient below.
template <class Ring>
typename Ring::S qq_unit(const Ring& ring) {
    return ring.qp(0, 1) - ring.qp(0, -1);
}

// Creation degree carried by a single basis key.
inline long key_degree(const FockKey& k) {
    long d = 0;
    for (const auto& op : k.mono) {
        if (op.n < 0) d -= op.n;
    }
    return d;
}

// Unit-coefficient states over a list of basis keys.
template <class Ring>
std::vector<FockVector<typename Ring::S>> unit_states(
    const Ring& ring, const std::vector<FockKey>& keys) {
    std::vector<FockVector<typename Ring::S>> out;
    out.reserve(keys.size());
    for (const auto& k : keys) {
        out.push_back(FockVector<typename Ring::S>{{k, ring.integer(1)}});
    }
    return out;
}

// Monomial keys of creation degree 0..degree over the given families.
inline std::vector<FockKey> keys_up_to(const std::vector<int>& fams,
                                       int weight, long degree, int charge) {
    std::vector<FockKey> out;
    for (long d = 0; d <= degree; ++d) {
        auto layer = make_space(fams, weight, d, charge);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

// Coefficient-free rendering of a basis state for failure reports.
template <class Ring>
std::string basis_label(const OscillatorAlgebra<Ring>& alg,
                        const FockVector<typename Ring::S>& st) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : st) {
        (void)c;
        if (!first) os << " + ";
        first = false;
        os << "|wt=" << k.weight << ",ch=" << k.charge;
        for (const auto& op : k.mono) {
            os << "," << alg.family(op.fam).name << "(" << op.n << ")";
        }
        os << ">";
    }
    return first ? "0" : os.str();
}

// [x_m, y_n] applied to a state.
template <class Ring>
FockVector<typename Ring::S> field_comm(const Ring& ring,
                                        const Field<Ring>& x, long m,
                                        const Field<Ring>& y, long n,
                                        const FockVector<typename Ring::S>& st) {
    return fv_clean(ring, fv_sub(x.mode(m, y.mode(n, st)),
                                 y.mode(n, x.mode(m, st))));
}

// Sum of an extra coefficient series into one slot of a mode table.
template <class S>
void add_series(std::map<int, std::function<S(long)>>& table, int fam,
                std::function<S(long)> extra) {
    auto it = table.find(fam);
    if (it == table.end()) {
        table[fam] = std::move(extra);
        return;
    }
    auto prev = it->second;
    it->second = [prev, extra](long n) { return prev(n) + extra(n); };
}

// Truncated power-series kernels on raw coefficient vectors. All vectors
// share the convention coeffs[m] = coefficient of z^m.

template <class Ring>
std::vector<typename Ring::S> series_mul(
    const Ring& ring, const std::vector<typename Ring::S>& a,
    const std::vector<typename Ring::S>& b) {
    using S = typename Ring::S;
    std::size_t n = std::min(a.size(), b.size());
    std::vector<S> out(n, ring.integer(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; i + j < n && j < b.size(); ++j) {
            out[i + j] = out[i + j] + a[i] * b[j];
        }
    }
    return out;
}

template <class Ring>
std::vector<typename Ring::S> series_inv(
    const Ring& ring, const std::vector<typename Ring::S>& a) {
    using S = typename Ring::S;
    if (a.empty() || ring.is_zero(a[0])) {
        throw std::domain_error("series inverse needs a unit constant term");
    }
    std::vector<S> out(a.size(), ring.integer(0));
    out[0] = ring.integer(1) / a[0];
    for (std::size_t m = 1; m < a.size(); ++m) {
        S acc = ring.integer(0);
        for (std::size_t j = 1; j <= m && j < a.size(); ++j) {
            acc = acc + a[j] * out[m - j];
        }
        out[m] = ring.integer(0) - acc / a[0];
    }
    return out;
}

// Argument dilation z -> (t^{a2} q^{b}) z.
template <class Ring>
std::vector<typename Ring::S> series_dilate(
    const Ring& ring, const std::vector<typename Ring::S>& a, long a2,
    long b) {
    using S = typename Ring::S;
    std::vector<S> out = a;
    for (std::size_t m = 1; m < out.size(); ++m) {
        out[m] = out[m] * ring.qp(a2 * static_cast<long>(m),
                                  b * static_cast<long>(m));
    }
    return out;
}

// Coefficients of (num0 + num1 z)/(1 - den1 z) to the requested order.
template <class Ring>
std::vector<typename Ring::S> linear_fraction(const Ring& ring,
                                              const typename Ring::S& num0,
                                              const typename Ring::S& num1,
                                              const typename Ring::S& den1,
                                              int order) {
    using S = typename Ring::S;
    std::vector<S> out(static_cast<std::size_t>(order) + 1, ring.integer(0));
    out[0] = num0;
    S tail = num1 + num0 * den1;
    S pw = ring.integer(1);
    for (int m = 1; m <= order; ++m) {
        out[static_cast<std::size_t>(m)] = tail * pw;
        pw = pw * den1;
    }
    return out;
}

// Rank-one structure kernels feeding the relation suites. `ratio_kernel` is
// the Cartan conjugation kernel, `forward_kernel` the raising-side exchange
// series at the standard exponent choice.

template <class Ring>
std::vector<typename Ring::S> ratio_kernel(const Ring& ring, int order) {
    return linear_fraction(ring, ring.qp(0, -2),
                           ring.integer(0) - ring.integer(1), ring.qp(0, -2),
                           order);
}

template <class Ring>
std::vector<typename Ring::S> forward_kernel(const Ring& ring, int order) {
    return linear_fraction(ring, ring.integer(1),
                           ring.integer(0) - ring.integer(1), ring.qp(0, 2),
                           order);
}

// Kernel of the mutual braiding of the two Cartan halves.
template <class Ring>
std::vector<typename Ring::S> cartan_braid_kernel(const Ring& ring,
                                                  int order) {
    auto g = ratio_kernel(ring, order);
    return series_mul(ring, series_dilate(ring, g, 2, 0),
                      series_inv(ring, series_dilate(ring, g, -2, 0)));
}

// Kernel of the Cartan conjugation of the dressed raising current.
template <class Ring>
std::vector<typename Ring::S> mixed_kernel(const Ring& ring, int order) {
    auto g = ratio_kernel(ring, order);
    auto f = forward_kernel(ring, order);
    auto m = series_mul(ring, series_inv(ring, series_dilate(ring, g, -2, 0)),
                        series_mul(ring, series_dilate(ring, f, 2, 0),
                                   series_inv(ring,
                                              series_dilate(ring, f, -2, 0))));
    return m;
}

// Kernel of the mutual braiding of the two dressed Cartan halves.
template <class Ring>
std::vector<typename Ring::S> dressed_braid_kernel(const Ring& ring,
                                                   int order) {
    auto m = mixed_kernel(ring, order);
    return series_mul(ring, series_dilate(ring, m, -2, 0),
                      series_inv(ring, series_dilate(ring, m, 2, 0)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Oscillator algebras

// Three-family deformed algebra: the weight family pairs to
// [2r][(k+2)r]/r, the charged families to -[2r]^2/r and +[2r]^2/r, and the
// zero modes read (weight, -2*charge, +2*charge).
template <class Ring>
OscillatorAlgebra<Ring> deformed_oscillators(const Ring& ring) {
    using S = typename Ring::S;
    OscillatorAlgebra<Ring> alg(ring);

    OscillatorSpec<S> wt;
    wt.name = "a";
    wt.kind = OscKind::EigenWeight;
    wt.pairing = [ring](long r) {
        return ring.qi(0, 2 * r) * ring.qi(2 * r, 2 * r) / ring.integer(r);
    };
    alg.add_family(wt);

    OscillatorSpec<S> dn;
    dn.name = "b";
    dn.kind = OscKind::EigenCharge;
    dn.charge_step = -2;
    dn.pairing = [ring](long r) {
        S u = ring.qi(0, 2 * r);
        return ring.integer(0) - u * u / ring.integer(r);
    };
    alg.add_family(dn);

    OscillatorSpec<S> up;
    up.name = "c";
    up.kind = OscKind::EigenCharge;
    up.charge_step = 2;
    up.pairing = [ring](long r) {
        S u = ring.qi(0, 2 * r);
        return u * u / ring.integer(r);
    };
    alg.add_family(up);

    return alg;
}

// Pairing of the transformed weight family, written without the resonant
// denominator: [(k+2)r][r](t^{2r}q^r + t^{-2r}q^{-r})/r.
template <class Ring>
typename Ring::S transformed_weight_pairing(const Ring& ring, long r) {
    return ring.qi(2 * r, 2 * r) * ring.qi(0, r) *
           (ring.qp(2 * r, r) + ring.qp(-2 * r, -r)) / ring.integer(r);
}

// Deformed algebra in the transformed basis: only the weight pairing
// changes; the charged families and zero modes keep their shape.
template <class Ring>
OscillatorAlgebra<Ring> transformed_oscillators(const Ring& ring) {
    using S = typename Ring::S;
    OscillatorAlgebra<Ring> alg(ring);

    OscillatorSpec<S> wt;
    wt.name = "abar";
    wt.kind = OscKind::EigenWeight;
    wt.pairing = [ring](long r) { return transformed_weight_pairing(ring, r); };
    alg.add_family(wt);

    OscillatorSpec<S> dn;
    dn.name = "bbar";
    dn.kind = OscKind::EigenCharge;
    dn.charge_step = -2;
    dn.pairing = [ring](long r) {
        S u = ring.qi(0, 2 * r);
        return ring.integer(0) - u * u / ring.integer(r);
    };
    alg.add_family(dn);

    OscillatorSpec<S> up;
    up.name = "c";
    up.kind = OscKind::EigenCharge;
    up.charge_step = 2;
    up.pairing = [ring](long r) {
        S u = ring.qi(0, 2 * r);
        return u * u / ring.integer(r);
    };
    alg.add_family(up);

    return alg;
}

// Classical three-family algebra: a symplectic pair with [w_n, W_{-n}] = 1
// and a weight boson with [a_n, a_{-n}] = 2(k+2)n. The weight entry of a key
// evaluates to base_weight + entry.
inline OscillatorAlgebra<ClassicalRing> classical_oscillators(
    const ClassicalScalar& base_weight, const ClassicalScalar& level) {
    ClassicalRing ring;
    if (ring.is_zero(level + cl_int(2))) {
        throw std::domain_error(
            "classical oscillators need level + 2 invertible");
    }
    OscillatorAlgebra<ClassicalRing> alg(ring);

    OscillatorSpec<ClassicalScalar> lo;
    lo.name = "w";
    lo.kind = OscKind::PairLower;
    lo.partner = OSC_UPPER;
    lo.pairing = [](long) { return cl_int(1); };
    alg.add_family(lo);

    OscillatorSpec<ClassicalScalar> up;
    up.name = "W";
    up.kind = OscKind::PairUpper;
    up.partner = OSC_LOWER;
    up.pairing = [](long) { return cl_int(-1); };
    alg.add_family(up);

    OscillatorSpec<ClassicalScalar> bo;
    bo.name = "alpha";
    bo.kind = OscKind::EigenWeight;
    bo.pairing = [level](long n) {
        return cl_int(2) * (level + cl_int(2)) * cl_int(n);
    };
    alg.add_family(bo);

    alg.set_weight_value(
        [base_weight](int w) { return base_weight + cl_int(w); });
    return alg;
}

// Single weight boson on the coset space, same pairing and weight handling.
inline OscillatorAlgebra<ClassicalRing> classical_weight_oscillators(
    const ClassicalScalar& base_weight, const ClassicalScalar& level) {
    ClassicalRing ring;
    if (ring.is_zero(level + cl_int(2))) {
        throw std::domain_error(
            "classical oscillators need level + 2 invertible");
    }
    OscillatorAlgebra<ClassicalRing> alg(ring);
    OscillatorSpec<ClassicalScalar> bo;
    bo.name = "alpha";
    bo.kind = OscKind::EigenWeight;
    bo.pairing = [level](long n) {
        return cl_int(2) * (level + cl_int(2)) * cl_int(n);
    };
    alg.add_family(bo);
    alg.set_weight_value(
        [base_weight](int w) { return base_weight + cl_int(w); });
    return alg;
}

// ---------------------------------------------------------------------------
// Deformed vertex-operator currents

// Positive Cartan half: an annihilation exponential supported at modes
// >= 0 whose zero mode reads q^{weight - 2*charge}.
template <class Ring>
Current<Ring> cartan_plus_current(const Ring& ring) {
    using S = typename Ring::S;
    S qq = detail::qq_unit(ring);
    VertexOperatorDatum<Ring> d(ring);
    d.cp[OSC_WEIGHT] = [ring, qq](long n) { return qq * ring.qp(0, n); };
    d.cp[OSC_DOWN] = [ring, qq](long n) { return qq * ring.qp(n, n); };
    d.zq = [ring](int w, int c) { return ring.qp(0, w - 2 * c); };
    return {d};
}

// Negative Cartan half: a creation exponential supported at modes <= 0
// with the inverse zero mode.
template <class Ring>
Current<Ring> cartan_minus_current(const Ring& ring) {
    using S = typename Ring::S;
    S qq = detail::qq_unit(ring);
    VertexOperatorDatum<Ring> d(ring);
    d.cm[OSC_WEIGHT] = [ring, qq](long m) {
        return ring.integer(0) - qq * ring.qp(0, -3 * m);
    };
    d.cm[OSC_DOWN] = [ring, qq](long m) {
        return ring.integer(0) - qq * ring.qp(-3 * m, -3 * m);
    };
    d.zq = [ring](int w, int c) { return ring.qp(0, 2 * c - w); };
    return {d};
}

// Raising current: difference of two exponentials in the charged families,
// lowering the charge by one unit.
template <class Ring>
Current<Ring> raising_current(const Ring& ring) {
    using S = typename Ring::S;
    S qq = detail::qq_unit(ring);
    Current<Ring> cur;
    for (int e : {1, -1}) {
        VertexOperatorDatum<Ring> d(ring);
        d.pref = ring.integer(-e) / qq;
        d.cm[OSC_UP] = [ring, e](long m) {
            return ring.integer(0) -
                   ring.qp(-2 * m, (e - 2) * m) / ring.qi(0, 2 * m);
        };
        d.cm[OSC_DOWN] = [ring](long m) {
            return ring.integer(0) -
                   ring.qp(0, m) * ring.qp(-2 * m, -2 * m) / ring.qi(0, 2 * m);
        };
        d.cp[OSC_UP] = [ring, e](long n) {
            return ring.qp(2 * n, -(e - 2) * n) / ring.qi(0, 2 * n);
        };
        d.cp[OSC_DOWN] = [ring](long n) {
            return ring.qp(0, n) * ring.qp(2 * n, 2 * n) / ring.qi(0, 2 * n);
        };
        d.zq = [ring, e](int, int c) { return ring.qp(0, -e * c); };
        d.dcharge = -1;
        cur.push_back(d);
    }
    return cur;
}

// Lowering current: difference of two exponentials involving all three
// families, raising the charge by one unit.
template <class Ring>
Current<Ring> lowering_current(const Ring& ring) {
    using S = typename Ring::S;
    S qq = detail::qq_unit(ring);
    Current<Ring> cur;
    for (int e : {1, -1}) {
        VertexOperatorDatum<Ring> d(ring);
        d.pref = ring.integer(e) / qq;
        d.cm[OSC_WEIGHT] = [ring, e](long m) {
            return (ring.qp(-m, -m) * ring.qp(2 * e * m, (2 * e - 2) * m) -
                    ring.qp(m, m) * ring.qp(0, -2 * m)) /
                   ring.qi(2 * m, 2 * m);
        };
        d.cp[OSC_WEIGHT] = [ring, e](long n) {
            return (ring.qp(n, n) * ring.qp(0, 2 * n) -
                    ring.qp(-n, -n) * ring.qp(-2 * e * n, -(2 * e - 2) * n)) /
                   ring.qi(2 * n, 2 * n);
        };
        d.cm[OSC_DOWN] = [ring, e](long m) {
            return ring.qp(0, -m) * ring.qp(2 * (e - 1) * m, 2 * (e - 1) * m) /
                   ring.qi(0, 2 * m);
        };
        d.cp[OSC_DOWN] = [ring, e](long n) {
            return ring.integer(0) -
                   ring.qp(0, -n) *
                       ring.qp(-2 * (e - 1) * n, -2 * (e - 1) * n) /
                       ring.qi(0, 2 * n);
        };
        d.cm[OSC_UP] = [ring, e](long m) {
            S be = ring.qp(2 * (e - 1) * m, 2 * (e - 1) * m);
            S bp = ring.qp(-2 * m, -2 * m);
            return (ring.qi(2 * m, m) * be + ring.qi(0, m) * bp) /
                   (ring.qi(0, 2 * m) * ring.qi(2 * m, 2 * m));
        };
        d.cp[OSC_UP] = [ring, e](long n) {
            S bei = ring.qp(-2 * (e - 1) * n, -2 * (e - 1) * n);
            S bpi = ring.qp(2 * n, 2 * n);
            return ring.integer(0) -
                   (ring.qi(2 * n, n) * bei + ring.qi(0, n) * bpi) /
                       (ring.qi(0, 2 * n) * ring.qi(2 * n, 2 * n));
        };
        d.zq = [ring, e](int w, int c) { return ring.qp(0, e * (w - c)); };
        d.dcharge = 1;
        cur.push_back(d);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Exponent-series solutions and the dressed (Coxeter) currents

// One solution pair of the quadratic exponent equation: the value at order
// r > 0 of the positive series and of the negative series. A null function
// stands for the identically-zero side.
template <class Ring>
struct ExponentSeriesSolution {
    std::function<typename Ring::S(long)> pos;
    std::function<typename Ring::S(long)> neg;
};

// Value of the standard positive-side exponent series at order r; zero for
// r < 0 by the defining choice.
template <class Ring>
typename Ring::S nr_term(const Ring& ring, long r) {
    if (r == 0) throw std::invalid_argument("exponent series has no order 0");
    if (r < 0) return ring.integer(0);
    return ring.rational(rat_of(-1, r)) * ring.qp(r, 0) *
           (ring.qp(0, 2 * r) - ring.integer(1));
}

// The standard solution: negative side identically zero.
template <class Ring>
ExponentSeriesSolution<Ring> standard_exponent_solution(const Ring& ring) {
    ExponentSeriesSolution<Ring> sol;
    sol.pos = [ring](long r) { return nr_term(ring, r); };
    sol.neg = nullptr;
    return sol;
}

// Second solution branch: prescribe the negative side and solve the defining
// equation linearly for the positive side at each order.
template <class Ring>
ExponentSeriesSolution<Ring> sampled_exponent_solution(
    const Ring& ring, std::function<typename Ring::S(long)> neg) {
    ExponentSeriesSolution<Ring> sol;
    sol.neg = neg;
    sol.pos = [ring, neg](long r) {
        using S = typename Ring::S;
        S s = neg(r);
        S rhs = ring.rational(rat_of(1, r)) *
                (ring.qp(0, 2 * r) - ring.integer(1));
        S num = s * ring.qp(-r, 0) - rhs;
        S den = ring.qp(-r, 0) +
                s * ring.integer(r) * (ring.qp(2 * r, 0) - ring.qp(-2 * r, 0)) /
                    (ring.qp(0, 2 * r) - ring.qp(0, -2 * r));
        return num / den;
    };
    return sol;
}

// Residual of the defining exponent equation at order r > 0:
//   (n^{-r} - n^{r}) q^{-kr/2}
//   - n^{-r} n^{r} r (q^{kr} - q^{-kr})/(q^{2r} - q^{-2r})
//   - (1/r)(q^{2r} - 1).
template <class Ring>
typename Ring::S exponent_solution_residual(
    const Ring& ring, const ExponentSeriesSolution<Ring>& sol, long r) {
    using S = typename Ring::S;
    S pos = sol.pos ? sol.pos(r) : ring.integer(0);
    S neg = sol.neg ? sol.neg(r) : ring.integer(0);
    S lhs = (neg - pos) * ring.qp(-r, 0) -
            neg * pos * ring.integer(r) *
                (ring.qp(2 * r, 0) - ring.qp(-2 * r, 0)) /
                (ring.qp(0, 2 * r) - ring.qp(0, -2 * r));
    S rhs = ring.rational(rat_of(1, r)) *
            (ring.qp(0, 2 * r) - ring.integer(1));
    return lhs - rhs;
}

// Standard exponent-series values 1..r_max over the symbolic scalar field.
inline std::vector<Scalar> nr_solution(long r_max) {
    QtRing ring;
    std::vector<Scalar> out;
    out.reserve(static_cast<std::size_t>(r_max));
    for (long r = 1; r <= r_max; ++r) out.push_back(nr_term(ring, r));
    return out;
}

namespace detail {

// Creation-side Cartan content: the level-shifted form has coefficients
// q^{-3s} and t^{-3s} q^{-3s} on the weight and down families; the
// annihilation side carries q^{s} and t^{s} q^{s}.
template <class Ring>
typename Ring::S cartan_weight_pos(const Ring& ring, long s) {
    return ring.qp(0, s);
}
template <class Ring>
typename Ring::S cartan_down_pos(const Ring& ring, long s) {
    return ring.qp(s, s);
}
template <class Ring>
typename Ring::S cartan_weight_neg(const Ring& ring, long s) {
    return ring.qp(0, -3 * s);
}
template <class Ring>
typename Ring::S cartan_down_neg(const Ring& ring, long s) {
    return ring.qp(-3 * s, -3 * s);
}

// Dressing exponentials attach the exponent series through r/[2r] times the
// Cartan content, with the direction fixed by the current being dressed.
template <class Ring>
void dress_raising(Current<Ring>& cur, const Ring& ring,
                   const ExponentSeriesSolution<Ring>& sol) {
    using S = typename Ring::S;
    auto pos = sol.pos;
    auto neg = sol.neg;
    for (auto& d : cur) {
        if (pos) {
            add_series<S>(d.cp, OSC_WEIGHT, [ring, pos](long n) {
                return pos(n) * ring.integer(n) * cartan_weight_pos(ring, n) /
                       ring.qi(0, 2 * n);
            });
            add_series<S>(d.cp, OSC_DOWN, [ring, pos](long n) {
                return pos(n) * ring.integer(n) * cartan_down_pos(ring, n) /
                       ring.qi(0, 2 * n);
            });
        }
        if (neg) {
            add_series<S>(d.cm, OSC_WEIGHT, [ring, neg](long m) {
                return neg(m) * ring.integer(m) * cartan_weight_neg(ring, m) /
                       ring.qi(0, 2 * m);
            });
            add_series<S>(d.cm, OSC_DOWN, [ring, neg](long m) {
                return neg(m) * ring.integer(m) * cartan_down_neg(ring, m) /
                       ring.qi(0, 2 * m);
            });
        }
    }
}

template <class Ring>
void dress_lowering(Current<Ring>& cur, const Ring& ring,
                    const ExponentSeriesSolution<Ring>& sol) {
    using S = typename Ring::S;
    auto pos = sol.pos;
    auto neg = sol.neg;
    for (auto& d : cur) {
        if (pos) {
            add_series<S>(d.cp, OSC_WEIGHT, [ring, pos](long n) {
                return ring.integer(0) - pos(n) * ring.integer(n) *
                                             ring.qp(2 * n, 0) *
                                             cartan_weight_pos(ring, n) /
                                             ring.qi(0, 2 * n);
            });
            add_series<S>(d.cp, OSC_DOWN, [ring, pos](long n) {
                return ring.integer(0) - pos(n) * ring.integer(n) *
                                             ring.qp(2 * n, 0) *
                                             cartan_down_pos(ring, n) /
                                             ring.qi(0, 2 * n);
            });
        }
        if (neg) {
            add_series<S>(d.cm, OSC_WEIGHT, [ring, neg](long m) {
                return ring.integer(0) - neg(m) * ring.integer(m) *
                                             ring.qp(2 * m, 0) *
                                             cartan_weight_neg(ring, m) /
                                             ring.qi(0, 2 * m);
            });
            add_series<S>(d.cm, OSC_DOWN, [ring, neg](long m) {
                return ring.integer(0) - neg(m) * ring.integer(m) *
                                             ring.qp(2 * m, 0) *
                                             cartan_down_neg(ring, m) /
                                             ring.qi(0, 2 * m);
            });
        }
    }
}

}  // namespace detail

// Dressed raising current of the Coxeter realization.
template <class Ring>
Current<Ring> coxeter_raising_current(const Ring& ring,
                                      const ExponentSeriesSolution<Ring>& sol) {
    Current<Ring> cur = raising_current(ring);
    detail::dress_raising(cur, ring, sol);
    return cur;
}

// Dressed lowering current of the Coxeter realization.
template <class Ring>
Current<Ring> coxeter_lowering_current(
    const Ring& ring, const ExponentSeriesSolution<Ring>& sol) {
    Current<Ring> cur = lowering_current(ring);
    detail::dress_lowering(cur, ring, sol);
    return cur;
}

// Positive dressed Cartan current. Each coefficient is the plain Cartan
// content corrected by the exponent series against the symmetrized pairing.
template <class Ring>
Current<Ring> coxeter_cartan_plus_current(
    const Ring& ring, const ExponentSeriesSolution<Ring>& sol) {
    using S = typename Ring::S;
    S qq = detail::qq_unit(ring);
    auto pos = sol.pos;
    VertexOperatorDatum<Ring> d(ring);
    d.cp[OSC_WEIGHT] = [ring, qq, pos](long s) {
        S base = qq * detail::cartan_weight_pos(ring, s) * ring.qp(-s, 0);
        if (!pos) return base;
        return base - pos(s) * ring.integer(s) *
                          detail::cartan_weight_pos(ring, s) *
                          (ring.qp(2 * s, 0) - ring.qp(-2 * s, 0)) /
                          ring.qi(0, 2 * s);
    };
    d.cp[OSC_DOWN] = [ring, qq, pos](long s) {
        S base = qq * detail::cartan_down_pos(ring, s) * ring.qp(-s, 0);
        if (!pos) return base;
        return base - pos(s) * ring.integer(s) *
                          detail::cartan_down_pos(ring, s) *
                          (ring.qp(2 * s, 0) - ring.qp(-2 * s, 0)) /
                          ring.qi(0, 2 * s);
    };
    d.zq = [ring](int w, int c) { return ring.qp(0, w - 2 * c); };
    return {d};
}

// Negative dressed Cartan current.
template <class Ring>
Current<Ring> coxeter_cartan_minus_current(
    const Ring& ring, const ExponentSeriesSolution<Ring>& sol) {
    using S = typename Ring::S;
    S qq = detail::qq_unit(ring);
    auto neg = sol.neg;
    VertexOperatorDatum<Ring> d(ring);
    d.cm[OSC_WEIGHT] = [ring, qq, neg](long s) {
        S base = ring.integer(0) -
                 qq * detail::cartan_weight_neg(ring, s) * ring.qp(-s, 0);
        if (!neg) return base;
        return base - neg(s) * ring.integer(s) *
                          detail::cartan_weight_neg(ring, s) *
                          (ring.qp(2 * s, 0) - ring.qp(-2 * s, 0)) /
                          ring.qi(0, 2 * s);
    };
    d.cm[OSC_DOWN] = [ring, qq, neg](long s) {
        S base = ring.integer(0) -
                 qq * detail::cartan_down_neg(ring, s) * ring.qp(-s, 0);
        if (!neg) return base;
        return base - neg(s) * ring.integer(s) *
                          detail::cartan_down_neg(ring, s) *
                          (ring.qp(2 * s, 0) - ring.qp(-2 * s, 0)) /
                          ring.qi(0, 2 * s);
    };
    d.zq = [ring](int w, int c) { return ring.qp(0, 2 * c - w); };
    return {d};
}

// Transformed-basis coefficient of the dressed raising current at
// annihilation order n: its plain coefficient pair is this multiple of the
// mixing table row (A_n, B_n), so the current has no transformed-weight part.
template <class Ring>
typename Ring::S coxeter_raising_transformed_coefficient(const Ring& ring,
                                                         long n) {
    return ring.qp(2 * n, 2 * n) / ring.qi(0, 2 * n);
}

// ---------------------------------------------------------------------------
// Transformed oscillators: mixing table and derived pairings

// Linear data of the transformed oscillator basis at orders 1..r_max:
//   abar_r  = weight_pos[r-1] a_r
//   abar_-r = weight_neg[r-1] a_-r + weight_neg_mix[r-1] b_-r
//   bbar_r  = down_pos_mix[r-1] a_r + down_pos[r-1] b_r
//   bbar_-r = down_neg[r-1] b_-r
// together with the pairings this table induces and their closed forms.
template <class Ring>
struct BarOscillators {
    using S = typename Ring::S;

    Ring ring;
    long r_max = 0;

    std::vector<S> first_kind;   // A_r
    std::vector<S> second_kind;  // B_r

    std::vector<S> weight_pos;
    std::vector<S> weight_neg;
    std::vector<S> weight_neg_mix;
    std::vector<S> down_pos_mix;
    std::vector<S> down_pos;
    std::vector<S> down_neg;

    std::vector<S> weight_pairing;         // [abar_r, abar_-r], from the table
    std::vector<S> weight_pairing_closed;  // closed form, [kr] denominator
    std::vector<S> down_pairing;           // [bbar_r, bbar_-r]
    std::vector<S> down_pairing_closed;    // -[2r]^2/r
    std::vector<S> cross_pairing;          // [bbar_r, abar_-r]
    std::vector<S> cross_pairing_rev;      // [abar_r, bbar_-r]

    // First-kind coefficient at any order; the chosen exponent solution
    // vanishes at negative orders and so does A.
    S first_kind_at(long r) const {
        if (r == 0) throw std::invalid_argument("mixing table has no order 0");
        if (r < 0) return ring.integer(0);
        if (r > r_max) throw std::out_of_range("mixing table order");
        return first_kind[static_cast<std::size_t>(r - 1)];
    }

    // Rewrite an annihilation-side coefficient pair (x_w on a_r, x_d on b_r)
    // against (abar_r, bbar_r). Returns {weight part, down part}.
    std::pair<S, S> resolve_annihilation(long r, const S& x_w,
                                         const S& x_d) const {
        if (r < 1 || r > r_max) throw std::out_of_range("mixing table order");
        std::size_t i = static_cast<std::size_t>(r - 1);
        S down = x_d / down_pos[i];
        S weight = (x_w - down * down_pos_mix[i]) / weight_pos[i];
        return {weight, down};
    }
};

// Build the mixing table and all derived pairings to order r_max. The
// closed-form weight pairing divides by [kr]; a ring where that unit
// vanishes is rejected.
template <class Ring>
BarOscillators<Ring> bar_oscillators(const Ring& ring, long r_max) {
    using S = typename Ring::S;
    BarOscillators<Ring> bar;
    bar.ring = ring;
    bar.r_max = r_max;
    S one = ring.integer(1);
    for (long r = 1; r <= r_max; ++r) {
        // A_r = r n^r q^{2r - |r| - (k+2)r}; B_r = q^{-|r|}.
        S a = ring.integer(r) * nr_term(ring, r) * ring.qp(-2 * r, -r);
        S b = ring.qp(0, -r);
        bar.first_kind.push_back(a);
        bar.second_kind.push_back(b);

        S alpha = ring.qp(0, 2 * r) *
                  (ring.qp(-r, 0) + ring.qp(r, 0) * (ring.qp(0, 2 * r) - one) *
                                        ring.qi(2 * r, 0) / ring.qi(0, 2 * r)) *
                  ring.qp(0, r);
        bar.weight_pos.push_back(alpha);
        bar.weight_neg.push_back(ring.qp(-r, -3 * r));
        bar.weight_neg_mix.push_back(ring.qp(-r, -2 * r) * a *
                                     ring.qi(2 * r, 2 * r) / ring.qi(0, 2 * r));
        bar.down_pos_mix.push_back(a);
        bar.down_pos.push_back(b);
        bar.down_neg.push_back(ring.qp(0, r));

        // Plain pairings feeding the derived table.
        S ca = ring.qi(0, 2 * r) * ring.qi(2 * r, 2 * r) / ring.integer(r);
        S cb = ring.integer(0) -
               ring.qi(0, 2 * r) * ring.qi(0, 2 * r) / ring.integer(r);

        std::size_t i = static_cast<std::size_t>(r - 1);
        bar.weight_pairing.push_back(bar.weight_pos[i] * bar.weight_neg[i] *
                                     ca);
        bar.down_pairing.push_back(bar.down_pos[i] * bar.down_neg[i] * cb);
        bar.cross_pairing.push_back(bar.down_pos_mix[i] * bar.weight_neg[i] *
                                        ca +
                                    bar.down_pos[i] * bar.weight_neg_mix[i] *
                                        cb);
        bar.cross_pairing_rev.push_back(ring.integer(0));

        S res = ring.qi(2 * r, 0) * ring.integer(r);
        if (ring.is_zero(res)) {
            throw std::domain_error(
                "resonant level: the closed-form pairing denominator "
                "vanishes");
        }
        bar.weight_pairing_closed.push_back(
            ring.qi(2 * r, 2 * r) * ring.qi(0, r) *
            (ring.qi(4 * r, r) - ring.qi(0, r)) / res);
        bar.down_pairing_closed.push_back(cb);
    }
    return bar;
}

// ---------------------------------------------------------------------------
// Structure series

// Symmetrizable Cartan datum with orientation signs; the series below read
// b_ij = d_i a_ij from it.
struct CoxeterDatum {
    std::vector<long> sym;  // d_i
    Matrix<long> cartan;    // a_ij
    Matrix<long> eps;       // orientation signs, zero on the diagonal

    long b(std::size_t i, std::size_t j) const {
        return sym[i] * cartan[i][j];
    }
    std::size_t rank() const { return sym.size(); }
};

inline CoxeterDatum rank_one_datum() {
    return CoxeterDatum{{1}, {{2}}, {{0}}};
}

// Check d_i n_ji - d_j n_ij = eps_ij b_ij for all pairs; on failure the
// first offending pair is reported through `where` when given.
inline bool exponent_matrix_admissible(const CoxeterDatum& cd,
                                       const Matrix<long>& n,
                                       std::pair<int, int>* where = nullptr) {
    for (std::size_t i = 0; i < cd.rank(); ++i) {
        for (std::size_t j = 0; j < cd.rank(); ++j) {
            long lhs = cd.sym[i] * n[j][i] - cd.sym[j] * n[i][j];
            if (lhs != cd.eps[i][j] * cd.b(i, j)) {
                if (where) *where = {static_cast<int>(i), static_cast<int>(j)};
                return false;
            }
        }
    }
    return true;
}

// Taylor data of the exchange structure attached to one index pair: the
// forward series, its level-shifted backward companion, the Cartan ratio,
// and the two kernels built from them.
struct StructureSeries {
    std::vector<Scalar> forward;    // numerator pair over 1 - z q^{b_ij}
    std::vector<Scalar> backward;   // forward at z q^{2k}
    std::vector<Scalar> ratio;      // q^{-b}(1 - q^{b}z)/(1 - q^{-b}z)
    std::vector<Scalar> mixed;      // ratio/forward combination kernel
    std::vector<Scalar> symmetric;  // braid kernel of the mixed series
};

inline StructureSeries structure_series(const CoxeterDatum& cd, int i, int j,
                                        const Matrix<long>& n_data,
                                        int order) {
    std::pair<int, int> where{0, 0};
    if (!exponent_matrix_admissible(cd, n_data, &where)) {
        std::ostringstream os;
        os << "inadmissible exponent matrix at (" << where.first << ", "
           << where.second << ")";
        throw std::invalid_argument(os.str());
    }
    QtRing ring;
    using S = Scalar;
    std::size_t ii = static_cast<std::size_t>(i);
    std::size_t jj = static_cast<std::size_t>(j);
    long b = cd.b(ii, jj);

    auto forward_of = [&](std::size_t a, std::size_t c) {
        // series of index pair (a, c): constant q_c^{n_ac} when a_ac = 0.
        S head = ring.qp(0, cd.sym[c] * n_data[a][c]);
        if (cd.cartan[a][c] == 0) {
            std::vector<S> f(static_cast<std::size_t>(order) + 1,
                             ring.integer(0));
            f[0] = head;
            return f;
        }
        S slope = ring.integer(0) - ring.qp(0, cd.sym[a] * n_data[c][a]);
        return detail::linear_fraction(ring, head, slope,
                                       ring.qp(0, cd.b(a, c)), order);
    };

    StructureSeries out;
    out.forward = forward_of(ii, jj);
    out.backward = detail::series_dilate(ring, out.forward, 4, 0);
    out.ratio = detail::linear_fraction(
        ring, ring.qp(0, -b), ring.integer(0) - ring.integer(1),
        ring.qp(0, -b), order);
    auto rev = forward_of(jj, ii);
    out.mixed = detail::series_mul(
        ring,
        detail::series_inv(ring, detail::series_dilate(ring, out.ratio, -2, 0)),
        detail::series_mul(
            ring, detail::series_dilate(ring, rev, 2, 0),
            detail::series_inv(ring,
                               detail::series_dilate(ring, rev, -2, 0))));
    out.symmetric = detail::series_mul(
        ring, detail::series_dilate(ring, out.mixed, -2, 0),
        detail::series_inv(ring, detail::series_dilate(ring, out.mixed, 2, 0)));
    return out;
}

inline StructureSeries structure_series(int i, int j,
                                        const Matrix<long>& n_data,
                                        int order) {
    return structure_series(rank_one_datum(), i, j, n_data, order);
}

// Exchange kernel of the two plain Cartan halves, ratio(z q^k)/ratio(z q^-k).
template <class Ring>
std::vector<typename Ring::S> cartan_exchange_kernel(const Ring& ring,
                                                     int order) {
    return detail::cartan_braid_kernel(ring, order);
}

// ---------------------------------------------------------------------------
// Classical current fields

// Raising current of the classical realization: the upper half of the pair.
inline Field<ClassicalRing> classical_raising_field(
    const OscillatorAlgebra<ClassicalRing>& alg) {
    return oscillator_field(alg, OSC_UPPER);
}

// Cartan current: 2 :w W: + alpha.
inline Field<ClassicalRing> classical_cartan_field(
    const OscillatorAlgebra<ClassicalRing>& alg) {
    auto w = oscillator_field(alg, OSC_LOWER);
    auto upper = oscillator_field(alg, OSC_UPPER);
    auto boson = oscillator_field(alg, OSC_BOSON);
    return field_sum(field_scale(normal_product(w, upper), cl_int(2)), boson);
}

// Lowering current: -:w w W: + (k + shift) n w_n - :w alpha:. The shift is a
// soundness hook for the relation checker; the realization is only a
// homomorphism at shift 0.
inline Field<ClassicalRing> classical_lowering_field(
    const OscillatorAlgebra<ClassicalRing>& alg, const ClassicalScalar& level,
    long level_term_shift = 0) {
    auto w = oscillator_field(alg, OSC_LOWER);
    auto upper = oscillator_field(alg, OSC_UPPER);
    auto boson = oscillator_field(alg, OSC_BOSON);
    ClassicalScalar shifted = level + cl_int(level_term_shift);
    auto linear = oscillator_field(
        alg, OSC_LOWER, [shifted](long n) { return shifted * cl_int(n); });
    auto cubic = field_scale(normal_product(w, normal_product(w, upper)),
                             cl_int(-1));
    auto mixed = field_scale(normal_product(w, boson), cl_int(-1));
    return field_sum(field_sum(cubic, linear), mixed);
}

// Stress field on a weight boson family:
//   (1/(4(k+2))) :alpha alpha:_n - ((n+1)/2)(1 - 1/(k+2)) alpha_n.
inline Field<ClassicalRing> classical_stress_field(
    const OscillatorAlgebra<ClassicalRing>& alg, const ClassicalScalar& level,
    int fam) {
    auto boson = oscillator_field(alg, fam);
    ClassicalScalar quad = cl_int(1) / (cl_int(4) * (level + cl_int(2)));
    ClassicalScalar slope = cl_int(1) - cl_int(1) / (level + cl_int(2));
    auto linear = oscillator_field(alg, fam, [slope](long n) {
        return cl_rat(rat_of(-(n + 1), 2)) * slope;
    });
    return field_sum(field_scale(normal_product(boson, boson), quad), linear);
}

// ---------------------------------------------------------------------------
// Relations and realizations

struct VerifyCutoffs {
    int degree = 2;
    long window = 2;
};

template <class Ring>
struct RelationOutcome {
    FockVector<typename Ring::S> residual;
    bool truncated = false;
    long suggested_window = 0;
};

// One identity instance family: residual(m, n, state, cutoffs) must vanish
// for every basis state and every mode pair inside the window. Single-mode
// relations ignore the second index.
template <class Ring>
struct Relation {
    std::string name;
    bool single_mode = false;
    std::function<RelationOutcome<Ring>(long, long,
                                        const FockVector<typename Ring::S>&,
                                        const VerifyCutoffs&)>
        residual;
};

template <class Ring>
struct RelationFailure {
    std::string relation;
    long m1 = 0;
    long m2 = 0;
    std::string state;
    FockVector<typename Ring::S> residual;
    bool truncated = false;
};

template <class Ring>
struct RelationReport {
    bool pass = false;
    long instances = 0;
    bool truncated = false;
    long suggested_window = 0;
    std::vector<RelationFailure<Ring>> failures;
};

// A free-field realization: the module, the named currents, the identity
// suite, and the basis supplier used to probe the identities.
template <class Ring>
struct Realization {
    using S = typename Ring::S;

    OscillatorAlgebra<Ring> algebra;
    std::map<std::string, Field<Ring>> fields;
    std::vector<Relation<Ring>> relations;
    std::function<std::vector<FockVector<S>>(int)> basis;
};

// Run the whole identity suite at the given cutoffs. Work is parallelized
// over (relation, basis state) pairs; failures are reported in a
// deterministic order regardless of scheduling.
template <class Ring>
RelationReport<Ring> verify_relations(const Realization<Ring>& real,
                                      const VerifyCutoffs& cut) {
    const Ring& ring = real.algebra.ring();
    auto states = real.basis(cut.degree);

    struct Job {
        std::size_t rel;
        std::size_t state;
    };
    std::vector<Job> jobs;
    jobs.reserve(real.relations.size() * states.size());
    for (std::size_t r = 0; r < real.relations.size(); ++r) {
        for (std::size_t s = 0; s < states.size(); ++s) jobs.push_back({r, s});
    }

    RelationReport<Ring> rep;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::atomic<long> instances{0};

    auto worker = [&]() {
        for (;;) {
            std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const auto& rel = real.relations[jobs[j].rel];
            const auto& st = states[jobs[j].state];
            long lo = -cut.window;
            long hi = cut.window;
            for (long m1 = lo; m1 <= hi; ++m1) {
                long n_lo = rel.single_mode ? 0 : lo;
                long n_hi = rel.single_mode ? 0 : hi;
                for (long m2 = n_lo; m2 <= n_hi; ++m2) {
                    auto out = rel.residual(m1, m2, st, cut);
                    instances.fetch_add(1);
                    bool bad = !fv_is_zero(ring, out.residual);
                    if (!bad && !out.truncated) continue;
                    std::lock_guard<std::mutex> g(mu);
                    RelationFailure<Ring> f;
                    f.relation = rel.name;
                    f.m1 = m1;
                    f.m2 = m2;
                    f.state = detail::basis_label(real.algebra, st);
                    f.residual = std::move(out.residual);
                    f.truncated = out.truncated;
                    if (out.truncated) {
                        rep.truncated = true;
                        rep.suggested_window =
                            std::max(rep.suggested_window,
                                     out.suggested_window);
                    }
                    if (bad || out.truncated) rep.failures.push_back(std::move(f));
                }
            }
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    std::size_t want = std::min<std::size_t>(hw ? hw : 1, jobs.size());
    if (want <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(want - 1);
        for (std::size_t i = 0; i + 1 < want; ++i) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
    }

    std::sort(rep.failures.begin(), rep.failures.end(),
              [](const RelationFailure<Ring>& a, const RelationFailure<Ring>& b) {
                  if (a.relation != b.relation) return a.relation < b.relation;
                  if (a.m1 != b.m1) return a.m1 < b.m1;
                  if (a.m2 != b.m2) return a.m2 < b.m2;
                  return a.state < b.state;
              });
    rep.instances = instances.load();
    rep.pass = rep.failures.empty();
    return rep;
}

namespace detail {

// Degree homogeneity of a single current mode: components off the expected
// degree survive into the residual.
template <class Ring>
Relation<Ring> grading_relation(const Ring& ring, std::string name,
                                Field<Ring> f) {
    Relation<Ring> rel;
    rel.name = std::move(name);
    rel.single_mode = true;
    rel.residual = [ring, f](long m, long, const FockVector<typename Ring::S>& st,
                             const VerifyCutoffs&) {
        RelationOutcome<Ring> out;
        long d = 0;
        for (const auto& [k, c] : st) {
            (void)c;
            d = key_degree(k);
            break;
        }
        auto img = f.mode(m, st);
        FockVector<typename Ring::S> off;
        for (const auto& [k, c] : img) {
            if (key_degree(k) != d - m) off[k] = c;
        }
        out.residual = fv_clean(ring, std::move(off));
        return out;
    };
    return rel;
}

// Weight-grading of a current mode against the diagonal zero-mode form
// (weight - 2 charge): [H_0, x_m] = step * x_m.
template <class Ring>
Relation<Ring> weight_step_relation(const Ring& ring, std::string name,
                                    Field<Ring> f, long step) {
    Relation<Ring> rel;
    rel.name = std::move(name);
    rel.single_mode = true;
    rel.residual = [ring, f, step](long m, long,
                                   const FockVector<typename Ring::S>& st,
                                   const VerifyCutoffs&) {
        using S = typename Ring::S;
        auto diag = [&](const FockVector<S>& v) {
            FockVector<S> out;
            for (const auto& [k, c] : v) {
                out[k] = c * ring.integer(k.weight - 2 * k.charge);
            }
            return out;
        };
        RelationOutcome<Ring> out;
        auto img = f.mode(m, st);
        out.residual = fv_clean(
            ring, fv_sub(fv_sub(diag(img), f.mode(m, diag(st))),
                         fv_scale(img, ring.integer(step))));
        return out;
    };
    return rel;
}

// Diagonal zero mode of an exponential current: x_0 st = factor(key) st.
template <class Ring>
Relation<Ring> zero_mode_relation(const Ring& ring, std::string name,
                                  Field<Ring> f,
                                  std::function<typename Ring::S(const FockKey&)>
                                      factor) {
    Relation<Ring> rel;
    rel.name = std::move(name);
    rel.single_mode = true;
    rel.residual = [ring, f, factor](long m, long,
                                     const FockVector<typename Ring::S>& st,
                                     const VerifyCutoffs&) {
        using S = typename Ring::S;
        RelationOutcome<Ring> out;
        if (m != 0) {
            out.residual = FockVector<S>{};
            return out;
        }
        FockVector<S> want;
        for (const auto& [k, c] : st) want[k] = c * factor(k);
        out.residual = fv_clean(ring, fv_sub(f.mode(0, st), want));
        return out;
    };
    return rel;
}

}  // namespace detail

// Classical realization on the three-family algebra. The relation suite is
// the loop-algebra bracket with central term `level` plus degree gradings;
// `level_term_shift` perturbs the linear term of the lowering current so a
// checker run can demonstrate failure localization.
inline Realization<ClassicalRing> wakimoto_classical(
    const ClassicalScalar& base_weight, const ClassicalScalar& level,
    long level_term_shift = 0) {
    using S = ClassicalScalar;
    ClassicalRing ring;
    Realization<ClassicalRing> real{classical_oscillators(base_weight, level),
                                    {},
                                    {},
                                    nullptr};
    const auto& alg = real.algebra;

    auto raising = classical_raising_field(alg);
    auto cartan = classical_cartan_field(alg);
    auto lowering = classical_lowering_field(alg, level, level_term_shift);
    real.fields.emplace("raising", raising);
    real.fields.emplace("cartan", cartan);
    real.fields.emplace("lowering", lowering);

    auto bracket = [ring](Field<ClassicalRing> x, Field<ClassicalRing> y,
                          Field<ClassicalRing> target, S scale,
                          S central) {
        return [ring, x, y, target, scale, central](
                   long m, long n, const FockVector<S>& st,
                   const VerifyCutoffs&) {
            RelationOutcome<ClassicalRing> out;
            auto res = detail::field_comm(ring, x, m, y, n, st);
            if (!ring.is_zero(scale)) {
                res = fv_sub(res, fv_scale(target.mode(m + n, st), scale));
            }
            if (m + n == 0 && !ring.is_zero(central)) {
                res = fv_sub(res, fv_scale(st, central * cl_int(m)));
            }
            out.residual = fv_clean(ring, std::move(res));
            return out;
        };
    };

    Relation<ClassicalRing> r1{"cartan-raising", false,
                               bracket(cartan, raising, raising, cl_int(2),
                                       cl_int(0))};
    Relation<ClassicalRing> r2{"cartan-lowering", false,
                               bracket(cartan, lowering, lowering, cl_int(-2),
                                       cl_int(0))};
    Relation<ClassicalRing> r3{"raising-lowering", false,
                               bracket(raising, lowering, cartan, cl_int(1),
                                       level)};
    Relation<ClassicalRing> r4{"cartan-cartan", false,
                               bracket(cartan, cartan, cartan, cl_int(0),
                                       cl_int(2) * level)};
    Relation<ClassicalRing> r5{"raising-raising", false,
                               bracket(raising, raising, raising, cl_int(0),
                                       cl_int(0))};
    Relation<ClassicalRing> r6{"lowering-lowering", false,
                               bracket(lowering, lowering, lowering, cl_int(0),
                                       cl_int(0))};
    real.relations = {r1, r2, r3, r4, r5, r6,
                      detail::grading_relation(ring, "grading-raising",
                                               raising),
                      detail::grading_relation(ring, "grading-cartan", cartan),
                      detail::grading_relation(ring, "grading-lowering",
                                               lowering)};

    real.basis = [ring](int degree) {
        auto keys = detail::keys_up_to({OSC_LOWER, OSC_UPPER, OSC_BOSON}, 0,
                                       degree, 0);
        std::vector<FockKey> all = keys;
        for (auto k : keys) {
            k.mono.push_back(OscOp{OSC_LOWER, 0});
            std::sort(k.mono.begin(), k.mono.end());
            all.push_back(std::move(k));
        }
        return detail::unit_states(ring, all);
    };
    return real;
}

// Stress field realization on the coset boson. The suite carries the full
// chiral bracket with central charge c = 1 - 6(k+1)^2/(k+2).
inline Realization<ClassicalRing> virasoro_field(const ClassicalScalar& level) {
    using S = ClassicalScalar;
    ClassicalRing ring;
    Realization<ClassicalRing> real{
        classical_weight_oscillators(cl_int(0), level), {}, {}, nullptr};
    const auto& alg = real.algebra;
    auto stress = classical_stress_field(alg, level, OSC_COSET_BOSON);
    real.fields.emplace("stress", stress);

    S charge = cl_int(1) -
               cl_int(6) * (level + cl_int(1)) * (level + cl_int(1)) /
                   (level + cl_int(2));

    Relation<ClassicalRing> vir;
    vir.name = "virasoro-bracket";
    vir.residual = [ring, stress, charge](long m, long n,
                                          const FockVector<S>& st,
                                          const VerifyCutoffs&) {
        RelationOutcome<ClassicalRing> out;
        auto res = detail::field_comm(ring, stress, m, stress, n, st);
        res = fv_sub(res, fv_scale(stress.mode(m + n, st),
                                   cl_int(m) - cl_int(n)));
        if (m + n == 0) {
            S central = charge * cl_rat(rat_of(1, 12)) *
                        cl_int(m * m * m - m);
            res = fv_sub(res, fv_scale(st, central));
        }
        out.residual = fv_clean(ring, std::move(res));
        return out;
    };

    real.relations = {vir,
                      detail::grading_relation(ring, "grading-stress", stress)};
    real.basis = [ring](int degree) {
        return detail::unit_states(
            ring, detail::keys_up_to({OSC_COSET_BOSON}, 0, degree, 0));
    };
    return real;
}

namespace detail {

// Exchange of a plus-half current past another current through a kernel:
// residual of  x_r y_s - sum_l ker_l y_{s+l} x_{r-l}  (plus-half x vanishes
// below mode 0, so the sum stops at l = r).
template <class Ring>
Relation<Ring> plus_exchange_relation(const Ring& ring, std::string name,
                                      Field<Ring> x, Field<Ring> y,
                                      std::function<std::vector<typename Ring::S>(
                                          int)>
                                          kernel) {
    Relation<Ring> rel;
    rel.name = std::move(name);
    rel.residual = [ring, x, y, kernel](long r, long s,
                                        const FockVector<typename Ring::S>& st,
                                        const VerifyCutoffs&) {
        using S = typename Ring::S;
        RelationOutcome<Ring> out;
        FockVector<S> res = x.mode(r, y.mode(s, st));
        if (r >= 0) {
            auto ker = kernel(static_cast<int>(r));
            for (long l = 0; l <= r; ++l) {
                auto term = y.mode(s + l, x.mode(r - l, st));
                res = fv_sub(res, fv_scale(term,
                                           ker[static_cast<std::size_t>(l)]));
            }
        }
        out.residual = fv_clean(ring, std::move(res));
        return out;
    };
    return rel;
}

// Mirror exchange for a minus-half current: residual of
// x_r y_s - sum_l ker_l y_{s-l} x_{r+l}, stopping at l = -r.
template <class Ring>
Relation<Ring> minus_exchange_relation(const Ring& ring, std::string name,
                                       Field<Ring> x, Field<Ring> y,
                                       std::function<std::vector<typename Ring::S>(
                                           int)>
                                           kernel) {
    Relation<Ring> rel;
    rel.name = std::move(name);
    rel.residual = [ring, x, y, kernel](long r, long s,
                                        const FockVector<typename Ring::S>& st,
                                        const VerifyCutoffs&) {
        using S = typename Ring::S;
        RelationOutcome<Ring> out;
        FockVector<S> res = x.mode(r, y.mode(s, st));
        if (r <= 0) {
            auto ker = kernel(static_cast<int>(-r));
            for (long l = 0; l <= -r; ++l) {
                auto term = y.mode(s - l, x.mode(r + l, st));
                res = fv_sub(res, fv_scale(term,
                                           ker[static_cast<std::size_t>(l)]));
            }
        }
        out.residual = fv_clean(ring, std::move(res));
        return out;
    };
    return rel;
}

// Braiding of the two exponential halves: residual of
// p_r m_s - sum_{l=0..min(r,-s)} ker_l m_{s+l} p_{r-l}; both halves vanish
// outside their mode half-lines, making the sum exactly finite.
template <class Ring>
Relation<Ring> half_braid_relation(const Ring& ring, std::string name,
                                   Field<Ring> plus, Field<Ring> minus,
                                   std::function<std::vector<typename Ring::S>(
                                       int)>
                                       kernel) {
    Relation<Ring> rel;
    rel.name = std::move(name);
    rel.residual = [ring, plus, minus, kernel](
                       long r, long s, const FockVector<typename Ring::S>& st,
                       const VerifyCutoffs&) {
        using S = typename Ring::S;
        RelationOutcome<Ring> out;
        FockVector<S> res = plus.mode(r, minus.mode(s, st));
        long top = std::min(r, -s);
        if (top >= 0) {
            auto ker = kernel(static_cast<int>(top));
            for (long l = 0; l <= top; ++l) {
                auto term = minus.mode(s + l, plus.mode(r - l, st));
                res = fv_sub(res, fv_scale(term,
                                           ker[static_cast<std::size_t>(l)]));
            }
        }
        out.residual = fv_clean(ring, std::move(res));
        return out;
    };
    return rel;
}

// Quadratic exchange of a current with itself:
// x_{r+1} x_s - p x_r x_{s+1} - p x_s x_{r+1} + x_{s+1} x_r.
template <class Ring>
Relation<Ring> quadratic_relation(const Ring& ring, std::string name,
                                  Field<Ring> x, typename Ring::S p) {
    Relation<Ring> rel;
    rel.name = std::move(name);
    rel.residual = [ring, x, p](long r, long s,
                                const FockVector<typename Ring::S>& st,
                                const VerifyCutoffs&) {
        using S = typename Ring::S;
        RelationOutcome<Ring> out;
        FockVector<S> res = x.mode(r + 1, x.mode(s, st));
        res = fv_sub(res, fv_scale(x.mode(r, x.mode(s + 1, st)), p));
        res = fv_sub(res, fv_scale(x.mode(s, x.mode(r + 1, st)), p));
        res = fv_add(res, x.mode(s + 1, x.mode(r, st)));
        out.residual = fv_clean(ring, std::move(res));
        return out;
    };
    return rel;
}

}  // namespace detail

// Deformed realization on the three-family algebra at an integer highest
// weight. The relation suite is the full rank-1 current algebra: gradings,
// zero modes, Cartan commutativity and braiding, Cartan conjugation of the
// step currents, quadratic exchange, and the step-current bracket whose
// right side lives on the two Cartan halves.
template <class Ring>
Realization<Ring> wakimoto_deformed(const Ring& ring, long weight) {
    using S = typename Ring::S;
    Realization<Ring> real{deformed_oscillators(ring), {}, {}, nullptr};
    const auto& alg = real.algebra;
    S one = ring.integer(1);
    S qq = detail::qq_unit(ring);

    auto plus = current_field(alg, cartan_plus_current(ring));
    auto minus = current_field(alg, cartan_minus_current(ring));
    auto raising = current_field(alg, raising_current(ring));
    auto lowering = current_field(alg, lowering_current(ring));
    real.fields.emplace("cartan-plus", plus);
    real.fields.emplace("cartan-minus", minus);
    real.fields.emplace("raising", raising);
    real.fields.emplace("lowering", lowering);

    // Bracket of the step currents: the defect is carried by two delta
    // terms whose argument scales are q^{-k} and q^{k}.
    DeltaTerm<Ring> dt_plus{
        ring.qp(-2, 0),
        std::make_shared<const Field<Ring>>(
            field_scale(argument_scale(plus, ring.qp(1, 0)), one / qq))};
    DeltaTerm<Ring> dt_minus{
        ring.qp(2, 0),
        std::make_shared<const Field<Ring>>(field_scale(
            argument_scale(minus, ring.qp(-1, 0)), ring.integer(0) - one / qq))};

    Relation<Ring> bracket;
    bracket.name = "raising-lowering-delta";
    bracket.residual = [ring, raising, lowering, dt_plus, dt_minus](
                           long r, long s, const FockVector<S>& st,
                           const VerifyCutoffs&) {
        RelationOutcome<Ring> out;
        auto res = detail::field_comm(ring, raising, r, lowering, s, st);
        res = fv_sub(res, dt_plus.component(r, s, st));
        res = fv_sub(res, dt_minus.component(r, s, st));
        out.residual = fv_clean(ring, std::move(res));
        return out;
    };

    auto ratio = [ring](int order) { return detail::ratio_kernel(ring, order); };
    auto ratio_inv = [ring](int order) {
        return detail::series_inv(ring, detail::ratio_kernel(ring, order));
    };
    auto dil = [ring](std::vector<S> v, long a2) {
        return detail::series_dilate(ring, v, a2, 0);
    };

    real.relations = {
        detail::grading_relation(ring, "grading-raising", raising),
        detail::grading_relation(ring, "grading-lowering", lowering),
        detail::grading_relation(ring, "grading-cartan-plus", plus),
        detail::grading_relation(ring, "grading-cartan-minus", minus),
        detail::weight_step_relation(ring, "weight-raising", raising, 2),
        detail::weight_step_relation(ring, "weight-lowering", lowering, -2),
        detail::zero_mode_relation(
            ring, "cartan-plus-zero-mode", plus,
            [ring](const FockKey& k) {
                return ring.qp(0, k.weight - 2 * k.charge);
            }),
        detail::zero_mode_relation(
            ring, "cartan-minus-zero-mode", minus,
            [ring](const FockKey& k) {
                return ring.qp(0, 2 * k.charge - k.weight);
            }),
        Relation<Ring>{"cartan-plus-commutes", false,
                       [ring, plus](long r, long s, const FockVector<S>& st,
                                    const VerifyCutoffs&) {
                           RelationOutcome<Ring> out;
                           out.residual = detail::field_comm(ring, plus, r,
                                                             plus, s, st);
                           return out;
                       }},
        Relation<Ring>{"cartan-minus-commutes", false,
                       [ring, minus](long r, long s, const FockVector<S>& st,
                                     const VerifyCutoffs&) {
                           RelationOutcome<Ring> out;
                           out.residual = detail::field_comm(ring, minus, r,
                                                             minus, s, st);
                           return out;
                       }},
        detail::half_braid_relation(
            ring, "cartan-exchange", plus, minus,
            [ring](int order) { return cartan_exchange_kernel(ring, order); }),
        detail::plus_exchange_relation(
            ring, "cartan-plus-raising", plus, raising,
            [ratio_inv, dil](int order) {
                return dil(ratio_inv(order), -1);
            }),
        detail::plus_exchange_relation(
            ring, "cartan-plus-lowering", plus, lowering,
            [ratio, dil](int order) { return dil(ratio(order), 1); }),
        detail::minus_exchange_relation(
            ring, "cartan-minus-raising", minus, raising,
            [ratio, dil](int order) { return dil(ratio(order), -1); }),
        detail::minus_exchange_relation(
            ring, "cartan-minus-lowering", minus, lowering,
            [ratio_inv, dil](int order) {
                return dil(ratio_inv(order), 1);
            }),
        detail::quadratic_relation(ring, "raising-quadratic", raising,
                                   ring.qp(0, 2)),
        detail::quadratic_relation(ring, "lowering-quadratic", lowering,
                                   ring.qp(0, -2)),
        bracket};

    real.basis = [ring, weight](int degree) {
        std::vector<FockKey> keys;
        for (int charge : {0, 1}) {
            auto layer = detail::keys_up_to({OSC_WEIGHT, OSC_DOWN, OSC_UP},
                                            static_cast<int>(weight), degree,
                                            charge);
            keys.insert(keys.end(), layer.begin(), layer.end());
        }
        return detail::unit_states(ring, keys);
    };
    return real;
}

// Dressed realization on the same module. The suite is the rank-1 Coxeter
// ideal: gradings, zero modes, Cartan braiding and conjugations, the plain
// commutativity of the raising current, the kernel-weighted quadratic
// exchange of the lowering current, and the step bracket against the two
// dressed Cartan halves.
template <class Ring>
Realization<Ring> coxeter_currents(const Ring& ring, long weight,
                                   const ExponentSeriesSolution<Ring>& sol) {
    using S = typename Ring::S;
    Realization<Ring> real{deformed_oscillators(ring), {}, {}, nullptr};
    const auto& alg = real.algebra;
    S one = ring.integer(1);
    S qq = detail::qq_unit(ring);

    auto kplus = current_field(alg, coxeter_cartan_plus_current(ring, sol));
    auto kminus = current_field(alg, coxeter_cartan_minus_current(ring, sol));
    auto raising = current_field(alg, coxeter_raising_current(ring, sol));
    auto lowering = current_field(alg, coxeter_lowering_current(ring, sol));
    real.fields.emplace("cartan-plus", kplus);
    real.fields.emplace("cartan-minus", kminus);
    real.fields.emplace("raising", raising);
    real.fields.emplace("lowering", lowering);

    auto mixed = [ring](int order) { return detail::mixed_kernel(ring, order); };
    auto mixed_inv = [ring](int order) {
        return detail::series_inv(ring, detail::mixed_kernel(ring, order));
    };
    auto dil = [ring](std::vector<S> v, long a2) {
        return detail::series_dilate(ring, v, a2, 0);
    };

    // Raising current commutes with itself after clearing denominators in
    // the formal variables; the cleared form is the paired difference of
    // commutators at shifted modes.
    Relation<Ring> ee;
    ee.name = "raising-commutes";
    ee.residual = [ring, raising](long r, long s, const FockVector<S>& st,
                                  const VerifyCutoffs&) {
        RelationOutcome<Ring> out;
        auto a = detail::field_comm(ring, raising, r + 1, raising, s, st);
        auto b = detail::field_comm(ring, raising, r, raising, s + 1, st);
        out.residual = fv_clean(ring, fv_sub(a, b));
        return out;
    };

    // Kernel-weighted quadratic exchange of the lowering current. The sum
    // over the kernel order terminates because high modes annihilate any
    // bounded-degree state; one extra term is probed as a truncation guard.
    Relation<Ring> ff;
    ff.name = "lowering-kernel-quadratic";
    ff.residual = [ring, lowering](long r, long s, const FockVector<S>& st,
                                   const VerifyCutoffs& cut) {
        RelationOutcome<Ring> out;
        S p = ring.qp(0, -2);
        long guard = 1;
        long top = cut.degree + std::max({-r, -s, 0L}) + guard;
        auto ker = detail::series_dilate(
            ring, detail::forward_kernel(ring, static_cast<int>(top)), 4, 0);
        FockVector<S> res;
        for (long l = 0; l <= top; ++l) {
            S w = ker[static_cast<std::size_t>(l)];
            FockVector<S> term = lowering.mode(r + 1 - l,
                                               lowering.mode(s + l, st));
            term = fv_sub(term, fv_scale(lowering.mode(r - l,
                                                       lowering.mode(s + l + 1,
                                                                     st)),
                                         p));
            term = fv_sub(term, fv_scale(lowering.mode(s - l,
                                                       lowering.mode(r + 1 + l,
                                                                     st)),
                                         p));
            term = fv_add(term, lowering.mode(s + 1 - l,
                                              lowering.mode(r + l, st)));
            term = fv_clean(ring, fv_scale(term, w));
            if (l == top && !fv_is_zero(ring, term)) {
                out.truncated = true;
                out.suggested_window = top + 2;
            }
            res = fv_add(res, term);
        }
        out.residual = fv_clean(ring, std::move(res));
        return out;
    };

    // Step bracket: the kernel-weighted mixed products of the raising and
    // lowering currents land on the two dressed Cartan halves.
    DeltaTerm<Ring> dt_plus{
        ring.qp(-2, 0),
        std::make_shared<const Field<Ring>>(field_scale(kplus, one / qq))};
    DeltaTerm<Ring> dt_minus{
        ring.qp(2, 0),
        std::make_shared<const Field<Ring>>(
            field_scale(kminus, ring.integer(0) - one / qq))};

    Relation<Ring> ef;
    ef.name = "raising-lowering-delta";
    ef.residual = [ring, raising, lowering, dt_plus, dt_minus](
                      long r, long s, const FockVector<S>& st,
                      const VerifyCutoffs& cut) {
        RelationOutcome<Ring> out;
        long guard = 1;
        long top = cut.degree + std::max({-r, -s, 0L}) + guard;
        auto ker = detail::series_inv(
            ring, detail::forward_kernel(ring, static_cast<int>(top)));
        FockVector<S> res;
        for (long l = 0; l <= top; ++l) {
            S w = ker[static_cast<std::size_t>(l)] * ring.qp(2 * l, 0);
            auto term = raising.mode(r - l, lowering.mode(s + l, st));
            term = fv_sub(term, lowering.mode(s - l, raising.mode(r + l, st)));
            term = fv_clean(ring, fv_scale(term, w));
            if (l == top && !fv_is_zero(ring, term)) {
                out.truncated = true;
                out.suggested_window = top + 2;
            }
            res = fv_add(res, term);
        }
        res = fv_sub(res, dt_plus.component(r, s, st));
        res = fv_sub(res, dt_minus.component(r, s, st));
        out.residual = fv_clean(ring, std::move(res));
        return out;
    };

    real.relations = {
        detail::grading_relation(ring, "grading-raising", raising),
        detail::grading_relation(ring, "grading-lowering", lowering),
        detail::grading_relation(ring, "grading-cartan-plus", kplus),
        detail::grading_relation(ring, "grading-cartan-minus", kminus),
        detail::weight_step_relation(ring, "weight-raising", raising, 2),
        detail::weight_step_relation(ring, "weight-lowering", lowering, -2),
        detail::zero_mode_relation(
            ring, "cartan-plus-zero-mode", kplus,
            [ring](const FockKey& k) {
                return ring.qp(0, k.weight - 2 * k.charge);
            }),
        detail::zero_mode_relation(
            ring, "cartan-minus-zero-mode", kminus,
            [ring](const FockKey& k) {
                return ring.qp(0, 2 * k.charge - k.weight);
            }),
        Relation<Ring>{"cartan-plus-commutes", false,
                       [ring, kplus](long r, long s, const FockVector<S>& st,
                                     const VerifyCutoffs&) {
                           RelationOutcome<Ring> out;
                           out.residual = detail::field_comm(ring, kplus, r,
                                                             kplus, s, st);
                           return out;
                       }},
        Relation<Ring>{"cartan-minus-commutes", false,
                       [ring, kminus](long r, long s, const FockVector<S>& st,
                                      const VerifyCutoffs&) {
                           RelationOutcome<Ring> out;
                           out.residual = detail::field_comm(ring, kminus, r,
                                                             kminus, s, st);
                           return out;
                       }},
        detail::half_braid_relation(
            ring, "cartan-exchange", kplus, kminus,
            [ring](int order) {
                return detail::dressed_braid_kernel(ring, order);
            }),
        detail::plus_exchange_relation(ring, "cartan-plus-raising", kplus,
                                       raising,
                                       [mixed](int order) {
                                           return mixed(order);
                                       }),
        detail::plus_exchange_relation(
            ring, "cartan-plus-lowering", kplus, lowering,
            [mixed_inv, dil](int order) {
                return dil(mixed_inv(order), 2);
            }),
        detail::minus_exchange_relation(ring, "cartan-minus-raising", kminus,
                                        raising,
                                        [mixed_inv](int order) {
                                            return mixed_inv(order);
                                        }),
        detail::minus_exchange_relation(
            ring, "cartan-minus-lowering", kminus, lowering,
            [mixed, dil](int order) { return dil(mixed(order), 2); }),
        ee,
        ff,
        ef};

    real.basis = [ring, weight](int degree) {
        std::vector<FockKey> keys;
        for (int charge : {0, 1}) {
            auto layer = detail::keys_up_to({OSC_WEIGHT, OSC_DOWN, OSC_UP},
                                            static_cast<int>(weight), degree,
                                            charge);
            keys.insert(keys.end(), layer.begin(), layer.end());
        }
        return detail::unit_states(ring, keys);
    };
    return real;
}

template <class Ring>
Realization<Ring> coxeter_currents(const Ring& ring, long weight) {
    return coxeter_currents(ring, weight, standard_exponent_solution(ring));
}

}  // namespace qvir
