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
//
// Verma-module combinatorics for the rank-1 loop algebra and its finite
// subalgebra: positive roots, PBW bases, characters, contravariant Gram
// matrices, the determinant product formula, singular-vector kernels, and
// the finite quantum Gram entries.
//
// Everything here is a straightening oracle: states are exact linear
// combinations of ordered products of lowering generators applied to a
// highest-weight vector, and raising generators are pushed through one
// bracket at a time.  The module deliberately shares no code with the
// oscillator engine so the two can cross-validate each other.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qvir/linalg.hpp"
#include "qvir/rings.hpp"
#include "qvir/scalar.hpp"
#include "qvir/series.hpp"

namespace qvir {

// ---------------------------------------------------------------------------
// Root data.

// Nonnegative integer combination a0*alpha0 + a1*alpha1 of the two simple
// roots; the basic imaginary root is alpha0 + alpha1.
struct AffineRoot {
    int a0 = 0;
    int a1 = 0;
    friend auto operator<=>(const AffineRoot&, const AffineRoot&) = default;
};

inline int root_height(const AffineRoot& r) { return r.a0 + r.a1; }

inline bool root_is_imaginary(const AffineRoot& r) { return r.a0 == r.a1; }

// Invariant bilinear form with (alpha_i, alpha_i) = 2 and
// (alpha0, alpha1) = -2; imaginary roots are isotropic.
inline long root_pairing(const AffineRoot& x, const AffineRoot& y) {
    return 2L * x.a0 * y.a0 + 2L * x.a1 * y.a1 -
           2L * (static_cast<long>(x.a0) * y.a1 + static_cast<long>(x.a1) * y.a0);
}

// (rho, alpha_i) = 1, extended linearly; on the basic imaginary root this
// gives the dual Coxeter number 2.
inline long rho_pairing(const AffineRoot& r) { return r.a0 + r.a1; }

// (lambda + rho, r) for the highest weight determined by the symbolic
// weight wt = (lambda, alpha1) and level lv: (lambda, alpha0) = lv - wt.
inline ClassicalScalar weight_rho_pairing(const AffineRoot& r) {
    ClassicalScalar wt = cl_weight();
    ClassicalScalar lv = cl_level();
    return cl_int(r.a0) * (lv - wt + cl_int(1)) + cl_int(r.a1) * (wt + cl_int(1));
}

// Loop-algebra generator: a Chevalley family 'e', 'f', or 'h' with a mode
// index.  Lowering generators are f with n <= 0 and e, h with n < 0.
struct LoopGen {
    char type = 'h';
    long n = 0;
    friend auto operator<=>(const LoopGen&, const LoopGen&) = default;
};

inline bool gen_is_lowering(const LoopGen& g) {
    return g.type == 'f' ? g.n <= 0 : g.n < 0;
}

// The lowering generator attached to a positive root: the alpha1 string
// uses f-modes, the alpha0 string uses e-modes, imaginary roots use
// h-modes.
inline LoopGen root_lowering(const AffineRoot& r) {
    if (r.a0 == r.a1) {
        if (r.a0 < 1) throw std::invalid_argument("root is not positive");
        return {'h', -static_cast<long>(r.a0)};
    }
    if (r.a1 == r.a0 + 1) return {'f', -static_cast<long>(r.a0)};
    if (r.a0 == r.a1 + 1) return {'e', -static_cast<long>(r.a0)};
    throw std::invalid_argument("not a positive root");
}

namespace detail {

// Normal-order key: height-increasing, ties broken by (real < imaginary),
// then by the mode index of the root's lowering generator.
struct PbwKey {
    int height = 0;
    int imaginary = 0;
    long mode = 0;
    friend auto operator<=>(const PbwKey&, const PbwKey&) = default;
};

inline PbwKey pbw_key(const AffineRoot& r) {
    return {root_height(r), root_is_imaginary(r) ? 1 : 0, root_lowering(r).n};
}

}  // namespace detail

// Positive roots of height at most max_height, in increasing normal-order
// position: both real strings and the imaginary string, multiplicity one.
inline std::vector<AffineRoot> positive_roots(int max_height) {
    std::vector<AffineRoot> roots;
    for (int n = 0; 2 * n + 1 <= max_height; ++n) {
        roots.push_back({n, n + 1});
        roots.push_back({n + 1, n});
    }
    for (int m = 1; 2 * m <= max_height; ++m) roots.push_back({m, m});
    std::sort(roots.begin(), roots.end(), [](const AffineRoot& x, const AffineRoot& y) {
        return detail::pbw_key(x) < detail::pbw_key(y);
    });
    return roots;
}

// Ordered product of lowering generators, leftmost factor applied last.
using VermaMono = std::vector<LoopGen>;

// PBW basis of the depth-eta weight space: one monomial per multiset of
// positive roots summing to eta, factors sorted by the normal-order key.
// Monomials are listed with the multiset over the highest root first, so
// the basis order is reproducible.
inline std::vector<VermaMono> pbw_basis(const AffineRoot& eta) {
    std::vector<VermaMono> out;
    if (eta.a0 < 0 || eta.a1 < 0) return out;
    std::vector<AffineRoot> roots = positive_roots(root_height(eta));
    std::vector<AffineRoot> chosen;
    // Descend through the roots from the top of the normal order, taking
    // the highest multiplicities first.
    auto rec = [&](auto&& self, std::size_t idx, AffineRoot rem) -> void {
        if (rem.a0 == 0 && rem.a1 == 0) {
            std::vector<AffineRoot> sorted = chosen;
            std::sort(sorted.begin(), sorted.end(),
                      [](const AffineRoot& x, const AffineRoot& y) {
                          return detail::pbw_key(x) < detail::pbw_key(y);
                      });
            VermaMono mono;
            for (const auto& r : sorted) mono.push_back(root_lowering(r));
            out.push_back(std::move(mono));
            return;
        }
        if (idx == 0) return;
        const AffineRoot& r = roots[idx - 1];
        int max_mult = 0;
        while ((max_mult + 1) * r.a0 <= rem.a0 && (max_mult + 1) * r.a1 <= rem.a1)
            ++max_mult;
        for (int m = max_mult; m >= 0; --m) {
            chosen.insert(chosen.end(), static_cast<std::size_t>(m), r);
            self(self, idx - 1,
                 AffineRoot{rem.a0 - m * r.a0, rem.a1 - m * r.a1});
            chosen.resize(chosen.size() - static_cast<std::size_t>(m));
        }
    };
    rec(rec, roots.size(), eta);
    return out;
}

inline std::size_t pbw_dim(const AffineRoot& eta) { return pbw_basis(eta).size(); }

// Weight-space dimensions from the character product: the coefficient map
// of prod over positive roots of 1/(1 - x^{a0} y^{a1}), truncated past
// total height max_height.  Independent of the multiset enumeration above.
inline std::map<std::pair<int, int>, long> character_counts(int max_height) {
    std::map<std::pair<int, int>, long> acc;
    acc[{0, 0}] = 1;
    for (const auto& r : positive_roots(max_height)) {
        std::map<std::pair<int, int>, long> next;
        for (const auto& [deg, cnt] : acc) {
            for (int m = 0;; ++m) {
                const int d0 = deg.first + m * r.a0;
                const int d1 = deg.second + m * r.a1;
                if (d0 + d1 > max_height) break;
                next[{d0, d1}] += cnt;
            }
        }
        acc = std::move(next);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Straightening oracle.

// Pushes raising generators through ordered products of lowering
// generators one bracket at a time, exactly as the defining relations
// read.  The scalar ring is a parameter so the same straightening runs
// symbolically in (wt, lv) and at specialized rational points.
template <class Ring>
class LoopVermaOracle {
  public:
    using S = typename Ring::S;
    using State = std::map<VermaMono, S>;

    LoopVermaOracle(Ring ring, S weight, S level)
        : ring_(std::move(ring)),
          weight_(std::move(weight)),
          level_(std::move(level)) {}

    // Contravariant transpose: e_n <-> f_{-n}, h_n -> h_{-n}.
    static LoopGen transpose(const LoopGen& g) {
        switch (g.type) {
            case 'e': return {'f', -g.n};
            case 'f': return {'e', -g.n};
            default: return {'h', -g.n};
        }
    }

    State act(const LoopGen& g, const State& st) const {
        State out;
        for (const auto& [mono, c] : st) act_term(g, mono, c, out);
        for (auto it = out.begin(); it != out.end();) {
            if (ring_.is_zero(it->second)) it = out.erase(it);
            else ++it;
        }
        return out;
    }

    // <x v, y v> for PBW monomials x, y: the vacuum coefficient of
    // transpose(x) applied to y v, factors of x transposed left to right.
    S pairing(const VermaMono& x, const VermaMono& y) const {
        State st;
        st[y] = ring_.integer(1);
        for (const auto& g : x) st = act(transpose(g), st);
        auto it = st.find(VermaMono{});
        return it == st.end() ? ring_.integer(0) : it->second;
    }

    Matrix<S> gram(const std::vector<VermaMono>& basis) const {
        Matrix<S> m(basis.size(), std::vector<S>(basis.size(), ring_.integer(0)));
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < basis.size(); ++j)
                m[i][j] = pairing(basis[i], basis[j]);
        return m;
    }

  private:
    // One term of a bracket [x, y]: either a generator with an integer
    // coefficient or that multiple of the central element.
    struct BracketTerm {
        bool central = false;
        LoopGen gen;
        long coeff = 0;
    };

    static std::vector<BracketTerm> bracket(const LoopGen& x, const LoopGen& y) {
        std::vector<BracketTerm> out;
        const long m = x.n;
        const long n = y.n;
        const long s = m + n;
        if (x.type == 'h' && y.type == 'h') {
            if (s == 0) out.push_back({true, {}, 2 * m});
        } else if (x.type == 'e' && y.type == 'f') {
            out.push_back({false, {'h', s}, 1});
            if (s == 0) out.push_back({true, {}, m});
        } else if (x.type == 'f' && y.type == 'e') {
            out.push_back({false, {'h', s}, -1});
            if (s == 0) out.push_back({true, {}, -n});
        } else if (x.type == 'h' && y.type == 'e') {
            out.push_back({false, {'e', s}, 2});
        } else if (x.type == 'e' && y.type == 'h') {
            out.push_back({false, {'e', s}, -2});
        } else if (x.type == 'h' && y.type == 'f') {
            out.push_back({false, {'f', s}, -2});
        } else if (x.type == 'f' && y.type == 'h') {
            out.push_back({false, {'f', s}, 2});
        }
        return out;
    }

    void act_term(const LoopGen& g, const VermaMono& mono, const S& c,
                  State& out) const {
        if (gen_is_lowering(g)) {
            VermaMono m = mono;
            m.insert(m.begin(), g);
            accumulate(out, m, c);
            return;
        }
        if (mono.empty()) {
            // The highest-weight vector: h_0 reads the weight, every other
            // non-lowering generator annihilates.
            if (g.type == 'h' && g.n == 0) accumulate(out, mono, c * weight_);
            return;
        }
        const LoopGen head = mono.front();
        const VermaMono rest(mono.begin() + 1, mono.end());
        // g head = head g + [g, head]
        State sub;
        act_term(g, rest, c, sub);
        for (const auto& [m2, c2] : sub) {
            VermaMono m = m2;
            m.insert(m.begin(), head);
            accumulate(out, m, c2);
        }
        for (const auto& t : bracket(g, head)) {
            if (t.central) {
                accumulate(out, rest, c * ring_.integer(t.coeff) * level_);
            } else {
                act_term(t.gen, rest, c * ring_.integer(t.coeff), out);
            }
        }
    }

    void accumulate(State& out, const VermaMono& m, const S& c) const {
        auto it = out.find(m);
        if (it == out.end()) out.emplace(m, c);
        else it->second = it->second + c;
    }

    Ring ring_;
    S weight_;
    S level_;
};

// Symbolic contravariant Gram matrix at depth eta, in the PBW basis order.
inline Matrix<ClassicalScalar> shapovalov_gram(const AffineRoot& eta) {
    LoopVermaOracle<ClassicalRing> oracle(ClassicalRing{}, cl_weight(), cl_level());
    return oracle.gram(pbw_basis(eta));
}

// ---------------------------------------------------------------------------
// Determinant product formula.

struct KacKazhdanFactor {
    AffineRoot root;
    long n = 0;
    // (lambda + rho, root) - n (root, root) / 2
    ClassicalScalar base;
    // dimension of the weight space at depth eta - n * root
    long exponent = 0;
};

struct KacKazhdanProduct {
    std::vector<KacKazhdanFactor> factors;
    ClassicalScalar value;
};

// The determinant formula at depth eta: the product over positive roots
// and positive integers n of the linear factor above, with multiplicity
// the dimension of the weight space shifted by n copies of the root.
inline KacKazhdanProduct kac_kazhdan_product(const AffineRoot& eta) {
    KacKazhdanProduct out;
    out.value = cl_int(1);
    for (const auto& r : positive_roots(root_height(eta))) {
        for (long n = 1; n * root_height(r) <= root_height(eta); ++n) {
            const AffineRoot rem{eta.a0 - static_cast<int>(n) * r.a0,
                                 eta.a1 - static_cast<int>(n) * r.a1};
            if (rem.a0 < 0 || rem.a1 < 0) continue;
            const long dim = static_cast<long>(pbw_dim(rem));
            if (dim == 0) continue;
            ClassicalScalar base =
                weight_rho_pairing(r) - cl_rat(rat_of(n * root_pairing(r, r), 2));
            ClassicalScalar power = cl_int(1);
            for (long i = 0; i < dim; ++i) power = power * base;
            out.value = out.value * power;
            out.factors.push_back({r, n, base, dim});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Singular vectors at specialized points.

struct SingularKernel {
    // PBW monomials indexing the coordinates of the kernel vectors.
    std::vector<VermaMono> basis;
    std::vector<std::vector<Rat>> vectors;
    // One flag per kernel vector: annihilated by every raising probe.
    // Deep kernels may contain lowered images of shallower singular
    // vectors, which lie in the radical without being singular.
    std::vector<bool> singular;
    bool all_singular = true;
};

// Exact kernel of the Gram matrix at the rational point (weight, level),
// each kernel vector re-checked by applying the raising modes that
// generate the whole raising subalgebra.
inline SingularKernel singular_kernel(const Rat& weight, const Rat& level,
                                      const AffineRoot& eta) {
    SingularKernel out;
    out.basis = pbw_basis(eta);
    RatRing ring;
    LoopVermaOracle<RatRing> oracle(ring, weight, level);
    out.vectors = kernel_basis(ring, oracle.gram(out.basis));
    const LoopGen probes[] = {{'e', 0}, {'f', 1}, {'e', 1}, {'h', 1}};
    for (const auto& vec : out.vectors) {
        LoopVermaOracle<RatRing>::State st;
        for (std::size_t i = 0; i < out.basis.size(); ++i) {
            if (vec[i] != 0) st[out.basis[i]] = vec[i];
        }
        bool killed = true;
        for (const auto& p : probes) killed = killed && oracle.act(p, st).empty();
        out.singular.push_back(killed);
        out.all_singular = out.all_singular && killed;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite quantum Gram entries.
//
// Deformed scalars with a symbolic weight unit z = q^wt: rational
// functions in (z, small unit, t, q), the weight unit strongest so
// specializations stay lexicographic.

inline constexpr int WQ_Z = 0;
inline constexpr int WQ_MU = 1;
inline constexpr int WQ_T = 2;
inline constexpr int WQ_Q = 3;

using WqPoly = MultiPoly<4>;
using WqScalar = RatFunc<4>;

inline WqScalar wq_int(long n) { return WqScalar(Rat(n)); }

inline WqScalar wq_unit(int v, long e) {
    return WqScalar::variable(v, static_cast<int>(e));
}

// [n] in the q unit alone.
inline WqScalar wq_qint(long n) {
    return (wq_unit(WQ_Q, n) - wq_unit(WQ_Q, -n)) /
           (wq_unit(WQ_Q, 1) - wq_unit(WQ_Q, -1));
}

// [wt + c] through the weight unit: (z q^c - z^{-1} q^{-c}) / (q - q^{-1}).
inline WqScalar wq_weight_int(long c) {
    return (wq_unit(WQ_Z, 1) * wq_unit(WQ_Q, c) -
            wq_unit(WQ_Z, -1) * wq_unit(WQ_Q, -c)) /
           (wq_unit(WQ_Q, 1) - wq_unit(WQ_Q, -1));
}

struct WqRing {
    using S = WqScalar;
    S integer(long n) const { return wq_int(n); }
    S rational(const Rat& r) const { return WqScalar(r); }
    bool is_zero(const S& x) const { return x.is_zero(); }
};

namespace detail {

// Exponent of a weighted monomial as a function of (wt, lv): the units
// are z = exp(h wt), q = exp(h), t = exp(h lv / 2), small unit =
// exp(h / (2 (lv + 2))).
inline ClassicalScalar wq_h_exponent(const Mono<4>& m) {
    ClassicalScalar lv = cl_level();
    ClassicalScalar e = cl_int(m.e[WQ_Q]) + cl_weight() * cl_int(m.e[WQ_Z]);
    e = e + lv * cl_rat(rat_of(m.e[WQ_T], 2));
    if (m.e[WQ_MU] != 0) {
        e = e + cl_rat(Rat(m.e[WQ_MU])) / (cl_int(2) * (lv + cl_int(2)));
    }
    return e;
}

inline TruncSeries<ClassicalScalar> wq_h_series(const WqPoly& p, std::size_t ord) {
    TruncSeries<ClassicalScalar> s(ord);
    for (const auto& [m, c] : p.terms()) {
        ClassicalScalar e = wq_h_exponent(m);
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

// Limit of a weighted deformed scalar as the deformation parameter goes
// to 1, with both weight and level kept symbolic.
inline ClassicalScalar classical_limit(const WqScalar& s) {
    if (s.is_zero()) return ClassicalScalar();
    for (std::size_t ord = 4;; ord *= 2) {
        TruncSeries<ClassicalScalar> num = detail::wq_h_series(s.num(), ord);
        TruncSeries<ClassicalScalar> den = detail::wq_h_series(s.den(), ord);
        std::size_t dv = den.valuation();
        if (dv > den.order()) {
            if (ord >= 64) {
                throw std::domain_error("classical limit: denominator vanishes");
            }
            continue;
        }
        std::size_t nv = num.valuation();
        if (nv < dv) throw std::domain_error("classical limit diverges");
        if (nv > dv) return ClassicalScalar();
        return num[nv] / den[dv];
    }
}

// One raising step on a vector written in powers of the lowering
// generator: state[j] is the coefficient of the j-th power applied to
// the highest-weight vector.  cartan_bracket(j) is the scalar by which
// the bracket of the raising and lowering generators acts on the j-th
// power, and the recurrence applies the defining relation once per
// lowering factor.
template <class Ring>
std::vector<typename Ring::S> quantum_raise(
    const Ring& ring,
    const std::function<typename Ring::S(long)>& cartan_bracket,
    const std::vector<typename Ring::S>& state) {
    using S = typename Ring::S;
    if (state.size() <= 1) return {};
    const std::size_t top = state.size() - 1;
    // raised[j] holds the raising generator applied to the j-th power,
    // again in powers of the lowering generator.
    std::vector<std::vector<S>> raised;
    raised.emplace_back();
    for (std::size_t j = 1; j <= top; ++j) {
        std::vector<S> cur(j, ring.integer(0));
        for (std::size_t p = 0; p < raised[j - 1].size(); ++p)
            cur[p + 1] = raised[j - 1][p];
        cur[j - 1] = cur[j - 1] + cartan_bracket(static_cast<long>(j) - 1);
        raised.push_back(std::move(cur));
    }
    std::vector<S> out(top, ring.integer(0));
    for (std::size_t j = 1; j <= top; ++j) {
        if (ring.is_zero(state[j])) continue;
        for (std::size_t p = 0; p < raised[j].size(); ++p)
            out[p] = out[p] + state[j] * raised[j][p];
    }
    return out;
}

// <(X^-)^n v, (X^-)^n v> by n applications of the raising oracle.
template <class Ring>
typename Ring::S quantum_gram_oracle(
    const Ring& ring,
    const std::function<typename Ring::S(long)>& cartan_bracket, long n) {
    if (n < 1) throw std::invalid_argument("gram depth must be positive");
    std::vector<typename Ring::S> st(static_cast<std::size_t>(n) + 1,
                                     ring.integer(0));
    st[static_cast<std::size_t>(n)] = ring.integer(1);
    for (long i = 0; i < n; ++i) st = quantum_raise(ring, cartan_bracket, st);
    return st.empty() ? ring.integer(0) : st[0];
}

// Finite quantum Gram entry at an integer weight, by the straightening
// oracle: the Cartan bracket acts on the j-th lowering power with the
// symmetrized eigenvalue at weight wt - 2j.
inline Scalar quantum_gram_finite(long weight, long n) {
    QtRing ring;
    auto cb = [weight](long j) {
        return (qt_pow2(0, weight - 2 * j) - qt_pow2(0, 2 * j - weight)) /
               (qt_pow2(0, 1) - qt_pow2(0, -1));
    };
    return quantum_gram_oracle(ring, std::function<Scalar(long)>(cb), n);
}

// Closed form the oracle is checked against.
inline Scalar quantum_gram_finite_closed(long weight, long n) {
    Scalar g = qt_int(1);
    for (long j = 1; j <= n; ++j) g = g * qint(j) * qint(weight - j + 1);
    return g;
}

// Oracle with the weight symbolic through the z unit.
inline WqScalar quantum_gram_symbolic(long n) {
    WqRing ring;
    auto cb = [](long j) {
        return (wq_unit(WQ_Z, 1) * wq_unit(WQ_Q, -2 * j) -
                wq_unit(WQ_Z, -1) * wq_unit(WQ_Q, 2 * j)) /
               (wq_unit(WQ_Q, 1) - wq_unit(WQ_Q, -1));
    };
    return quantum_gram_oracle(ring, std::function<WqScalar(long)>(cb), n);
}

inline WqScalar quantum_gram_symbolic_closed(long n) {
    WqScalar g = wq_int(1);
    for (long j = 1; j <= n; ++j) g = g * wq_qint(j) * wq_weight_int(1 - j);
    return g;
}

}  // namespace qvir
