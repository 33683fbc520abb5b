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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qvir/fock.hpp"
#include "qvir/vertex.hpp"

namespace qvir {

template <class Ring>
class Field;

namespace detail {

// Integer power inside the coefficient field; negative exponents divide.
template <class Ring>
typename Ring::S int_pow(const Ring& ring, const typename Ring::S& base,
                         long e) {
    if (e == 0) return ring.integer(1);
    if (e < 0) return ring.integer(1) / int_pow(ring, base, -e);
    auto r = base;
    for (long i = 1; i < e; ++i) r = r * base;
    return r;
}

}  // namespace detail

// One formal-delta summand delta(a u/v) F(v): the component at u^{-n} v^{-m}
// is a^{-n} times mode n+m of the attached field.
template <class Ring>
struct DeltaTerm {
    using S = typename Ring::S;

    S scale;
    std::shared_ptr<const Field<Ring>> attached;

    FockVector<S> component(long n, long m, const FockVector<S>& st) const;
};

// One normally ordered oscillator monomial with a scalar coefficient. The
// ops are handed to OscillatorAlgebra::ordered_apply, which sends
// annihilators in first regardless of the listed order.
template <class S>
struct ModeTerm {
    S coeff;
    std::vector<OscOp> ops;
};

// A formal Laurent distribution, exposed through its modes. Mode n is the
// coefficient of z^{-n}; acting on a vector of creation degree d it lands in
// degree d - n + degree_offset. Modes are computed lazily and memoized per
// (mode, basis key); the cache is a pure cache, so concurrent fills of the
// same entry are benign.
//
// A field may additionally carry a finite oscillator expansion of each mode
// (every current linear in oscillators does). Only such fields can enter
// normal products, because reordering needs the oscillator content.
template <class Ring>
class Field {
  public:
    using S = typename Ring::S;
    using Vec = FockVector<S>;
    using Rule = std::function<Vec(long, const FockKey&)>;
    // Terms of mode n that can act without vanishing on any vector whose
    // creation degree is at most the budget.
    using Expansion = std::function<std::vector<ModeTerm<S>>(long, long)>;

    Field(Ring ring, Rule rule, int degree_offset)
        : impl_(std::make_shared<Impl>()) {
        impl_->ring = std::move(ring);
        impl_->rule = std::move(rule);
        impl_->degree_offset = degree_offset;
    }

    Field(const OscillatorAlgebra<Ring>& alg, Expansion expansion,
          int degree_offset)
        : impl_(std::make_shared<Impl>()) {
        impl_->ring = alg.ring();
        impl_->degree_offset = degree_offset;
        impl_->algebra = std::make_shared<OscillatorAlgebra<Ring>>(alg);
        impl_->expansion = std::move(expansion);
        auto a = impl_->algebra;
        auto ex = impl_->expansion;
        Ring r = impl_->ring;
        impl_->rule = [a, ex, r](long n, const FockKey& key) {
            Vec unit{{key, r.integer(1)}};
            Vec out;
            for (const auto& t : ex(n, creation_degree(key))) {
                if (r.is_zero(t.coeff)) continue;
                for (const auto& [k2, c] : a->ordered_apply(t.ops, unit)) {
                    fv_accum(out, k2, c * t.coeff);
                }
            }
            return fv_clean(r, std::move(out));
        };
    }

    const Ring& ring() const { return impl_->ring; }
    int degree_offset() const { return impl_->degree_offset; }

    bool has_expansion() const { return static_cast<bool>(impl_->expansion); }
    std::vector<ModeTerm<S>> expand(long n, long budget) const {
        return impl_->expansion(n, budget);
    }
    std::shared_ptr<const OscillatorAlgebra<Ring>> algebra() const {
        return impl_->algebra;
    }

    // Formal-delta summands ride along as data; combinators below refuse to
    // mix them, so attachment happens after all composition.
    const std::vector<DeltaTerm<Ring>>& deltas() const {
        return impl_->deltas;
    }
    void add_delta(DeltaTerm<Ring> d) {
        impl_->deltas.push_back(std::move(d));
    }

    Vec mode_key(long n, const FockKey& key) const {
        {
            std::lock_guard<std::mutex> g(impl_->mu);
            auto it = impl_->memo.find({n, key});
            if (it != impl_->memo.end()) return it->second;
        }
        Vec v = impl_->rule(n, key);
        std::lock_guard<std::mutex> g(impl_->mu);
        return impl_->memo.try_emplace({n, key}, std::move(v)).first->second;
    }

    Vec mode(long n, const Vec& st) const {
        Vec out;
        for (const auto& [key, c] : st) {
            if (impl_->ring.is_zero(c)) continue;
            for (const auto& [k2, c2] : mode_key(n, key)) {
                fv_accum(out, k2, c2 * c);
            }
        }
        return fv_clean(impl_->ring, std::move(out));
    }

  private:
    struct Impl {
        Ring ring;
        int degree_offset = 0;
        Rule rule;
        Expansion expansion;
        std::shared_ptr<const OscillatorAlgebra<Ring>> algebra;
        std::vector<DeltaTerm<Ring>> deltas;
        std::mutex mu;
        std::map<std::pair<long, FockKey>, Vec> memo;
    };

    std::shared_ptr<Impl> impl_;
};

template <class Ring>
FockVector<typename Ring::S> DeltaTerm<Ring>::component(
    long n, long m, const FockVector<S>& st) const {
    const Ring& ring = attached->ring();
    S s = detail::int_pow(ring, scale, -n);
    return fv_clean(ring, fv_scale(attached->mode(n + m, st), s));
}

// Wraps an exponential-datum current as a Field. The degree shift is read
// off the intrinsic offsets, which therefore must agree across the summands.
template <class Ring>
Field<Ring> current_field(const OscillatorAlgebra<Ring>& alg,
                          Current<Ring> cur) {
    long s0 = cur.empty() ? 0 : cur.front().s0;
    for (const auto& d : cur) {
        if (d.s0 != s0) {
            throw std::invalid_argument(
                "current summands disagree on the intrinsic mode offset");
        }
    }
    Ring ring = alg.ring();
    auto a = std::make_shared<OscillatorAlgebra<Ring>>(alg);
    auto c = std::make_shared<Current<Ring>>(std::move(cur));
    typename Field<Ring>::Rule rule = [a, c, ring](long n, const FockKey& k) {
        FockVector<typename Ring::S> unit{{k, ring.integer(1)}};
        return current_apply(*a, *c, n, unit);
    };
    return Field<Ring>(ring, std::move(rule), static_cast<int>(-s0));
}

// Linear field whose mode n is coeff(n) * x_n for one family; a null coeff
// means the constant 1.
template <class Ring>
Field<Ring> oscillator_field(
    const OscillatorAlgebra<Ring>& alg, int fam,
    std::function<typename Ring::S(long)> coeff = nullptr) {
    using S = typename Ring::S;
    Ring ring = alg.ring();
    typename Field<Ring>::Expansion ex = [fam, coeff, ring](long n, long) {
        S c = coeff ? coeff(n) : ring.integer(1);
        std::vector<ModeTerm<S>> out;
        if (!ring.is_zero(c)) out.push_back({c, {OscOp{fam, n}}});
        return out;
    };
    return Field<Ring>(alg, std::move(ex), 0);
}

// Scalar Laurent series acting by multiplication; modes index z^{-n}.
template <class Ring>
Field<Ring> scalar_field(const OscillatorAlgebra<Ring>& alg,
                         std::map<long, typename Ring::S> modes) {
    using S = typename Ring::S;
    auto m = std::make_shared<std::map<long, S>>(std::move(modes));
    typename Field<Ring>::Expansion ex = [m](long n, long) {
        std::vector<ModeTerm<S>> out;
        auto it = m->find(n);
        if (it != m->end()) out.push_back({it->second, {}});
        return out;
    };
    return Field<Ring>(alg, std::move(ex), 0);
}

namespace detail {

template <class Ring>
void require_plain(const Field<Ring>& f) {
    if (!f.deltas().empty()) {
        throw std::invalid_argument(
            "field combinators do not distribute over formal-delta terms");
    }
}

}  // namespace detail

template <class Ring>
Field<Ring> field_scale(const Field<Ring>& f, typename Ring::S c) {
    detail::require_plain(f);
    using S = typename Ring::S;
    Ring ring = f.ring();
    if (f.has_expansion()) {
        auto base = f;
        typename Field<Ring>::Expansion ex = [base, c](long n, long budget) {
            auto terms = base.expand(n, budget);
            for (auto& t : terms) t.coeff = t.coeff * c;
            return terms;
        };
        return Field<Ring>(*f.algebra(), std::move(ex), f.degree_offset());
    }
    auto base = f;
    typename Field<Ring>::Rule rule = [base, c, ring](long n,
                                                      const FockKey& k) {
        FockVector<S> unit{{k, ring.integer(1)}};
        return fv_clean(ring, fv_scale(base.mode(n, unit), c));
    };
    return Field<Ring>(ring, std::move(rule), f.degree_offset());
}

// Argument rescale z -> c z: mode n picks up the factor c^{-n}. The scale
// must be a unit; negative modes divide by it.
template <class Ring>
Field<Ring> argument_scale(const Field<Ring>& f, typename Ring::S c) {
    detail::require_plain(f);
    using S = typename Ring::S;
    Ring ring = f.ring();
    if (f.has_expansion()) {
        auto base = f;
        typename Field<Ring>::Expansion ex = [base, c, ring](long n,
                                                             long budget) {
            S s = detail::int_pow(ring, c, -n);
            auto terms = base.expand(n, budget);
            for (auto& t : terms) t.coeff = t.coeff * s;
            return terms;
        };
        return Field<Ring>(*f.algebra(), std::move(ex), f.degree_offset());
    }
    auto base = f;
    typename Field<Ring>::Rule rule = [base, c, ring](long n,
                                                      const FockKey& k) {
        FockVector<S> unit{{k, ring.integer(1)}};
        S s = detail::int_pow(ring, c, -n);
        return fv_clean(ring, fv_scale(base.mode(n, unit), s));
    };
    return Field<Ring>(ring, std::move(rule), f.degree_offset());
}

template <class Ring>
Field<Ring> field_sum(const Field<Ring>& f, const Field<Ring>& g) {
    detail::require_plain(f);
    detail::require_plain(g);
    if (f.degree_offset() != g.degree_offset()) {
        throw std::invalid_argument("summed fields must share a degree shift");
    }
    using S = typename Ring::S;
    Ring ring = f.ring();
    if (f.has_expansion() && g.has_expansion()) {
        auto a = f;
        auto b = g;
        typename Field<Ring>::Expansion ex = [a, b](long n, long budget) {
            auto terms = a.expand(n, budget);
            auto more = b.expand(n, budget);
            terms.insert(terms.end(), more.begin(), more.end());
            return terms;
        };
        return Field<Ring>(*f.algebra(), std::move(ex), f.degree_offset());
    }
    auto a = f;
    auto b = g;
    typename Field<Ring>::Rule rule = [a, b, ring](long n, const FockKey& k) {
        FockVector<S> unit{{k, ring.integer(1)}};
        return fv_clean(ring,
                        fv_add(a.mode(n, unit), b.mode(n, unit)));
    };
    return Field<Ring>(ring, std::move(rule), f.degree_offset());
}

// Modewise normal-ordered product: mode n collects :F_i G_{n-i}:. On a
// vector of creation degree d the index is confined to n - d <= i <= d,
// because the annihilation content of a term acts on the original vector
// only (creators are deferred by the ordering), so each factor's net
// annihilation is capped by d.
template <class Ring>
Field<Ring> normal_product(const Field<Ring>& f, const Field<Ring>& g) {
    detail::require_plain(f);
    detail::require_plain(g);
    if (!f.has_expansion() || !g.has_expansion()) {
        throw std::invalid_argument(
            "normal product needs the oscillator expansion of both factors");
    }
    using S = typename Ring::S;
    auto a = f;
    auto b = g;
    typename Field<Ring>::Expansion ex = [a, b](long n, long budget) {
        std::vector<ModeTerm<S>> out;
        for (long i = n - budget; i <= budget; ++i) {
            auto left = a.expand(i, budget);
            if (left.empty()) continue;
            auto right = b.expand(n - i, budget);
            for (const auto& lt : left) {
                for (const auto& rt : right) {
                    ModeTerm<S> t{lt.coeff * rt.coeff, lt.ops};
                    t.ops.insert(t.ops.end(), rt.ops.begin(), rt.ops.end());
                    out.push_back(std::move(t));
                }
            }
        }
        return out;
    };
    return Field<Ring>(*f.algebra(), std::move(ex),
                       f.degree_offset() + g.degree_offset());
}

// (F(q^n z) - F(q^{-n} z)) / ((q - q^{-1}) z), computed modewise: the
// coefficient at z^m moves to z^{m-1} scaled by the symmetric integer of
// n*m. In mode labels, mode M of the result is [n(1-M)] F_{M-1}.
template <class Ring>
Field<Ring> q_difference(const Field<Ring>& f, long n) {
    detail::require_plain(f);
    using S = typename Ring::S;
    Ring ring = f.ring();
    if (f.has_expansion()) {
        auto base = f;
        typename Field<Ring>::Expansion ex = [base, ring, n](long m,
                                                             long budget) {
            S s = ring.qi(0, n * (1 - m));
            std::vector<ModeTerm<S>> terms;
            if (ring.is_zero(s)) return terms;
            terms = base.expand(m - 1, budget);
            for (auto& t : terms) t.coeff = t.coeff * s;
            return terms;
        };
        return Field<Ring>(*f.algebra(), std::move(ex),
                           f.degree_offset() + 1);
    }
    auto base = f;
    typename Field<Ring>::Rule rule = [base, ring, n](long m,
                                                      const FockKey& k) {
        S s = ring.qi(0, n * (1 - m));
        if (ring.is_zero(s)) return FockVector<S>{};
        FockVector<S> unit{{k, ring.integer(1)}};
        return fv_clean(ring, fv_scale(base.mode(m - 1, unit), s));
    };
    return Field<Ring>(ring, std::move(rule), f.degree_offset() + 1);
}

// Coefficient of z^{-1}; the convention every charge construction uses.
template <class Ring>
FockVector<typename Ring::S> residue_apply(
    const Field<Ring>& f, const FockVector<typename Ring::S>& st) {
    return f.mode(1, st);
}

// Confirms the declared degree shift against every basis vector of the
// truncated space, across the mode window.
template <class Ring>
bool check_degree_shift(const OscillatorAlgebra<Ring>& alg,
                        const Field<Ring>& f, const std::vector<int>& fams,
                        int weight, long degree, long window, int charge = 0) {
    using S = typename Ring::S;
    for (long d = 0; d <= degree; ++d) {
        for (const auto& key : make_space(fams, weight, d, charge)) {
            FockVector<S> unit{{key, alg.ring().integer(1)}};
            for (long n = -window; n <= window; ++n) {
                for (const auto& [k2, c] : f.mode(n, unit)) {
                    if (creation_degree(k2) != d - n + f.degree_offset()) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

// ---- total difference in a scaled variable ------------------------------

namespace detail {

template <class Ring>
bool value_is_zero(const Ring& ring, const typename Ring::S& v) {
    return ring.is_zero(v);
}

template <class Ring>
bool value_is_zero(const Ring& ring,
                   const FockVector<typename Ring::S>& v) {
    return fv_is_zero(ring, v);
}

template <class Ring>
typename Ring::S scale_value(const Ring&, const typename Ring::S& v,
                             const typename Ring::S& c) {
    return v * c;
}

template <class Ring>
FockVector<typename Ring::S> scale_value(
    const Ring& ring, const FockVector<typename Ring::S>& v,
    const typename Ring::S& c) {
    return fv_clean(ring, fv_scale(v, c));
}

}  // namespace detail

// Result of solving G(pw) - G(w) = F coefficientwise. Either a witness G on
// the nonzero modes, or the w^0 coefficient of F as the obstruction.
template <class Ring, class V>
struct DifferenceWitness {
    std::map<long, V> witness;
    std::optional<V> obstruction;

    bool solvable() const { return !obstruction.has_value(); }
};

// Modes index w^{-n}, so matching coefficients gives G_n (p^{-n} - 1) = F_n;
// the n = 0 equation is unsolvable unless F_0 vanishes. A step p that is a
// root of unity at a needed order leaves that mode undetermined and is
// reported as a resonance.
template <class Ring, class V>
DifferenceWitness<Ring, V> total_p_difference_witness(
    const Ring& ring, const std::map<long, V>& series,
    const typename Ring::S& p) {
    DifferenceWitness<Ring, V> out;
    auto z = series.find(0);
    if (z != series.end() && !detail::value_is_zero(ring, z->second)) {
        out.obstruction = z->second;
        return out;
    }
    for (const auto& [n, v] : series) {
        if (n == 0 || detail::value_is_zero(ring, v)) continue;
        // the explicit type forces evaluation: with a plain mpq backend the
        // expression template would dangle past the temporaries
        typename Ring::S denom =
            detail::int_pow(ring, p, -n) - ring.integer(1);
        if (ring.is_zero(denom)) {
            throw std::domain_error(
                "difference witness hits a resonance: the step is a root of "
                "unity at a needed order");
        }
        out.witness[n] =
            detail::scale_value(ring, v, ring.integer(1) / denom);
    }
    return out;
}

// G(pw) - G(w) for a mode table G; back-substitution check for witnesses.
template <class Ring, class V>
std::map<long, V> step_difference(const Ring& ring,
                                  const std::map<long, V>& modes,
                                  const typename Ring::S& p) {
    std::map<long, V> out;
    for (const auto& [n, v] : modes) {
        typename Ring::S c = detail::int_pow(ring, p, -n) - ring.integer(1);
        auto sv = detail::scale_value(ring, v, c);
        if (!detail::value_is_zero(ring, sv)) out[n] = std::move(sv);
    }
    return out;
}

}  // namespace qvir
