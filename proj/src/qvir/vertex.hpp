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
#include <vector>

#include "qvir/fock.hpp"

namespace qvir {

// One exponential factor of a current, in mode form. The current's mode M
// acts as
//
//   pref * zq(wt, ch) * exp(sum_{f,m>0} cm[f](m) f_{-m})
//        * exp(sum_{f,n>0} cp[f](n) f_{n})
//
// where the total creation degree attached on top of what the annihilation
// side removed is fixed by the balance -M - s0 - zpow(wt, ch) + (degree
// removed). The weight and charge of every output key shift by dweight and
// dcharge. A current is a list of these data, summed.
template <class Ring>
struct VertexOperatorDatum {
    using S = typename Ring::S;

    S pref;
    std::map<int, std::function<S(long)>> cm;  // creation series, arg > 0
    std::map<int, std::function<S(long)>> cp;  // annihilation series, arg > 0
    std::function<S(int, int)> zq;             // zero-mode factor (wt, ch)
    std::function<long(int, int)> zpow;        // zero-mode power shift
    int dweight = 0;
    int dcharge = 0;
    long s0 = 0;

    explicit VertexOperatorDatum(const Ring& ring)
        : pref(ring.integer(1)),
          zq([one = ring.integer(1)](int, int) { return one; }),
          zpow([](int, int) { return 0L; }) {}
};

template <class Ring>
using Current = std::vector<VertexOperatorDatum<Ring>>;

namespace detail {

template <class S>
S scalar_pow(const S& base, long e) {
    S r = base;
    for (long i = 1; i < e; ++i) r = r * base;
    return r;
}

inline Rat inv_factorial(long m) {
    Rat f(1);
    for (long i = 2; i <= m; ++i) f *= i;
    return Rat(1) / f;
}

}  // namespace detail

// All multisets drawn from items whose mode-number total is at most budget
// (exactly budget when exact is set). Multiplicities count per item; the
// enumeration order is deterministic.
inline std::vector<std::map<OscOp, long>> gen_multisets(
    const std::vector<OscOp>& items, long budget, bool exact) {
    std::vector<std::map<OscOp, long>> out;
    std::map<OscOp, long> cur;
    auto rec = [&](auto&& self, size_t i, long left) -> void {
        if (i == items.size()) {
            if (!exact || left == 0) out.push_back(cur);
            return;
        }
        const OscOp& it = items[i];
        for (long m = 0; m * it.n <= left; ++m) {
            if (m) cur[it] = m;
            self(self, i + 1, left - m * it.n);
            if (m) cur.erase(it);
        }
    };
    rec(rec, 0, budget);
    return out;
}

// Mode M of the exponential datum applied to a state. Expands both
// exponentials against each input key: every way the annihilation side can
// eat part of the key's creation content, times every creation multiset that
// restores the mode balance.
template <class Ring>
FockVector<typename Ring::S> vertex_apply(
    const OscillatorAlgebra<Ring>& alg, const VertexOperatorDatum<Ring>& d,
    long M, const FockVector<typename Ring::S>& st) {
    using S = typename Ring::S;
    const Ring& ring = alg.ring();
    FockVector<S> out;
    for (const auto& [key, c0] : st) {
        long deg = creation_degree(key);
        std::vector<OscOp> ann_items;
        for (const auto& [fam, fn] : d.cp) {
            for (long n = 1; n <= deg; ++n) ann_items.push_back(OscOp{fam, n});
        }
        for (const auto& ann : gen_multisets(ann_items, deg, false)) {
            S coef_a = ring.integer(1);
            FockVector<S> sta{{key, c0}};
            long removed = 0;
            bool dead = false;
            for (const auto& [op, m] : ann) {
                coef_a = coef_a * detail::scalar_pow(d.cp.at(op.fam)(op.n), m) *
                         ring.rational(detail::inv_factorial(m));
                removed += op.n * m;
                for (long j = 0; j < m; ++j) {
                    sta = alg.apply_mode(op.fam, op.n, sta);
                    if (sta.empty()) {
                        dead = true;
                        break;
                    }
                }
                if (dead) break;
            }
            if (dead || sta.empty()) continue;
            S zf = d.zq(key.weight, key.charge);
            long zp = d.zpow(key.weight, key.charge);
            long attach = -M - d.s0 - zp + removed;
            if (attach < 0) continue;
            std::vector<OscOp> cre_items;
            for (const auto& [fam, fn] : d.cm) {
                for (long m = 1; m <= attach; ++m) {
                    cre_items.push_back(OscOp{fam, m});
                }
            }
            std::vector<std::map<OscOp, long>> csets;
            if (attach > 0) {
                csets = gen_multisets(cre_items, attach, true);
            } else {
                csets.emplace_back();
            }
            for (const auto& cre : csets) {
                S coef_c = ring.integer(1);
                std::vector<OscOp> addmono;
                for (const auto& [op, j] : cre) {
                    coef_c = coef_c *
                             detail::scalar_pow(d.cm.at(op.fam)(op.n), j) *
                             ring.rational(detail::inv_factorial(j));
                    addmono.insert(addmono.end(), static_cast<size_t>(j),
                                   OscOp{op.fam, -op.n});
                }
                for (const auto& [k2, cc] : sta) {
                    FockKey nk;
                    nk.weight = k2.weight + d.dweight;
                    nk.charge = k2.charge + d.dcharge;
                    nk.mono = k2.mono;
                    nk.mono.insert(nk.mono.end(), addmono.begin(),
                                   addmono.end());
                    std::sort(nk.mono.begin(), nk.mono.end());
                    fv_accum(out, nk, cc * coef_a * coef_c * zf * d.pref);
                }
            }
        }
    }
    return fv_clean(ring, out);
}

template <class Ring>
FockVector<typename Ring::S> current_apply(
    const OscillatorAlgebra<Ring>& alg, const Current<Ring>& cur, long M,
    const FockVector<typename Ring::S>& st) {
    FockVector<typename Ring::S> out;
    for (const auto& d : cur) out = fv_add(out, vertex_apply(alg, d, M, st));
    return fv_clean(alg.ring(), out);
}

template <class Ring>
FockVector<typename Ring::S> commutator_apply(
    const OscillatorAlgebra<Ring>& alg, const Current<Ring>& c1, long m1,
    const Current<Ring>& c2, long m2,
    const FockVector<typename Ring::S>& st) {
    return fv_sub(current_apply(alg, c1, m1, current_apply(alg, c2, m2, st)),
                  current_apply(alg, c2, m2, current_apply(alg, c1, m1, st)));
}

}  // namespace qvir
