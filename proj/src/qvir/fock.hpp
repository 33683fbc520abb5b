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
#include <compare>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qvir/rational.hpp"

namespace qvir {

// One oscillator mode: a family index into an algebra's registry plus the
// mode number. Negative modes create; mode 0 also creates for lower-paired
// families.
struct OscOp {
    int fam = 0;
    long n = 0;
    friend auto operator<=>(const OscOp&, const OscOp&) = default;
};

// Basis vector label of a charged Fock space: the weight entry, the lattice
// charge, and the sorted multiset of creation modes applied to the vacuum.
// The weight entry is an integer; engines decide whether it is the weight
// itself or an offset against a symbolic one.
struct FockKey {
    int weight = 0;
    int charge = 0;
    std::vector<OscOp> mono;
    friend auto operator<=>(const FockKey&, const FockKey&) = default;
};

inline long creation_degree(const FockKey& k) {
    long d = 0;
    for (const auto& op : k.mono) d -= op.n;
    return d;
}

// Sparse vector in a direct sum of Fock spaces.
template <class S>
using FockVector = std::map<FockKey, S>;

template <class S>
void fv_accum(FockVector<S>& st, const FockKey& k, const S& c) {
    auto [it, fresh] = st.try_emplace(k, c);
    if (!fresh) it->second = it->second + c;
}

template <class S>
FockVector<S> fv_add(FockVector<S> a, const FockVector<S>& b) {
    for (const auto& [k, c] : b) fv_accum(a, k, c);
    return a;
}

template <class S>
FockVector<S> fv_sub(FockVector<S> a, const FockVector<S>& b) {
    for (const auto& [k, c] : b) fv_accum(a, k, -c);
    return a;
}

template <class S>
FockVector<S> fv_scale(FockVector<S> st, const S& s) {
    for (auto& [k, c] : st) c = c * s;
    return st;
}

template <class S>
long fv_degree(const FockVector<S>& st) {
    long d = 0;
    for (const auto& [k, c] : st) d = std::max(d, creation_degree(k));
    return d;
}

template <class Ring>
FockVector<typename Ring::S> fv_clean(const Ring& ring,
                                      FockVector<typename Ring::S> st) {
    for (auto it = st.begin(); it != st.end();) {
        if (ring.is_zero(it->second)) {
            it = st.erase(it);
        } else {
            ++it;
        }
    }
    return st;
}

template <class Ring>
bool fv_is_zero(const Ring& ring, const FockVector<typename Ring::S>& st) {
    for (const auto& [k, c] : st) {
        if (!ring.is_zero(c)) return false;
    }
    return true;
}

// How a family's modes act.
enum class OscKind {
    PairLower,    // creates at n <= 0, annihilates at n > 0 against partner
    PairUpper,    // creates at n < 0, annihilates at n >= 0 against partner
    EigenWeight,  // zero mode multiplies by the weight-entry eigenvalue
    EigenCharge,  // zero mode multiplies by charge_step * charge
};

template <class S>
struct OscillatorSpec {
    std::string name;
    OscKind kind = OscKind::EigenWeight;
    int partner = -1;     // family index paired under annihilation; -1: self
    int charge_step = 0;  // zero-mode factor per unit charge (EigenCharge)
    std::function<S(long)> pairing;  // [x_n, partner_{-n}] for annihilating n
};

// Heisenberg-type oscillator algebra acting on charged Fock spaces over a
// commutative coefficient ring.
template <class Ring>
class OscillatorAlgebra {
  public:
    using S = typename Ring::S;

    explicit OscillatorAlgebra(Ring ring) : ring_(std::move(ring)) {}

    const Ring& ring() const { return ring_; }

    int add_family(OscillatorSpec<S> spec) {
        int idx = static_cast<int>(fams_.size());
        if (spec.partner < 0) spec.partner = idx;
        fams_.push_back(std::move(spec));
        return idx;
    }

    const OscillatorSpec<S>& family(int i) const {
        return fams_.at(static_cast<size_t>(i));
    }
    int family_count() const { return static_cast<int>(fams_.size()); }

    int family_index(const std::string& name) const {
        for (size_t i = 0; i < fams_.size(); ++i) {
            if (fams_[i].name == name) return static_cast<int>(i);
        }
        throw std::invalid_argument("unknown oscillator family: " + name);
    }

    // Eigenvalue of the weight zero mode as a function of the key's weight
    // entry. The default reads the entry as a ring integer; engines with a
    // symbolic weight install their own map.
    void set_weight_value(std::function<S(int)> f) {
        weight_value_ = std::move(f);
    }

    bool is_annihilator(int fam, long n) const {
        if (n > 0) return true;
        if (n < 0) return false;
        return family(fam).kind == OscKind::PairUpper;
    }

    FockVector<S> vacuum(int weight, int charge = 0) const {
        FockVector<S> st;
        st.emplace(FockKey{weight, charge, {}}, ring_.integer(1));
        return st;
    }

    FockVector<S> apply_mode(int fam, long n, const FockVector<S>& st) const {
        const auto& f = family(fam);
        FockVector<S> out;
        for (const auto& [key, c] : st) {
            if (n < 0 || (n == 0 && f.kind == OscKind::PairLower)) {
                FockKey nk = key;
                OscOp op{fam, n};
                nk.mono.insert(
                    std::upper_bound(nk.mono.begin(), nk.mono.end(), op), op);
                fv_accum(out, nk, c);
            } else if (n == 0 && f.kind == OscKind::EigenWeight) {
                fv_accum(out, key, c * weight_eigen(key.weight));
            } else if (n == 0 && f.kind == OscKind::EigenCharge) {
                S ev = ring_.integer(static_cast<long>(f.charge_step) *
                                     key.charge);
                fv_accum(out, key, c * ev);
            } else {
                OscOp target{f.partner, -n};
                long cnt = static_cast<long>(
                    std::count(key.mono.begin(), key.mono.end(), target));
                if (cnt == 0) continue;
                FockKey nk = key;
                nk.mono.erase(
                    std::find(nk.mono.begin(), nk.mono.end(), target));
                fv_accum(out, nk, c * ring_.integer(cnt) * f.pairing(n));
            }
        }
        return fv_clean(ring_, out);
    }

    // Normal-ordered product of single oscillators: annihilators act first,
    // with an early exit once the state dies.
    FockVector<S> ordered_apply(const std::vector<OscOp>& ops,
                                const FockVector<S>& st) const {
        FockVector<S> cur = st;
        for (const auto& op : ops) {
            if (!is_annihilator(op.fam, op.n)) continue;
            cur = apply_mode(op.fam, op.n, cur);
            if (cur.empty()) return cur;
        }
        for (const auto& op : ops) {
            if (is_annihilator(op.fam, op.n)) continue;
            cur = apply_mode(op.fam, op.n, cur);
        }
        return cur;
    }

  private:
    S weight_eigen(int w) const {
        if (weight_value_) return weight_value_(w);
        return ring_.integer(w);
    }

    Ring ring_;
    std::vector<OscillatorSpec<S>> fams_;
    std::function<S(int)> weight_value_;
};

// All partitions of n, parts in decreasing order within a partition, listed
// by decreasing first part. Deterministic.
inline std::vector<std::vector<long>> partitions_of(long n) {
    std::vector<std::vector<long>> out;
    std::vector<long> cur;
    auto rec = [&](auto&& self, long left, long mx) -> void {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (long first = std::min(left, mx); first >= 1; --first) {
            cur.push_back(first);
            self(self, left - first, first);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

namespace detail {

inline void space_rec(const std::vector<int>& fams, size_t i, long left,
                      std::vector<OscOp>& acc, int weight, int charge,
                      std::vector<FockKey>& out) {
    if (i == fams.size()) {
        if (left == 0) {
            FockKey k{weight, charge, acc};
            std::sort(k.mono.begin(), k.mono.end());
            out.push_back(std::move(k));
        }
        return;
    }
    for (long df = 0; df <= left; ++df) {
        for (const auto& p : partitions_of(df)) {
            size_t base = acc.size();
            for (long m : p) acc.push_back(OscOp{fams[i], -m});
            space_rec(fams, i + 1, left - df, acc, weight, charge, out);
            acc.resize(base);
        }
    }
}

}  // namespace detail

// All monomial basis keys of exact creation degree over the given families,
// in a deterministic generation order. Zero modes are not enumerated.
inline std::vector<FockKey> make_space(const std::vector<int>& fams,
                                       int weight, long degree,
                                       int charge = 0) {
    std::vector<FockKey> out;
    std::vector<OscOp> acc;
    detail::space_rec(fams, 0, degree, acc, weight, charge, out);
    return out;
}

// Diagnostic rendering; deterministic because the map order is.
template <class Ring>
std::string state_str(
    const OscillatorAlgebra<Ring>& alg,
    const FockVector<typename Ring::S>& st,
    const std::function<std::string(const typename Ring::S&)>& fmt) {
    if (st.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : st) {
        if (!first) os << "  +  ";
        first = false;
        os << "(" << fmt(c) << ") * |wt=" << k.weight << ", ch=" << k.charge;
        for (const auto& op : k.mono) {
            os << ", " << alg.family(op.fam).name << "(" << op.n << ")";
        }
        os << ">";
    }
    return os.str();
}

}  // namespace qvir
