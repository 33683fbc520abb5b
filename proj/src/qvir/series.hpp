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

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qvir/rational.hpp"

namespace qvir {

// Power series in one formal variable truncated at a fixed order. The
// coefficient ring R must default-construct to zero, be constructible from
// Rat, and support +, -, *, /, is_zero().
template <class R>
class TruncSeries {
  public:
    explicit TruncSeries(std::size_t order) : c_(order + 1) {}

    static TruncSeries constant(std::size_t order, R v) {
        TruncSeries s(order);
        s.c_[0] = std::move(v);
        return s;
    }

    std::size_t order() const { return c_.size() - 1; }
    const R& operator[](std::size_t i) const { return c_[i]; }
    R& operator[](std::size_t i) { return c_[i]; }

    bool is_zero() const {
        for (const R& x : c_) {
            if (!x.is_zero()) return false;
        }
        return true;
    }

    // Index of the lowest nonzero coefficient, or order()+1 if none.
    std::size_t valuation() const {
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!c_[i].is_zero()) return i;
        }
        return c_.size();
    }

    TruncSeries operator+(const TruncSeries& o) const {
        assert(order() == o.order());
        TruncSeries r(order());
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
        return r;
    }

    TruncSeries operator-(const TruncSeries& o) const {
        assert(order() == o.order());
        TruncSeries r(order());
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
        return r;
    }

    TruncSeries operator*(const TruncSeries& o) const {
        assert(order() == o.order());
        TruncSeries r(order());
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            for (std::size_t j = 0; i + j < c_.size(); ++j) {
                if (o.c_[j].is_zero()) continue;
                r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
            }
        }
        return r;
    }

    TruncSeries scaled(const R& s) const {
        TruncSeries r(order());
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s;
        return r;
    }

    // Multiplicative inverse; the constant term must be invertible.
    TruncSeries inverse() const {
        if (c_[0].is_zero()) {
            throw std::domain_error("series inverse needs a unit constant term");
        }
        TruncSeries r(order());
        R inv0 = R(Rat(1)) / c_[0];
        r.c_[0] = inv0;
        for (std::size_t n = 1; n < c_.size(); ++n) {
            R acc;
            for (std::size_t j = 1; j <= n; ++j) {
                if (c_[j].is_zero() || r.c_[n - j].is_zero()) continue;
                acc = acc + c_[j] * r.c_[n - j];
            }
            r.c_[n] = R() - inv0 * acc;
        }
        return r;
    }

    // exp of a series with zero constant term, via n*e_n = sum j*a_j*e_{n-j}.
    TruncSeries exp() const {
        if (!c_[0].is_zero()) {
            throw std::domain_error("series exp needs zero constant term");
        }
        TruncSeries e(order());
        e.c_[0] = R(Rat(1));
        for (std::size_t n = 1; n < c_.size(); ++n) {
            R acc;
            for (std::size_t j = 1; j <= n; ++j) {
                if (c_[j].is_zero() || e.c_[n - j].is_zero()) continue;
                acc = acc + c_[j] * R(Rat(static_cast<long>(j))) * e.c_[n - j];
            }
            e.c_[n] = acc / R(Rat(static_cast<long>(n)));
        }
        return e;
    }

  private:
    std::vector<R> c_;
};

}  // namespace qvir
