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

#include <doctest.h>

#include "qvir/field.hpp"
#include "qvir/rings.hpp"

using namespace qvir;

namespace {

OscillatorAlgebra<QtRing> heisenberg_toy() {
    OscillatorAlgebra<QtRing> alg{QtRing{}};
    alg.add_family({"a", OscKind::EigenWeight, -1, 0, [](long n) {
                        return qint(2 * n) * qint2(2 * n, 2 * n) / qt_int(n);
                    }});
    return alg;
}

OscillatorAlgebra<ClassicalRing> pair_and_boson() {
    OscillatorAlgebra<ClassicalRing> alg{ClassicalRing{}};
    alg.add_family({"w", OscKind::PairLower, 1, 0, [](long) {
                        return cl_int(1);
                    }});
    alg.add_family({"W", OscKind::PairUpper, 0, 0, [](long) {
                        return cl_int(-1);
                    }});
    alg.add_family({"a", OscKind::EigenWeight, -1, 0, [](long n) {
                        return cl_int(2) * (cl_level() + cl_int(2)) *
                               cl_int(n);
                    }});
    alg.set_weight_value([](int w) { return cl_weight() + cl_int(w); });
    return alg;
}

template <class Ring>
bool single_entry(const Ring& ring,
                  const FockVector<typename Ring::S>& st, const FockKey& k,
                  const typename Ring::S& c) {
    if (st.size() != 1) return false;
    auto it = st.find(k);
    return it != st.end() && ring.is_zero(it->second - c);
}

}  // namespace

TEST_CASE("modewise scaled-argument difference of scalar series") {
    QtRing ring;
    auto alg = heisenberg_toy();
    auto vac = alg.vacuum(0);

    SUBCASE("a constant series is killed") {
        auto f = scalar_field(alg, {{0, qt_int(9)}});
        auto g = q_difference(f, 2);
        for (long m = -4; m <= 4; ++m) CHECK(g.mode(m, vac).empty());
    }
    SUBCASE("first power drops to the symmetric integer of one") {
        auto f = scalar_field(alg, {{-1, qt_int(1)}});
        auto g = q_difference(f, 1);
        CHECK(single_entry(ring, g.mode(0, vac), FockKey{0, 0, {}},
                           qt_int(1)));
    }
    SUBCASE("second power picks up a two") {
        auto f = scalar_field(alg, {{-2, qt_int(1)}});
        auto g = q_difference(f, 1);
        CHECK(single_entry(ring, g.mode(-1, vac), FockKey{0, 0, {}},
                           qint(2)));
        CHECK(g.degree_offset() == f.degree_offset() + 1);
    }
    SUBCASE("the residue of a total difference vanishes") {
        std::map<long, Scalar> modes;
        for (long m = -6; m <= 6; ++m) modes[m] = qt_int(m * m + 1);
        auto f = scalar_field(alg, modes);
        for (long n = 1; n <= 3; ++n) {
            CHECK(residue_apply(q_difference(f, n), vac).empty());
        }
        // and on an operator field
        auto af = oscillator_field(alg, 0);
        auto st = alg.apply_mode(0, -1, vac);
        CHECK(residue_apply(q_difference(af, 1), st).empty());
    }
}

TEST_CASE("normal products") {
    SUBCASE("multiplying by the constant one is the identity") {
        QtRing ring;
        auto alg = heisenberg_toy();
        auto af = oscillator_field(alg, 0);
        auto unit = scalar_field(alg, {{0, qt_int(1)}});
        auto prod = normal_product(af, unit);
        auto st = alg.apply_mode(0, -2, alg.vacuum(3));
        for (long n = -2; n <= 2; ++n) {
            CHECK(fv_is_zero(ring,
                             fv_sub(prod.mode(n, st), af.mode(n, st))));
        }
        CHECK(prod.degree_offset() == 0);
    }
    SUBCASE("a dual pair normally ordered kills the vacuum at mode zero") {
        auto alg = pair_and_boson();
        auto wf = oscillator_field(alg, 0);
        auto Wf = oscillator_field(alg, 1);
        auto prod = normal_product(wf, Wf);
        CHECK(prod.mode(0, alg.vacuum(0)).empty());

        // one quantum in: only the fully contracted and the re-created
        // terms survive, with the pairing sign
        auto st = alg.apply_mode(0, -1, alg.vacuum(0));
        auto out = prod.mode(0, st);
        REQUIRE(out.size() == 1);
        CHECK((out.begin()->second + cl_int(1)).is_zero());
    }
    SUBCASE("squared boson reads off the squared weight") {
        QtRing ring;
        auto alg = heisenberg_toy();
        auto af = oscillator_field(alg, 0);
        auto sq = normal_product(af, af);
        auto out = sq.mode(0, alg.vacuum(5));
        CHECK(single_entry(ring, out, FockKey{5, 0, {}}, qt_int(25)));
    }
    SUBCASE("squared boson with a symbolic weight entry") {
        auto alg = pair_and_boson();
        auto af = oscillator_field(alg, 2);
        auto sq = normal_product(af, af);
        auto out = sq.mode(0, alg.vacuum(0));
        REQUIRE(out.size() == 1);
        CHECK((out.begin()->second - cl_weight() * cl_weight()).is_zero());
    }
    SUBCASE("factors without an oscillator expansion are rejected") {
        QtRing ring;
        auto alg = heisenberg_toy();
        auto af = oscillator_field(alg, 0);
        Field<QtRing> opaque(
            ring,
            [ring](long, const FockKey& k) {
                return FockVector<Scalar>{{k, ring.integer(1)}};
            },
            0);
        CHECK_THROWS_AS(normal_product(af, opaque), std::invalid_argument);
    }
}

TEST_CASE("field linear combinations") {
    QtRing ring;
    auto alg = heisenberg_toy();
    auto af = oscillator_field(alg, 0);
    auto st = alg.apply_mode(0, -1, alg.vacuum(2));

    auto doubled = field_sum(af, af);
    auto scaled = field_scale(af, qt_int(2));
    for (long n : {-1L, 0L, 1L}) {
        CHECK(fv_is_zero(
            ring, fv_sub(doubled.mode(n, st), scaled.mode(n, st))));
    }

    auto shifted = q_difference(af, 1);
    CHECK_THROWS_AS(field_sum(af, shifted), std::invalid_argument);

    auto with_delta = oscillator_field(alg, 0);
    with_delta.add_delta(DeltaTerm<QtRing>{
        qt_int(1), std::make_shared<const Field<QtRing>>(af)});
    CHECK_THROWS_AS(field_scale(with_delta, qt_int(2)),
                    std::invalid_argument);
}

TEST_CASE("formal-delta component extraction") {
    QtRing ring;
    auto alg = heisenberg_toy();
    auto af = std::make_shared<const Field<QtRing>>(oscillator_field(alg, 0));
    DeltaTerm<QtRing> dt{qt_pow2(0, 2), af};

    auto st = alg.apply_mode(0, -2, alg.vacuum(0));
    auto got = dt.component(-1, 3, st);
    // scale^{-n} = q^2 against mode 2 of the attached field
    auto expect = fv_scale(af->mode(2, st), qt_pow2(0, 2));
    CHECK(fv_is_zero(ring, fv_sub(got, expect)));

    auto wvac = alg.vacuum(7);
    auto got0 = dt.component(1, -1, wvac);
    CHECK(single_entry(ring, got0, FockKey{7, 0, {}},
                       qt_int(7) * qt_pow2(0, -2)));

    // components depend on (n, m) only through n + m and the power of the
    // scale, which is the defining substitution property
    auto a1 = dt.component(-2, 4, st);
    auto a2 = fv_scale(dt.component(0, 2, st), qt_pow2(0, 4));
    CHECK(fv_is_zero(ring, fv_sub(a1, a2)));
}

TEST_CASE("wrapped exponential currents") {
    QtRing ring;
    OscillatorAlgebra<QtRing> alg{ring};
    int A = alg.add_family({"A", OscKind::EigenWeight, -1, 0, [](long n) {
        return qint2(2 * n, 2 * n) * qint(n) *
               (qt_pow2(2 * n, n) + qt_pow2(-2 * n, -n)) / qt_int(n);
    }});

    VertexOperatorDatum<QtRing> d{ring};
    d.cm[A] = [](long m) { return -qt_int(1) / qint2(2 * m, 2 * m); };
    d.cp[A] = [](long n) { return qt_int(1) / qint2(2 * n, 2 * n); };
    d.dweight = -2;
    d.s0 = -1;

    auto f = current_field(alg, Current<QtRing>{d});
    CHECK(f.degree_offset() == 1);
    CHECK(check_degree_shift(alg, f, {A}, 0, 3, 2));

    auto st = alg.apply_mode(A, -1, alg.vacuum(0));
    auto out = residue_apply(f, st);
    REQUIRE(out.size() == 1);
    // the charge at the natural mode is the s0-shifted balance, so the
    // residue lands one degree above the bare exponential's mode one
    CHECK(out.begin()->first == FockKey{-2, 0, {{A, -1}}});

    VertexOperatorDatum<QtRing> other{ring};
    other.s0 = 1;
    CHECK_THROWS_AS(current_field(alg, Current<QtRing>{d, other}),
                    std::invalid_argument);
}

TEST_CASE("total difference witness in a scaled variable") {
    QtRing ring;
    Scalar p = qt_pow2(4, 4);

    SUBCASE("linear solvable case") {
        std::map<long, Scalar> f{{-1, p - qt_int(1)}};
        auto w = total_p_difference_witness(ring, f, p);
        CHECK(w.solvable());
        REQUIRE(w.witness.size() == 1);
        CHECK((w.witness.at(-1) - qt_int(1)).is_zero());
        auto back = step_difference(ring, w.witness, p);
        REQUIRE(back.size() == 1);
        CHECK((back.at(-1) - f.at(-1)).is_zero());
    }
    SUBCASE("a bare constant obstructs") {
        std::map<long, Scalar> f{{0, qt_int(3)}};
        auto w = total_p_difference_witness(ring, f, p);
        CHECK(!w.solvable());
        CHECK(w.witness.empty());
        CHECK((*w.obstruction - qt_int(3)).is_zero());
    }
    SUBCASE("quadratic case verified by back-substitution") {
        std::map<long, Scalar> f{{-2, qt_int(1)}};
        auto w = total_p_difference_witness(ring, f, p);
        REQUIRE(w.solvable());
        auto back = step_difference(ring, w.witness, p);
        REQUIRE(back.size() == 1);
        CHECK((back.at(-2) - qt_int(1)).is_zero());
    }
    SUBCASE("operator-valued coefficients") {
        auto alg = heisenberg_toy();
        auto st = alg.apply_mode(0, -1, alg.vacuum(1));
        std::map<long, FockVector<Scalar>> f{{2, st}};
        auto w = total_p_difference_witness(ring, f, p);
        REQUIRE(w.solvable());
        auto back = step_difference(ring, w.witness, p);
        CHECK(fv_is_zero(ring, fv_sub(back.at(2), st)));
    }
    SUBCASE("unit step resonates") {
        std::map<long, Scalar> f{{1, qt_int(1)}};
        CHECK_THROWS_AS(total_p_difference_witness(ring, f, qt_int(1)),
                        std::domain_error);
    }
    SUBCASE("rational point resonance at the needed order only") {
        RatPointRing rring;
        Rat rp(-1);
        std::map<long, Rat> bad{{-2, Rat(5)}};
        CHECK_THROWS_AS(total_p_difference_witness(rring, bad, rp),
                        std::domain_error);
        std::map<long, Rat> good{{-1, Rat(5)}};
        auto w = total_p_difference_witness(rring, good, rp);
        CHECK(w.solvable());
        CHECK(w.witness.at(-1) == Rat(-5, 2));
    }
}
