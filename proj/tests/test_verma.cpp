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

#include "qvir/verma.hpp"

namespace qvir {
namespace {

const AffineRoot kAlpha0{1, 0};
const AffineRoot kAlpha1{0, 1};
const AffineRoot kDelta{1, 1};

TEST_CASE("root datum invariants") {
    CHECK(root_pairing(kAlpha0, kAlpha0) == 2);
    CHECK(root_pairing(kAlpha1, kAlpha1) == 2);
    CHECK(root_pairing(kAlpha0, kAlpha1) == -2);
    CHECK(root_pairing(kDelta, kDelta) == 0);
    CHECK(root_pairing(kDelta, kAlpha1) == 0);
    CHECK(rho_pairing(kDelta) == 2);

    CHECK(weight_rho_pairing(kAlpha1) == cl_weight() + cl_int(1));
    CHECK(weight_rho_pairing(kAlpha0) == cl_level() - cl_weight() + cl_int(1));
    CHECK(weight_rho_pairing(kDelta) == cl_level() + cl_int(2));

    auto roots = positive_roots(8);
    CHECK(roots.size() == 12);
    // Increasing normal order: both real roots of each odd height come
    // before the imaginary root of the next even height.
    CHECK(roots[0] == kAlpha0);
    CHECK(roots[1] == kAlpha1);
    CHECK(roots[2] == kDelta);
    CHECK(roots[3] == AffineRoot{2, 1});
    CHECK(roots[4] == AffineRoot{1, 2});
    CHECK(roots[5] == AffineRoot{2, 2});
    for (std::size_t i = 1; i < roots.size(); ++i)
        CHECK(root_height(roots[i - 1]) <= root_height(roots[i]));

    CHECK(root_lowering(kAlpha1) == LoopGen{'f', 0});
    CHECK(root_lowering(kAlpha0) == LoopGen{'e', -1});
    CHECK(root_lowering(kDelta) == LoopGen{'h', -1});
    CHECK(root_lowering(AffineRoot{1, 2}) == LoopGen{'f', -1});
    CHECK(root_lowering(AffineRoot{2, 1}) == LoopGen{'e', -2});
    CHECK_THROWS_AS(root_lowering(AffineRoot{0, 0}), std::invalid_argument);
}

TEST_CASE("pbw bases at low depth") {
    CHECK(pbw_dim(AffineRoot{0, 0}) == 1);
    CHECK(pbw_basis(kAlpha1) == std::vector<VermaMono>{{{'f', 0}}});
    CHECK(pbw_basis(kAlpha0) == std::vector<VermaMono>{{{'e', -1}}});

    auto depth_two = pbw_basis(kDelta);
    REQUIRE(depth_two.size() == 2);
    CHECK(depth_two[0] == VermaMono{{'h', -1}});
    CHECK(depth_two[1] == VermaMono{{'e', -1}, {'f', 0}});

    auto depth_three = pbw_basis(AffineRoot{1, 2});
    REQUIRE(depth_three.size() == 3);
    CHECK(depth_three[0] == VermaMono{{'f', -1}});
    CHECK(depth_three[1] == VermaMono{{'f', 0}, {'h', -1}});
    CHECK(depth_three[2] == VermaMono{{'e', -1}, {'f', 0}, {'f', 0}});

    // Negative depths carry no basis.
    CHECK(pbw_dim(AffineRoot{-1, 1}) == 0);
}

TEST_CASE("pbw dimensions match the character product up to height 8") {
    auto counts = character_counts(8);
    for (int a0 = 0; a0 <= 8; ++a0) {
        for (int a1 = 0; a0 + a1 <= 8; ++a1) {
            auto it = counts.find({a0, a1});
            REQUIRE(it != counts.end());
            CHECK(it->second ==
                  static_cast<long>(pbw_dim(AffineRoot{a0, a1})));
        }
    }
}

TEST_CASE("gram matrices at the first depths") {
    ClassicalScalar wt = cl_weight();
    ClassicalScalar lv = cl_level();

    auto g1 = shapovalov_gram(kAlpha1);
    REQUIRE(g1.size() == 1);
    CHECK(g1[0][0] == wt);

    auto g0 = shapovalov_gram(kAlpha0);
    CHECK(g0[0][0] == lv - wt);

    auto gd = shapovalov_gram(kDelta);
    REQUIRE(gd.size() == 2);
    CHECK(gd[0][0] == cl_int(2) * lv);
    CHECK(gd[0][1] == cl_int(2) * wt);
    CHECK(gd[1][0] == cl_int(2) * wt);
    CHECK(gd[1][1] == (lv - wt + cl_int(2)) * wt);

    ClassicalRing ring;
    CHECK(matrix_det(ring, gd) ==
          cl_int(2) * wt * (lv - wt) * (lv + cl_int(2)));
}

TEST_CASE("determinants match the product formula with constant ratio") {
    ClassicalRing ring;

    auto kk_delta = kac_kazhdan_product(kDelta);
    CHECK(kk_delta.value ==
          cl_weight() * (cl_level() - cl_weight()) * (cl_level() + cl_int(2)));
    // One linear factor per (root, n) pair contributing at this depth.
    REQUIRE(kk_delta.factors.size() == 3);
    for (const auto& f : kk_delta.factors) CHECK(f.exponent == 1);

    ClassicalScalar det_delta = matrix_det(ring, shapovalov_gram(kDelta));
    ClassicalScalar ratio_delta = det_delta / kk_delta.value;
    REQUIRE(ratio_delta.is_rational());
    CHECK(ratio_delta.rational_value() == 2);

    AffineRoot depth_three{1, 2};
    auto kk3 = kac_kazhdan_product(depth_three);
    ClassicalScalar expected3 = cl_weight() * cl_weight() *
                                (cl_weight() - cl_int(1)) *
                                (cl_level() - cl_weight()) *
                                (cl_level() + cl_int(2)) *
                                (cl_weight() + cl_level() + cl_int(2));
    CHECK(kk3.value == expected3);
    ClassicalScalar ratio3 =
        matrix_det(ring, shapovalov_gram(depth_three)) / kk3.value;
    REQUIRE(ratio3.is_rational());
    CHECK(ratio3.rational_value() == 4);
}

TEST_CASE("determinant ratio is a nonzero rational constant for height <= 4") {
    ClassicalRing ring;
    for (int a0 = 0; a0 <= 4; ++a0) {
        for (int a1 = 0; a0 + a1 <= 4; ++a1) {
            if (a0 == 0 && a1 == 0) continue;
            AffineRoot eta{a0, a1};
            auto gram = shapovalov_gram(eta);
            // Symmetric, and entries stay polynomial in (wt, lv).
            for (std::size_t i = 0; i < gram.size(); ++i) {
                for (std::size_t j = 0; j < gram.size(); ++j) {
                    CHECK(gram[i][j] == gram[j][i]);
                    CHECK(gram[i][j].den().is_one());
                }
            }
            ClassicalScalar ratio =
                matrix_det(ring, gram) / kac_kazhdan_product(eta).value;
            REQUIRE(ratio.is_rational());
            CHECK(ratio.rational_value() != 0);
        }
    }
}

TEST_CASE("singular kernels at the predicted points") {
    // Depth alpha1 at weight 0: the single lowering vector is singular.
    auto k1 = singular_kernel(Rat(0), Rat(3), kAlpha1);
    REQUIRE(k1.vectors.size() == 1);
    CHECK(k1.vectors[0] == std::vector<Rat>{Rat(1)});
    CHECK(k1.all_singular);

    // Away from the vanishing locus the kernel is empty.
    CHECK(singular_kernel(Rat(5), Rat(3), kAlpha1).vectors.empty());
    CHECK(singular_kernel(rat_of(5, 3), rat_of(7, 2), kDelta).vectors.empty());

    // Depth 2 alpha1 at weight 1: the square of the lowering generator.
    auto k2 = singular_kernel(Rat(1), Rat(5), AffineRoot{0, 2});
    REQUIRE(k2.vectors.size() == 1);
    CHECK(k2.all_singular);

    // The other real string: depth alpha0 at weight = level.
    auto k0 = singular_kernel(Rat(3), Rat(3), kAlpha0);
    REQUIRE(k0.vectors.size() == 1);
    CHECK(k0.all_singular);

    // At depth delta over weight 0 the radical is the image of the depth
    // alpha1 singular vector; it is not itself singular and the
    // annihilation check must say so.
    auto kd = singular_kernel(Rat(0), Rat(3), kDelta);
    REQUIRE(kd.vectors.size() == 1);
    CHECK(kd.vectors[0] == std::vector<Rat>({Rat(0), Rat(1)}));
    CHECK(!kd.all_singular);
}

TEST_CASE("finite quantum gram entries") {
    CHECK(quantum_gram_finite(3, 1) == qint(3));
    CHECK(quantum_gram_finite(1, 2).is_zero());
    for (long n = 1; n <= 4; ++n)
        CHECK(quantum_gram_finite(5, n) == quantum_gram_finite_closed(5, n));
}

TEST_CASE("symbolic quantum gram entries and their classical limit") {
    for (long n = 1; n <= 3; ++n)
        CHECK(quantum_gram_symbolic(n) == quantum_gram_symbolic_closed(n));

    ClassicalScalar wt = cl_weight();
    CHECK(classical_limit(quantum_gram_symbolic(2)) ==
          cl_int(2) * wt * (wt - cl_int(1)));

    // The classical loop-algebra straightening at the same depth agrees
    // with the q -> 1 limit of the quantum oracle.
    auto g = shapovalov_gram(AffineRoot{0, 2});
    CHECK(g[0][0] == classical_limit(quantum_gram_symbolic(2)));

    CHECK(classical_limit(wq_weight_int(0)) == wt);
    CHECK(classical_limit(wq_qint(3)) == cl_int(3));
}

TEST_CASE("exact linear algebra helpers") {
    RatRing ring;
    Matrix<Rat> singular{{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
    CHECK(matrix_rank(ring, singular) == 1);
    CHECK(matrix_det(ring, singular) == 0);
    auto null_space = kernel_basis(ring, singular);
    REQUIRE(null_space.size() == 1);
    CHECK(null_space[0] == std::vector<Rat>({Rat(-2), Rat(1)}));

    Matrix<Rat> regular{{Rat(1), Rat(2)}, {Rat(3), Rat(4)}};
    CHECK(matrix_det(ring, regular) == -2);
    CHECK(kernel_basis(ring, regular).empty());

    // A wide matrix: one relation among three columns.
    Matrix<Rat> wide{{Rat(1), Rat(1), Rat(0)}, {Rat(0), Rat(1), Rat(1)}};
    auto wide_kernel = kernel_basis(ring, wide);
    REQUIRE(wide_kernel.size() == 1);
    CHECK(wide_kernel[0] == std::vector<Rat>({Rat(1), Rat(-1), Rat(1)}));

    ClassicalRing cring;
    Matrix<ClassicalScalar> diag{{cl_weight(), cl_int(0)},
                                 {cl_int(0), cl_level()}};
    CHECK(matrix_det(cring, diag) == cl_weight() * cl_level());
    CHECK(matrix_rank(cring, diag) == 2);
}

}  // namespace
}  // namespace qvir
