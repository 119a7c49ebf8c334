// Copyright 2026 The qdistill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"
#include "qdistill/decomposition.hpp"
#include "qdistill/rank4.hpp"
#include "qdistill/structure.hpp"
#include "support.hpp"

using namespace qdistill;
using namespace qdistill::testing;

namespace {

// Components on A (x) C^2 placed in consecutive B blocks.
BipartiteState direct_sum(Index da, const std::vector<BipartiteState>& parts) {
  const Index db = 2 * static_cast<Index>(parts.size());
  CMatrix rho = CMatrix::Zero(da * db, da * db);
  for (size_t k = 0; k < parts.size(); ++k) {
    CMatrix e = CMatrix::Zero(da * db, da * 2);
    for (Index i = 0; i < da; ++i)
      for (Index j = 0; j < 2; ++j) e(i * db + 2 * static_cast<Index>(k) + j, i * 2 + j) = 1.0;
    rho += e * parts[k].rho * e.adjoint();
  }
  return {da, db, rho};
}

}  // namespace

TEST_CASE("rank-N decomposition gives exactly N product terms") {
  Rng rng(1);
  for (Index n = 2; n <= 4; ++n)
    for (Index m = 1; m <= n; ++m) {
      const BipartiteState s = ppt_rank_n(m, n, rng);
      const auto terms = separable_decomposition_rank_n(s);
      CHECK(static_cast<Index>(terms.size()) == n);
      CHECK(reconstruction_residual(s, terms) < 1e-8);
    }
  CHECK_THROWS_AS(separable_decomposition_rank_n(random_rank_state(3, 3, 5, rng)), PreconditionError);
}

TEST_CASE("general separable decomposition by product subtraction") {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const BipartiteState s = separable_state(3, 3, 5, rng);
    const auto terms = separable_decomposition(s);
    CHECK(reconstruction_residual(s, terms) < 1e-8);
  }
}

TEST_CASE("constrained product lies in both ranges") {
  Rng rng(3);
  const BipartiteState s = separable_state(3, 3, 5, rng);
  const ConstrainedProduct cp = find_constrained_product(s);
  REQUIRE(cp.found);
  const Support r = psd_support(s.rho), rg = psd_support(partial_transpose(s));
  const CVector v = kron(cp.a, cp.b).normalized();
  const CVector vg = kron(CVector(cp.a.conjugate()), cp.b).normalized();
  CHECK((v - r.basis * (r.basis.adjoint() * v)).norm() < 1e-8);
  CHECK((vg - rg.basis * (rg.basis.adjoint() * vg)).norm() < 1e-8);
}

TEST_CASE("B-normalization gives an identity B marginal") {
  Rng rng(4);
  const BipartiteState s = random_rank_state(2, 3, 4, rng);
  const BNormalization bn = b_normalize(s);
  CHECK((reduce(bn.state, Side::B) - CMatrix::Identity(3, 3)).norm() < 1e-9);
  const CMatrix back = kron(CMatrix::Identity(2, 2), bn.w) * bn.state.rho * kron(CMatrix::Identity(2, 2), bn.w).adjoint();
  CHECK((back - s.rho).norm() < 1e-9 * s.rho.norm());
}

TEST_CASE("commutant of a block-diagonal family") {
  Rng rng(5);
  std::vector<CMatrix> family;
  for (int t = 0; t < 3; ++t) {
    CMatrix m = CMatrix::Zero(5, 5);
    m.topLeftCorner(2, 2) = random_gaussian(2, 2, rng);
    m.bottomRightCorner(3, 3) = random_gaussian(3, 3, rng);
    family.push_back(m);
    family.push_back(m.adjoint());
  }
  const Commutant c = commutant_decompose(family);
  CHECK(c.dimension == 2);
  CHECK(c.projectors.size() == 2);
}

TEST_CASE("B-direct sums split into their components") {
  Rng rng(6);
  const BipartiteState a = random_rank_state(2, 2, 1, rng), b = random_rank_state(2, 2, 2, rng);
  const BipartiteState s = ilo(direct_sum(2, {a, b}), rng);
  const BDirectDecomposition d = decompose_b_direct(s);
  REQUIRE(d.size() == 2);
  CMatrix total = CMatrix::Zero(s.dim(), s.dim());
  for (size_t k = 0; k < d.size(); ++k) total += d.pulled_back(k).rho;
  CHECK((total - s.rho).norm() < 1e-8 * s.rho.norm());
  // An irreducible state stays whole.
  CHECK(decompose_b_direct(random_rank_state(3, 3, 4, rng)).size() == 1);
  // The printed 4x4 example.
  CHECK(decompose_b_direct(reducible_4x4_example()).size() == 2);
}

TEST_CASE("aggregate verdicts follow the components") {
  Rng rng(7);
  Options opts;
  CVector prod = kron(random_gaussian_vector(2, rng), random_gaussian_vector(2, rng));
  const BipartiteState sep = from_vectors({prod, kron(random_gaussian_vector(2, rng), random_gaussian_vector(2, rng)),
                                           kron(random_gaussian_vector(2, rng), random_gaussian_vector(2, rng))},
                                          2, 2);
  const BipartiteState ent = random_rank_state(2, 2, 1, rng);
  for (const auto& [parts, want] : {std::pair{std::vector<BipartiteState>{sep, sep}, Verdict::Separable},
                                    std::pair{std::vector<BipartiteState>{sep, ent}, Verdict::Distillable}}) {
    const BipartiteState s = ilo(direct_sum(2, parts), rng);
    const BDirectDecomposition d = decompose_b_direct(s, opts);
    std::vector<Certificate> certs;
    for (const BipartiteState& c : d.components) certs.push_back(classify_state(c, opts));
    const Certificate agg = aggregate(s, d, certs);
    CHECK(agg.verdict == want);
    if (want == Verdict::Separable) CHECK(reconstruction_residual(s, agg.products) < 1e-8);
    if (want == Verdict::Distillable) CHECK(validate_witness(s, *agg.witness).ok);
  }
}

TEST_CASE("label-state entanglement agrees with the decomposed components") {
  Rng rng(8);
  // A product and an entangled component are inequivalent after B-normalization, so the
  // B-direct decomposition is unique and follows the labels.
  LabelSpec spec{2, 3, {0.4, 0.6}, {}, true};
  spec.components.push_back(kron(random_gaussian_vector(2, rng), random_gaussian_vector(3, rng)));
  spec.components.push_back(random_gaussian_vector(6, rng));
  const BipartiteState s = label_state(spec);
  const BDirectDecomposition d = decompose_b_direct(s);
  REQUIRE(d.size() == 2);
  double total = 0.0;
  const double tr = s.rho.trace().real();
  for (size_t k = 0; k < d.size(); ++k) {
    const BipartiteState part = d.pulled_back(k);
    total += part.rho.trace().real() / tr * von_neumann_entropy(reduce(part, Side::A));
  }
  CHECK(std::abs(total - label_state_entanglement(spec)) < 1e-9);
}

TEST_CASE("equivalent labelled components leave the decomposition free") {
  // Three Schmidt-rank-two components normalize to the same maximally entangled block, so the
  // commutant is M_3 (x) I and any split of the label space is valid. Only purity and the sum
  // are pinned.
  Rng rng(8);
  LabelSpec spec{2, 3, {0.2, 0.3, 0.5}, {}, true};
  for (int i = 0; i < 3; ++i) spec.components.push_back(random_gaussian_vector(6, rng));
  const BipartiteState s = label_state(spec);
  const BDirectDecomposition d = decompose_b_direct(s);
  REQUIRE(d.size() == 3);
  CMatrix sum = CMatrix::Zero(s.rho.rows(), s.rho.cols());
  for (size_t k = 0; k < d.size(); ++k) {
    const BipartiteState part = d.pulled_back(k);
    CHECK(numerical_rank(part.rho, ToleranceConfig{}).rank == 1);
    sum += part.rho;
  }
  CHECK((sum - s.rho).norm() < 1e-9);
}

TEST_CASE("classical sides") {
  const TripartitePure ghz = generalized_ghz(CVector::Ones(2));
  const BipartiteState ab = reduced_pair(ghz, Pair::AB);
  CHECK(classical_side(ab, Side::A).classical);
  CHECK(classical_side(ab, Side::B).classical);
  Rng rng(9);
  const BipartiteState generic = random_rank_state(2, 2, 2, rng);
  CHECK_FALSE(classical_side(generic, Side::A).classical);
}

TEST_CASE("common kernel certificate for an irreducible NPT state") {
  // H' (x) |b> in the kernel with H' = span{|1>, |2>} and b = |1>.
  Rng rng(10);
  std::vector<CVector> vs;
  for (int i = 0; i < 4; ++i) {
    CVector v = random_gaussian_vector(9, rng);
    v(0) = v(3) = 0.0;
    vs.push_back(v);
  }
  const BipartiteState s = ilo(from_vectors(vs, 3, 3), rng);
  REQUIRE_FALSE(is_ppt(s).ppt);
  const auto c = common_kernel_distill(s, Options{});
  REQUIRE(c.has_value());
  CHECK(c->verdict == Verdict::Distillable);
  CHECK(validate_witness(s, *c->witness).ok);
}

TEST_CASE("rank-four decision tree") {
  Options opts;
  const Certificate tiles = decide_rank4(upb_tiles_3x3(), opts);
  CHECK(tiles.verdict == Verdict::PPTEntangled);
  CHECK_FALSE(tiles.trail.empty());
  Rng rng(11);
  CHECK_THROWS_AS(decide_rank4(random_rank_state(3, 3, 5, rng), opts), PreconditionError);
  // Small dimensions: PPT means separable.
  const BipartiteState s23 = separable_state(2, 3, 4, rng);
  const Certificate c = decide_rank4(s23, opts);
  CHECK(c.verdict == Verdict::Separable);
  CHECK(reconstruction_residual(s23, c.products) < 1e-8);
}

TEST_CASE("certificates survive the party swap") {
  Rng rng(12);
  Options opts;
  for (int t = 0; t < 10; ++t) {
    const BipartiteState s = random_rank_state(2, 4, 3, rng);
    const Certificate c = unswap_certificate(classify_state(swap_sides(s), opts));
    REQUIRE(c.verdict == Verdict::Distillable);
    CHECK(validate_witness(s, *c.witness).ok);
  }
  const BipartiteState sep = separable_state(2, 3, 3, rng);
  const Certificate cs = unswap_certificate(classify_state(swap_sides(sep), opts));
  REQUIRE(cs.verdict == Verdict::Separable);
  CHECK(reconstruction_residual(sep, cs.products) < 1e-8);
}
