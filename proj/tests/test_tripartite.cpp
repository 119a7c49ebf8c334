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
#include "support.hpp"

using namespace qdistill;
using namespace qdistill::testing;

namespace {

TripartitePure w_state() {
  CVector v = CVector::Zero(8);
  v(1) = v(2) = v(4) = 1.0;
  return make_tripartite(v, 2, 2, 2);
}

RVector nonzero_spectrum(const CMatrix& h, Index count) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  return es.eigenvalues().tail(count).reverse();
}

}  // namespace

TEST_CASE("pair reductions share spectra with the complementary party") {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const TripartitePure psi = random_tripartite(2, 3, 2, rng);
    const BipartiteState ab = reduced_pair(psi, Pair::AB), bc = reduced_pair(psi, Pair::BC);
    const BipartiteState ac = reduced_pair(psi, Pair::AC);
    // rho_C is the B-side reduction of rho_AC; rho_A the A side of rho_AB.
    CHECK((nonzero_spectrum(ab.rho, 2) - nonzero_spectrum(reduce(ac, Side::B), 2)).norm() < 1e-12);
    CHECK((nonzero_spectrum(bc.rho, 2) - nonzero_spectrum(reduce(ab, Side::A), 2)).norm() < 1e-12);
  }
}

TEST_CASE("W state pairs are distillable") {
  const TripartitePure w = w_state();
  CHECK_FALSE(is_ppt(reduced_pair(w, Pair::AB)).ppt);
  const PairClassification pc = classify_pairs(w);
  CHECK(pc.ab.verdict == Verdict::Distillable);
  CHECK(pc.ac.verdict == Verdict::Distillable);
  CHECK_FALSE(pc.canonical.has_value());
  CHECK_FALSE(ghz_test(w).ghz);
}

TEST_CASE("GHZ: both pairs separable with orthogonal canonical vectors") {
  const TripartitePure ghz = generalized_ghz(CVector::Ones(2));
  const BipartiteState ab = reduced_pair(ghz, Pair::AB);
  CHECK(ab.rho.isApprox(CMatrix(CVector((CVector(4) << 1, 0, 0, 1).finished()).asDiagonal())));
  const PairClassification pc = classify_pairs(ghz);
  REQUIRE(pc.canonical.has_value());
  CHECK(pc.ab.verdict == Verdict::Separable);
  CHECK(pc.ac.verdict == Verdict::Separable);
  const auto& a = pc.canonical->a_vectors;
  CHECK(std::abs(a[0].dot(a[1])) < 1e-12);
}

TEST_CASE("canonical form is gauge normalized") {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const PlantedCanonical pc = planted_canonical(3, 3, rng);
    const CanonicalForm cf = canonical_form(pc.psi);
    CHECK(cf.residual < 1e-9);
    for (size_t j = 1; j < cf.a_vectors.size(); ++j) CHECK(cf.a_vectors[j - 1].norm() >= cf.a_vectors[j].norm());
    for (const CVector& a : cf.a_vectors) {
      Index first = 0;
      while (std::abs(a(first)) <= 1e-8 * a.norm()) ++first;
      CHECK(std::abs(a(first).imag()) < 1e-12);
      CHECK(a(first).real() > 0.0);
    }
    CHECK_FALSE(ghz_test(pc.psi).ghz);
  }
}

TEST_CASE("parallel a-vectors are grouped") {
  // a_1 = a_2 forces the per-group re-diagonalization.
  Rng rng(3);
  const CVector a = random_gaussian_vector(2, rng), b = random_gaussian_vector(2, rng);
  CVector amp = CVector::Zero(2 * 9);
  const std::vector<CVector> as{a, 2.0 * a, b};
  for (Index i = 0; i < 3; ++i) {
    CVector jj = CVector::Zero(9);
    jj(i * 3 + i) = 1.0;
    amp += kron(as[static_cast<size_t>(i)], jj);
  }
  const TripartitePure psi = apply_local3(make_tripartite(amp, 2, 3, 3), CMatrix::Identity(2, 2), random_unitary(3, rng),
                                          random_unitary(3, rng));
  const CanonicalForm cf = canonical_form(psi);
  CHECK(cf.residual < 1e-9);
  CHECK(cf.a_vectors.size() == 3);
}

TEST_CASE("ghz_test recovers coefficients and agrees with the classical route") {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    RVector c;
    const TripartitePure psi = random_ghz(3, rng, &c);
    const GhzResult g = ghz_test(psi);
    CHECK(g.ghz);
    CHECK(g.route_undistillable);
    CHECK(g.route_zero_discord);
    std::vector<double> want(c.data(), c.data() + c.size());
    std::sort(want.rbegin(), want.rend());
    for (Index i = 0; i < 3; ++i) CHECK(std::abs(g.coefficients(i) - want[static_cast<size_t>(i)]) < 1e-9);
  }
  const TripartitePure psi = random_tripartite(2, 2, 2, rng);
  const GhzResult g = ghz_test(psi);
  CHECK_FALSE(g.ghz);
  CHECK_FALSE(g.route_zero_discord);
}

TEST_CASE("tripartite validation") {
  CHECK_THROWS_AS(make_tripartite(CVector::Zero(8), 2, 2, 2), ValidationError);
  CHECK_THROWS_AS(make_tripartite(CVector::Ones(7), 2, 2, 2), ValidationError);
}
