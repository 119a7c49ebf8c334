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

BipartiteState bell_state() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = std::sqrt(0.5);
  return pure_state(v, 2, 2);
}

}  // namespace

TEST_CASE("PPT test on Bell and separable states") {
  const PptResult bell = is_ppt(bell_state());
  CHECK_FALSE(bell.ppt);
  CHECK(bell.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
  Rng rng(1);
  CHECK(is_ppt(separable_state(3, 3, 5, rng)).ppt);
}

TEST_CASE("reduction criterion") {
  // rho_A (x) I - rho for (I - phi F)/(n^2 - n phi) has least eigenvalue (n - 1 - 2 phi)/(n^2 - n phi),
  // so the criterion misses every NPT Werner state with phi <= 1.
  for (double phi : {0.2, 0.5, 1.0}) CHECK_FALSE(reduction_criterion(werner(3, phi)).violated);
  CHECK(reduction_criterion(bell_state()).violated);
}

TEST_CASE("trivially distillable pattern") {
  const auto w = trivially_distillable(bell_state());
  REQUIRE(w.has_value());
  CHECK(w->kind == WitnessKind::TrivialSubmatrix);
  CHECK(validate_witness(bell_state(), *w).ok);
  Rng rng(2);
  CHECK_FALSE(trivially_distillable(separable_state(2, 2, 2, rng)).has_value());
}

TEST_CASE("Schmidt-rank-2 witness exists for Werner states exactly when phi > 1/2") {
  // <psi|rho^G|psi> is proportional to 1 - phi n |<psi|Phi>|^2 and the overlap
  // with the maximally entangled Phi is at most 2/n at Schmidt rank two.
  Options opts;
  const auto yes = schmidt2_witness(werner(3, 0.7), opts);
  REQUIRE(yes.has_value());
  CHECK(validate_witness(werner(3, 0.7), *yes).ok);
  CHECK_FALSE(is_ppt(werner(3, 0.4)).ppt);
  CHECK_FALSE(schmidt2_witness(werner(3, 0.4), opts).has_value());
}

TEST_CASE("validate_witness rejects tampered witnesses") {
  auto w = trivially_distillable(bell_state());
  REQUIRE(w.has_value());
  Witness bad = *w;
  bad.psi = CVector::Zero(4);
  bad.psi(0) = 1.0;
  CHECK_FALSE(validate_witness(bell_state(), bad).ok);
  bad.psi = CVector::Ones(9);
  CHECK_FALSE(validate_witness(bell_state(), bad).ok);
}

TEST_CASE("full-rank property shortcuts and sampling") {
  Options opts;
  // PPT states of rank N hold.
  Rng rng(3);
  CHECK(full_rank_property(ppt_rank_n(3, 3, rng), Side::B, opts).status != FullRankStatus::Violated);
  // Rank below the local rank violates without sampling.
  const FullRankResult pure = full_rank_property(bell_state(), Side::B, opts);
  CHECK(pure.status == FullRankStatus::ShortcutViolated);
  const FullRankResult as = full_rank_property(antisymmetric(3), Side::B, opts);
  CHECK(as.status == FullRankStatus::Violated);
  CHECK(as.log10_failure_bound < -100.0);
  CHECK(as.rank == 3);
  // The printed 2x3 state: <x|rho|x> never reaches rank three.
  CHECK(full_rank_property(rfrp_violator_2x3(), Side::B, opts).status == FullRankStatus::Violated);
  // ... while every 2xN state has the mirrored property.
  const FullRankStatus left = full_rank_property(rfrp_violator_2x3(), Side::A, opts).status;
  CHECK((left == FullRankStatus::Holds || left == FullRankStatus::ShortcutHolds));
}

TEST_CASE("rank equal to local rank: PPT separable, NPT distillable") {
  Rng rng(4);
  Options opts;
  const BipartiteState ppt = ppt_rank_n(2, 3, rng);
  const Certificate sep = classify_rank_le_max(ppt, opts);
  CHECK(sep.verdict == Verdict::Separable);
  CHECK(sep.products.size() == 3);
  CHECK(reconstruction_residual(ppt, sep.products) < 1e-8);

  for (int t = 0; t < 20; ++t) {
    const BipartiteState s = random_rank_state(3, 4, 4, rng);
    const Certificate c = classify_rank_le_max(s, opts);
    REQUIRE(c.verdict == Verdict::Distillable);
    CHECK(validate_witness(s, *c.witness).ok);
  }
  CHECK_THROWS_AS(classify_rank_le_max(random_rank_state(2, 2, 3, rng), opts), PreconditionError);
}

TEST_CASE("antisymmetric state is caught by the full-rank route, not the reduction criterion") {
  const BipartiteState as = antisymmetric(3);
  CHECK_FALSE(reduction_criterion(as).violated);
  const Certificate c = classify_rank_le_max(as, Options{});
  CHECK(c.verdict == Verdict::Distillable);
  CHECK(validate_witness(as, *c.witness).ok);
}

TEST_CASE("pure plus low-rank sigma") {
  // |psi> entangled on the full A support, sigma supported on one A vector.
  CVector psi = CVector::Zero(9);
  psi(0) = psi(4) = psi(8) = 1.0;
  CMatrix sig = CMatrix::Zero(9, 9);
  sig(1, 1) = 1.0;
  const Certificate c = certify_pure_plus_sigma(psi, {3, 3, sig});
  REQUIRE(c.verdict == Verdict::Distillable);
  const BipartiteState s{3, 3, psi * psi.adjoint() + sig};
  CHECK(validate_witness(s, *c.witness).ok);
}
