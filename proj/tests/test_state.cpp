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

TEST_CASE("numerical rank recovers a planted rank") {
  Rng rng(1);
  const CMatrix m = random_gaussian(6, 3, rng) * random_gaussian(3, 5, rng);
  const RankInfo r = numerical_rank(m);
  CHECK(r.rank == 3);
  CHECK(r.kernel.cols() == 2);
  CHECK((m * r.kernel).norm() < 1e-12 * m.norm());
  CHECK(r.range.cols() == 3);
}

TEST_CASE("hermitian_eigen rejects non-Hermitian input") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eigen(m), ValidationError);
}

TEST_CASE("complete_unitary keeps the given columns first") {
  Rng rng(2);
  const CVector v = random_gaussian_vector(4, rng).normalized();
  const CMatrix u = complete_unitary(v);
  CHECK((u.adjoint() * u - CMatrix::Identity(4, 4)).norm() < 1e-12);
  CHECK(std::abs(std::abs(u.col(0).dot(v)) - 1.0) < 1e-12);
}

TEST_CASE("random_invertible respects its condition bound") {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    Eigen::JacobiSVD<CMatrix> svd(random_invertible(4, rng));
    const RVector s = svd.singularValues();
    CHECK(s(0) / s(3) <= 20.0 + 1e-9);
  }
}

TEST_CASE("psd square roots and pseudo-inverse") {
  Rng rng(4);
  const CMatrix g = random_gaussian(4, 4, rng);
  const CMatrix h = g * g.adjoint() + CMatrix::Identity(4, 4);
  CHECK((psd_sqrt(h) * psd_sqrt(h) - h).norm() < 1e-10 * h.norm());
  CHECK((psd_inv_sqrt(h) * h * psd_inv_sqrt(h) - CMatrix::Identity(4, 4)).norm() < 1e-10);
  const CMatrix low = random_gaussian(4, 2, rng) * random_gaussian(2, 4, rng);
  const CMatrix p = low * low.adjoint();
  CHECK((p * psd_pinv(p) * p - p).norm() < 1e-9 * p.norm());
}

TEST_CASE("partial transpose matches the index definition and is an involution") {
  Rng rng(5);
  const BipartiteState s = random_rank_state(2, 3, 4, rng);
  const CMatrix g = partial_transpose(s);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j)
      for (Index k = 0; k < 2; ++k)
        for (Index l = 0; l < 3; ++l) CHECK(g(i * 3 + j, k * 3 + l) == s.rho(k * 3 + j, i * 3 + l));
  CHECK((partial_transpose(g, 2, 3) - s.rho).norm() == 0.0);
}

TEST_CASE("make_state validates its input") {
  CHECK_THROWS_AS(make_state(CMatrix::Identity(4, 4), 2, 3), ValidationError);
  CHECK_THROWS_AS(make_state(CMatrix::Zero(4, 4), 2, 2), ValidationError);
  CMatrix neg = CMatrix::Identity(4, 4);
  neg(0, 0) = -1.0;
  CHECK_THROWS_AS(make_state(neg, 2, 2), ValidationError);
  CMatrix asym = CMatrix::Identity(4, 4);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(make_state(asym, 2, 2), ValidationError);
  CHECK_NOTHROW(make_state(CMatrix::Identity(4, 4), 2, 2));
}

TEST_CASE("reduced states preserve the trace") {
  Rng rng(6);
  const BipartiteState s = random_rank_state(3, 2, 3, rng);
  CHECK(std::abs(reduce(s, Side::A).trace() - s.rho.trace()) < 1e-12);
  CHECK(std::abs(reduce(s, Side::B).trace() - s.rho.trace()) < 1e-12);
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = std::sqrt(0.5);
  CHECK((reduce(pure_state(bell, 2, 2), Side::A) - 0.5 * CMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK(std::abs(von_neumann_entropy(reduce(pure_state(bell, 2, 2), Side::B)) - 1.0) < 1e-12);
}

TEST_CASE("block form reproduces the state and its sectors") {
  Rng rng(7);
  const BipartiteState s = random_rank_state(3, 3, 4, rng);
  const BlockForm bf = block_form(s);
  CHECK(bf.rank == 4);
  CHECK((bf.to_matrix() - s.rho).norm() < 1e-10 * s.rho.norm());
  const CVector x = random_gaussian_vector(3, rng);
  const CMatrix xm = bf.combination(x);
  CHECK((sector(s, x, Side::A) - xm.adjoint() * xm).norm() < 1e-10 * s.rho.norm() * x.squaredNorm());
}

TEST_CASE("local maps compose and lifted vectors preserve expectations") {
  Rng rng(8);
  const BipartiteState s = random_rank_state(3, 2, 3, rng);
  for (int t = 0; t < 20; ++t) {
    const bool sw1 = t % 2 == 1, sw2 = t % 3 == 0;
    const LocalMap m1{random_gaussian(sw1 ? 2 : 3, sw1 ? 2 : 3, rng), random_gaussian(sw1 ? 3 : 2, sw1 ? 3 : 2, rng), sw1};
    const BipartiteState s1 = apply_local(s, m1);
    const LocalMap m2{random_gaussian(2, sw2 ? s1.dim_b : s1.dim_a, rng),
                      random_gaussian(sw2 ? s1.dim_a : s1.dim_b, sw2 ? s1.dim_a : s1.dim_b, rng), sw2};
    const BipartiteState direct = apply_local(s1, m2);
    const BipartiteState composed = apply_local(s, compose(m1, m2));
    CHECK((direct.rho - composed.rho).norm() < 1e-10 * direct.rho.norm());

    const LocalMap m = compose(m1, m2);
    const CVector phi = random_gaussian_vector(composed.dim(), rng);
    const CVector psi = lift_vector(m, phi);
    const cplx lhs = psi.dot(partial_transpose(s) * psi);
    const cplx rhs = phi.dot(partial_transpose(composed) * phi);
    CHECK(std::abs(lhs - rhs) < 1e-9 * (std::abs(rhs) + 1.0));
  }
}

TEST_CASE("compression and Schmidt decomposition reconstruct their inputs") {
  Rng rng(9);
  CMatrix a = random_gaussian(4, 2, rng);
  CMatrix rows = random_gaussian(2, 3, rng);
  const BipartiteState s = from_vectors({kron(CVector(a.col(0)), CVector(rows.row(0).transpose())),
                                         kron(CVector(a.col(1)), CVector(rows.row(1).transpose()))},
                                        4, 3);
  const Compressed c = compress(s);
  CHECK(c.state.dim_a == 2);
  CHECK(c.state.dim_b == 2);
  const CMatrix back = kron(c.ua, c.ub) * c.state.rho * kron(c.ua, c.ub).adjoint();
  CHECK((back - s.rho).norm() < 1e-10 * s.rho.norm());

  const CVector psi = random_gaussian_vector(6, rng);
  const Schmidt sd = schmidt(psi, 2, 3);
  CHECK(sd.rank() == 2);
  CVector rebuilt = CVector::Zero(6);
  for (Index k = 0; k < sd.rank(); ++k)
    rebuilt += sd.coefficients(k) * kron(CVector(sd.a_vectors.col(k)), CVector(sd.b_vectors.col(k)));
  CHECK((rebuilt - psi).norm() < 1e-12 * psi.norm());
}

TEST_CASE("swap_sides exchanges the local ranks") {
  Rng rng(10);
  const BipartiteState s = random_rank_state(2, 4, 1, rng);
  const BipartiteState t = swap_sides(s);
  CHECK(t.dim_a == 4);
  CHECK(t.dim_b == 2);
  CHECK((reduce(t, Side::A) - reduce(s, Side::B)).norm() < 1e-12);
}
