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

// Random constructions shared by the unit tests and the acceptance suite.
// Every generator knows the ground truth of what it builds.

#pragma once

#include <vector>

#include "qdistill/families.hpp"
#include "qdistill/linalg.hpp"
#include "qdistill/product_search.hpp"
#include "qdistill/state.hpp"

namespace qdistill::testing {

inline CVector rand_vec(Index n, Rng& rng) { return random_gaussian_vector(n, rng); }

inline BipartiteState from_vectors(const std::vector<CVector>& vs, Index da, Index db) {
  CMatrix rho = CMatrix::Zero(da * db, da * db);
  for (const CVector& v : vs) rho += v * v.adjoint();
  return {da, db, rho};
}

// r generic vectors: rank r, local ranks min(r, dims) generically.
inline BipartiteState random_rank_state(Index da, Index db, Index r, Rng& rng) {
  std::vector<CVector> vs;
  for (Index i = 0; i < r; ++i) vs.push_back(rand_vec(da * db, rng));
  return from_vectors(vs, da, db);
}

inline std::vector<ProductTerm> random_products(Index da, Index db, Index count, Rng& rng) {
  std::vector<ProductTerm> out;
  for (Index i = 0; i < count; ++i) out.push_back({rand_vec(da, rng), rand_vec(db, rng)});
  return out;
}

inline BipartiteState separable_state(Index da, Index db, Index count, Rng& rng) {
  const auto terms = random_products(da, db, count, rng);
  return {da, db, product_sum(terms)};
}

// ILO conjugation (a (x) b) rho (a (x) b)^dag.
inline BipartiteState ilo(const BipartiteState& s, Rng& rng) {
  return apply_local(s, random_invertible(s.dim_a, rng), random_invertible(s.dim_b, rng));
}

// PPT state of rank N with local ranks M x N: blocks C_i = U diag(d_i) U^dag,
// C_M = I, followed by a random ILO.
inline BipartiteState ppt_rank_n(Index m, Index n, Rng& rng) {
  const CMatrix u = random_unitary(n, rng);
  std::vector<CMatrix> blocks;
  for (Index i = 0; i + 1 < m; ++i) blocks.push_back(u * random_gaussian_vector(n, rng).asDiagonal() * u.adjoint());
  blocks.push_back(CMatrix::Identity(n, n));
  CMatrix rho(m * n, m * n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      rho.block(i * n, j * n, n, n) = blocks[static_cast<size_t>(i)].adjoint() * blocks[static_cast<size_t>(j)];
  return ilo({m, n, rho}, rng);
}

inline Subspace subspace_from_rows(const CMatrix& rows, Index da, Index db) { return make_subspace(rows, da, db); }

// k-dim subspace containing a product vector, in a random basis.
inline Subspace product_subspace(Index da, Index db, Index k, Rng& rng) {
  CMatrix rows(k, da * db);
  rows.row(0) = kron(rand_vec(da, rng), rand_vec(db, rng)).transpose();
  for (Index i = 1; i < k; ++i) rows.row(i) = rand_vec(da * db, rng).transpose();
  return make_subspace(random_invertible(k, rng) * rows, da, db);
}

inline Subspace generic_subspace(Index da, Index db, Index k, Rng& rng) {
  return make_subspace(random_gaussian(k, da * db, rng), da, db);
}

inline TripartitePure random_tripartite(Index da, Index db, Index dc, Rng& rng) {
  return make_tripartite(rand_vec(da * db * dc, rng), da, db, dc);
}

// sum_i |a_i>|ii>, then random unitaries on B and C.
struct PlantedCanonical {
  TripartitePure psi;
  std::vector<CVector> a;
};

inline PlantedCanonical planted_canonical(Index da, Index d, Rng& rng) {
  PlantedCanonical out;
  CVector amp = CVector::Zero(da * d * d);
  for (Index i = 0; i < d; ++i) {
    out.a.push_back(rand_vec(da, rng));
    CVector jj = CVector::Zero(d * d);
    jj(i * d + i) = 1.0;
    amp += kron(out.a.back(), jj);
  }
  out.psi = apply_local3(make_tripartite(amp, da, d, d), CMatrix::Identity(da, da), random_unitary(d, rng),
                         random_unitary(d, rng));
  return out;
}

inline TripartitePure random_ghz(Index d, Rng& rng, RVector* coefficients = nullptr) {
  RVector c(d);
  std::uniform_real_distribution<double> ud(0.2, 1.0);
  for (Index i = 0; i < d; ++i) c(i) = ud(rng);
  if (coefficients) *coefficients = c;
  return apply_local3(generalized_ghz(c.cast<cplx>()), random_unitary(d, rng), random_unitary(d, rng),
                      random_unitary(d, rng));
}

}  // namespace qdistill::testing
