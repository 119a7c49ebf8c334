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

#pragma once

#include <utility>
#include <vector>

#include "qdistill/linalg.hpp"

namespace qdistill {

// Positive semidefinite operator on C^dim_a (x) C^dim_b, basis |i>|j> at
// index i * dim_b + j. The trace is not required to be one.
struct BipartiteState {
  Index dim_a = 0;
  Index dim_b = 0;
  CMatrix rho;

  Index dim() const { return dim_a * dim_b; }
  // sigma_ij = <i|rho|j> as an operator on B.
  CMatrix block(Index i, Index j) const { return rho.block(i * dim_b, j * dim_b, dim_b, dim_b); }
};

// Validates dims, Hermiticity and positivity; stores the symmetrized matrix.
BipartiteState make_state(const CMatrix& rho, Index dim_a, Index dim_b, const ToleranceConfig& tol = {});
BipartiteState pure_state(const CVector& psi, Index dim_a, Index dim_b);

double state_norm(const BipartiteState& s);  // operator norm

CMatrix partial_transpose(const CMatrix& rho, Index dim_a, Index dim_b);
CMatrix partial_transpose(const BipartiteState& s);

// Reduced operator on `keep`.
CMatrix reduce(const BipartiteState& s, Side keep);

// <x|rho|x> with x on `side`; the result acts on the opposite side.
CMatrix sector(const BipartiteState& s, const CVector& x, Side side);

// rho = sum_ij |i><j| (x) C_i^dag C_j with every C_i of size rank x dim_b.
struct BlockForm {
  Index dim_a = 0;
  Index dim_b = 0;
  Index rank = 0;
  std::vector<CMatrix> blocks;

  CMatrix stacked() const;  // (C_1, ..., C_M), rank x (dim_a * dim_b)
  CMatrix to_matrix() const;
  // sum_k xi_k C_k
  CMatrix combination(const CVector& xi) const;
};

BlockForm block_form(const BipartiteState& s, const ToleranceConfig& tol = {});
BlockForm block_form_from_vectors(const std::vector<CVector>& psis, Index dim_a, Index dim_b);

// out = (a (x) b) S(rho) (a (x) b)^dag, S the party swap when `swap` is set.
struct LocalMap {
  CMatrix a;
  CMatrix b;
  bool swap = false;

  static LocalMap identity(Index dim_a, Index dim_b);
  Index in_dim_a() const { return swap ? b.cols() : a.cols(); }
  Index in_dim_b() const { return swap ? a.cols() : b.cols(); }
};

// Map applying `first` then `second`.
LocalMap compose(const LocalMap& first, const LocalMap& second);

BipartiteState swap_sides(const BipartiteState& s);
CVector swap_vector(const CVector& psi, Index dim_a, Index dim_b);

// Throws PreconditionError if the image is zero.
BipartiteState apply_local(const BipartiteState& s, const LocalMap& m);
BipartiteState apply_local(const BipartiteState& s, const CMatrix& a, const CMatrix& b);

// psi on the input space with <psi|rho^G|psi> = <phi|m(rho)^G|phi>.
CVector lift_vector(const LocalMap& m, const CVector& phi);

struct LocalRanks {
  Index a = 0;
  Index b = 0;
};
LocalRanks local_ranks(const BipartiteState& s, const ToleranceConfig& tol = {});
Index state_rank(const BipartiteState& s, const ToleranceConfig& tol = {});

// Restriction to supp(rho_A) (x) supp(rho_B).
// rho = (ua (x) ub) compressed (ua (x) ub)^dag with isometries ua, ub.
struct Compressed {
  BipartiteState state;
  CMatrix ua;
  CMatrix ub;
  LocalMap to_compressed() const { return {ua.adjoint(), ub.adjoint(), false}; }
};
Compressed compress(const BipartiteState& s, const ToleranceConfig& tol = {});

struct Schmidt {
  RVector coefficients;  // descending, positive
  CMatrix a_vectors;     // columns
  CMatrix b_vectors;     // columns
  Index rank() const { return coefficients.size(); }
};
// psi = sum_k c_k |a_k>|b_k>.
Schmidt schmidt(const CVector& psi, Index dim_a, Index dim_b, const ToleranceConfig& tol = {});
// Reshape to the dim_a x dim_b coefficient matrix.
CMatrix coefficient_matrix(const CVector& psi, Index dim_a, Index dim_b);

// Groups as (A1 A2) : (B1 B2).
BipartiteState tensor(const BipartiteState& s1, const BipartiteState& s2);

// Entropy in bits of rho / tr(rho).
double von_neumann_entropy(const CMatrix& rho);

}  // namespace qdistill
