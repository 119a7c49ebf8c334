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

#include <array>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "qdistill/state.hpp"

namespace qdistill {

// k-dimensional subspace of C^dim_a (x) C^dim_b; rows of `basis` span it.
struct Subspace {
  Index dim_a = 0;
  Index dim_b = 0;
  CMatrix basis;  // k x (dim_a * dim_b)

  Index k() const { return basis.rows(); }
};

Subspace make_subspace(const CMatrix& rows, Index dim_a, Index dim_b, const ToleranceConfig& tol = {});
Subspace range_subspace(const BipartiteState& s, const ToleranceConfig& tol = {});

// All k x k minors of the basis matrix, tuples in lexicographic order.
struct Pluecker {
  Index n = 0;
  Index k = 0;
  std::vector<std::vector<int>> tuples;  // 0-based column indices, increasing
  std::vector<cplx> values;

  // Coordinate for 1-based increasing column indices.
  cplx at(std::initializer_list<int> one_based) const;
  double norm() const;
};

Pluecker pluecker_coords(const Subspace& v);

struct HypersurfaceValue {
  cplx value;       // polynomial evaluated on the raw coordinates
  double scale;     // |p|^degree
  double relative;  // |value| / scale
};

// Cubic for 2-dimensional subspaces of 2 (x) 3.
cplx cubic_2x3(const Pluecker& p);
HypersurfaceValue hypersurface_2x3(const Subspace& v);

// Quartic for 3-dimensional subspaces of 2 (x) 4, read from the embedded
// monomial table.
struct QuarticMonomial {
  int coefficient;
  std::array<std::array<int, 3>, 4> indices;  // 1-based
};
struct QuarticTable {
  int degree = 0;
  int dim_a = 0;
  int dim_b = 0;
  int k = 0;
  std::vector<QuarticMonomial> monomials;
  std::uint64_t checksum = 0;
};
const QuarticTable& quartic_2x4_table();
std::uint64_t quartic_table_checksum(const QuarticTable& t);
cplx quartic_2x4(const Pluecker& p);
HypersurfaceValue hypersurface_2x4(const Subspace& v);

struct SearchOptions {
  ToleranceConfig tol;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  int restarts = 40;  // per dehomogenized coordinate
  int max_iterations = 200;
};

struct RankOneResult {
  bool found = false;
  CVector coefficients;  // z with sum z_i M_i ~ a b^T
  CVector a;
  CVector b;
  double residual = 0.0;  // relative distance to the rank-one matrix
  int restarts_used = 0;
};

// Nonzero element of span{mats} of rank one, by damped least squares on the
// 2x2 minors with one coefficient pinned to one in turn.
RankOneResult find_rank_one_in_span(const std::vector<CMatrix>& mats, const SearchOptions& opts = {});

struct ProductVector {
  bool found = false;
  CVector a;
  CVector b;
  CVector coefficients;
  double residual = 0.0;
  int restarts_used = 0;
};

ProductVector find_product_vector(const Subspace& v, const SearchOptions& opts = {});

// Every distinct (projective) rank-one element found over the whole budget.
std::vector<ProductVector> enumerate_product_vectors(const Subspace& v, const SearchOptions& opts = {});

}  // namespace qdistill
