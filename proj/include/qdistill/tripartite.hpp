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

#include <optional>
#include <vector>

#include "qdistill/criteria.hpp"

namespace qdistill {

// Pure state on A (x) B (x) C, amplitude of |i,j,k> at i*db*dc + j*dc + k.
struct TripartitePure {
  Index da = 0;
  Index db = 0;
  Index dc = 0;
  CVector amplitudes;
};

TripartitePure make_tripartite(const CVector& amplitudes, Index da, Index db, Index dc);

enum class Pair { AB, AC, BC };

const char* to_string(Pair p);

BipartiteState reduced_pair(const TripartitePure& psi, Pair p);

// Apply local operators on each party.
TripartitePure apply_local3(const TripartitePure& psi, const CMatrix& ua, const CMatrix& ub, const CMatrix& uc);

TripartitePure generalized_ghz(const CVector& coefficients);

// (I (x) ub (x) uc) psi = sum_j |a_j>|j>|j>, labels ordered by decreasing
// norm of a_j, first non-negligible entry of each a_j real positive.
struct CanonicalForm {
  std::vector<CVector> a_vectors;
  CMatrix ub;  // rows orthonormal
  CMatrix uc;  // rows orthonormal
  double residual = 0.0;
};

// Requires rho_AB and rho_AC to be PPT; throws PreconditionError otherwise.
CanonicalForm canonical_form(const TripartitePure& psi, const Options& opts = {});

struct PairClassification {
  bool ab_ppt = false;
  bool ac_ppt = false;
  Certificate ab;
  Certificate ac;
  std::optional<CanonicalForm> canonical;
};

// With certify_npt unset, NPT pairs are only flagged, not certified.
PairClassification classify_pairs(const TripartitePure& psi, const Options& opts = {}, bool certify_npt = true);

struct GhzResult {
  bool ghz = false;
  bool route_undistillable = false;  // all three reduced states undistillable
  bool route_zero_discord = false;   // all three reduced states classical on a side
  RVector coefficients;              // Schmidt-type coefficients when ghz
};

// Throws Error when the two routes disagree.
GhzResult ghz_test(const TripartitePure& psi, const Options& opts = {});

}  // namespace qdistill
