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
#include <string>
#include <vector>

#include "qdistill/state.hpp"

namespace qdistill {

enum class WitnessKind { TrivialSubmatrix, TwoByNProjection, ReductionViolation, SchmidtRank2 };

const char* to_string(WitnessKind k);

// Certificate of 1-distillability. Every kind carries `psi`, a vector of
// Schmidt rank two on the input space with <psi|rho^G|psi> < 0, so the
// claim can be checked without re-running the search that produced it.
struct Witness {
  WitnessKind kind = WitnessKind::SchmidtRank2;
  // The kind-specific pattern is exhibited by map(rho).
  LocalMap map;
  // TrivialSubmatrix: principal 2x2 submatrix of map(rho)^G at (row, col)
  // with one vanishing diagonal entry and a nonzero off-diagonal entry.
  Index row = -1;
  Index col = -1;
  // TwoByNProjection: sweep parameter, zero when unused.
  cplx x = 0.0;
  // ReductionViolation: negative eigenvector of rho_side (x) I - rho.
  Side side = Side::A;
  CVector eigenvector;
  double eigenvalue = 0.0;

  CVector psi;
  double value = 0.0;  // <psi|rho^G|psi> / <psi|psi>
};

struct ProductTerm {
  CVector a;
  CVector b;
};

// rho = sum_k |a_k b_k><a_k b_k|.
CMatrix product_sum(const std::vector<ProductTerm>& terms);
double reconstruction_residual(const BipartiteState& s, const std::vector<ProductTerm>& terms);

enum class Verdict { Separable, PPT, PPTEntangled, Distillable, Undecided };

const char* to_string(Verdict v);

struct Certificate {
  Verdict verdict = Verdict::Undecided;
  std::vector<ProductTerm> products;  // Separable
  double min_eig_gamma = 0.0;         // PPT, PPTEntangled
  std::optional<Witness> witness;     // Distillable
  std::string note;                   // Undecided: budget report; otherwise free text
  std::vector<std::string> trail;     // steps taken, in order
};

struct PptResult {
  bool ppt = false;
  double min_eigenvalue = 0.0;
  double threshold = 0.0;  // psd_tol * ||rho||
  CVector eigenvector;     // for the minimum eigenvalue of rho^G
};

PptResult is_ppt(const BipartiteState& s, const ToleranceConfig& tol = {});

struct ReductionResult {
  bool violated = false;
  Side side = Side::A;
  double eigenvalue = 0.0;
  CVector eigenvector;
};

// Tests rho_A (x) I - rho >= 0 and I (x) rho_B - rho >= 0 and reports the
// more negative side.
ReductionResult reduction_criterion(const BipartiteState& s, const ToleranceConfig& tol = {});

// Row-major scan of 2x2 principal submatrices of rho^G.
std::optional<Witness> trivially_distillable(const BipartiteState& s, const ToleranceConfig& tol = {});
// Same scan on map(s), witness expressed on s.
std::optional<Witness> trivially_distillable(const BipartiteState& s, const LocalMap& map,
                                             const ToleranceConfig& tol = {});

enum class FullRankStatus { Holds, Violated, ShortcutHolds, ShortcutViolated };

const char* to_string(FullRankStatus s);

// side == Side::B: some x on A makes <x|rho|x> of full rank on B.
// side == Side::A: the mirror statement with the roles swapped.
struct FullRankResult {
  FullRankStatus status = FullRankStatus::Violated;
  Side side = Side::B;
  CVector witness;  // Holds: the x (on the compressed support)
  CMatrix support;  // isometry embedding the compressed space of the x side
  Index rank = 0;
  Index target = 0;  // local rank that must be reached
  int samples = 0;
  int degree = 0;
  double log10_failure_bound = 0.0;  // Violated: chance a true Holds was missed
  double best_ratio = 0.0;           // largest sigma_min / sigma_max seen
};

FullRankResult full_rank_property(const BipartiteState& s, Side side, const Options& opts = {});

// Witness built from phi with <phi|map(rho)^G|phi> < 0.
Witness witness_from_vector(const BipartiteState& s, const LocalMap& map, const CVector& phi, WitnessKind kind);

// Search for a Schmidt-rank-2 vector with negative expectation in rho^G.
std::optional<Witness> schmidt2_witness(const BipartiteState& s, const Options& opts = {});

struct WitnessCheck {
  bool ok = false;
  double value = 0.0;
  Index schmidt_rank = 0;
  std::string message;
};

WitnessCheck validate_witness(const BipartiteState& s, const Witness& w, const ToleranceConfig& tol = {});

// Decision for states with rank(rho) <= max local rank. Throws
// PreconditionError otherwise and SearchExhausted if a witness that must
// exist was not found.
Certificate classify_rank_le_max(const BipartiteState& s, const Options& opts = {});

// rho = |psi><psi| + sigma with rank(sigma_A) below the A-local rank of rho.
Certificate certify_pure_plus_sigma(const CVector& psi, const BipartiteState& sigma, const ToleranceConfig& tol = {});

// Witness for NPT states through the cheapest applicable route; nullopt when
// every route fails.
std::optional<Witness> find_witness(const BipartiteState& s, const Options& opts, std::vector<std::string>* trail);

}  // namespace qdistill
