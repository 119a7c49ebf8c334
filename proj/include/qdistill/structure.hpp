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

// state = (I (x) v) rho (I (x) v)^dag has identity B-marginal on its support;
// rho = (I (x) w) state (I (x) w)^dag.
struct BNormalization {
  BipartiteState state;
  CMatrix v;
  CMatrix w;
};

BNormalization b_normalize(const BipartiteState& s, const ToleranceConfig& tol = {});

// Minimal projections of the commutant of a *-closed family, obtained as the
// eigenprojectors of a generic Hermitian element.
struct Commutant {
  Index dimension = 0;
  std::vector<CMatrix> projectors;
};

Commutant commutant_decompose(const std::vector<CMatrix>& family, const Options& opts = {});

struct BDirectDecomposition {
  BNormalization normalization;
  std::vector<CMatrix> projectors;          // on the normalized B space
  std::vector<BipartiteState> components;   // (I (x) P_k) state (I (x) P_k)

  size_t size() const { return components.size(); }
  // Map taking the input rho to component k.
  LocalMap component_map(size_t k) const;
  // Component k expressed on the input space; these sum to rho.
  BipartiteState pulled_back(size_t k) const;
};

BDirectDecomposition decompose_b_direct(const BipartiteState& s, const Options& opts = {});

// Separable iff every component is, PPT iff every component is, distillable
// iff some component is. Certificates are expressed on `s`.
Certificate aggregate(const BipartiteState& s, const BDirectDecomposition& d, const std::vector<Certificate>& parts,
                      const ToleranceConfig& tol = {});

// Certificate from an (M-1)-dimensional A-subspace H' and a B-vector b with
// H' (x) b inside ker(rho). Irreducible states get a trivially distillable
// witness; reducible states with B-local rank 3 are resolved componentwise.
std::optional<Certificate> common_kernel_distill(const BipartiteState& s, const Options& opts = {});

struct ClassicalSide {
  bool classical = false;
  CMatrix basis;  // columns: eigenbasis on `side` when classical
};

// rho = sum_i p_i rho_i (x) |e_i><e_i| on `side` for an orthonormal basis e_i.
ClassicalSide classical_side(const BipartiteState& s, Side side, const ToleranceConfig& tol = {});

}  // namespace qdistill
