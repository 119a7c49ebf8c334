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

#include <vector>

#include "qdistill/criteria.hpp"

namespace qdistill {

// PPT state whose rank equals its larger local rank: exactly that many
// product terms. Throws PreconditionError outside that regime and
// SearchExhausted when the blocks fail to diagonalize jointly.
std::vector<ProductTerm> separable_decomposition_rank_n(const BipartiteState& s, const Options& opts = {});

struct ConstrainedProduct {
  bool found = false;
  CVector a;
  CVector b;
  double residual = 0.0;
};

// Product vector a (x) b in range(rho) whose partial conjugate conj(a) (x) b
// lies in range(rho^G).
ConstrainedProduct find_constrained_product(const BipartiteState& s, const Options& opts = {});

// Separable decomposition of a PPT state by repeated subtraction of product
// terms that keep both rho and rho^G positive. Terminates in the rank-N
// regime. Succeeds on every separable input for which the product search
// converges; throws SearchExhausted otherwise.
std::vector<ProductTerm> separable_decomposition(const BipartiteState& s, const Options& opts = {});

}  // namespace qdistill
