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
#include <string>
#include <variant>
#include <vector>

#include "qdistill/criteria.hpp"
#include "qdistill/tripartite.hpp"

namespace qdistill {

// Two-qutrit four-term family. Letters a..s without o, in that order.
struct CheckerboardParams {
  static constexpr const char* kLetters = "abcdefghijklmnpqrs";
  std::array<cplx, 18> values{};

  cplx& operator[](char letter);
  cplx operator[](char letter) const;
  static CheckerboardParams random(Rng& rng);
  // PPT instance from the boundary constraints: a = g = f = s = n = 1,
  // |c| = 1, h = r conj(k), l = c conj(r) k / conj(k), all others zero.
  static CheckerboardParams ppt_instance(double theta, cplx r, cplx k);
};

// The four range vectors psi_1..psi_4.
std::vector<CVector> checkerboard_vectors(const CheckerboardParams& p);
// The conjugated blocks C_1^*, C_2^*, C_3^* (4 x 3 each).
std::array<CMatrix, 3> checkerboard_conj_blocks(const CheckerboardParams& p);
BipartiteState make_checkerboard(const CheckerboardParams& p);

// PPT inputs go through the general dispatcher. NPT inputs get a
// re-validated witness; SearchExhausted if none is found, which signals a
// numerical problem rather than a verdict.
Certificate classify_checkerboard(const BipartiteState& s, const Options& opts = {});

// Unnormalized: sum_{i<j} (|ij> - |ji>)(<ij| - <ji|).
BipartiteState antisymmetric(Index n);
// (I - phi F) / (n^2 - n phi), F the swap, -1 <= phi <= 1.
BipartiteState werner(Index n, double phi);
// I_9 minus the five tile projectors.
BipartiteState upb_tiles_3x3();

// {a, a_perp}, {b, b_perp}, {c, c_perp} orthonormal qubit bases.
struct ShiftsBasis {
  CVector a, a_perp, b, b_perp, c, c_perp;
  static ShiftsBasis from_angles(double theta_a, double theta_b, double theta_c);
};
// Three-qubit I_8 minus the four product projectors, party order A, B, C.
CMatrix upb_shifts_operator(const ShiftsBasis& basis);
// Cut `party` : rest of a three-qubit operator, remaining parties in order.
BipartiteState three_qubit_cut(const CMatrix& rho8, int party);

// sum_i p_i |label_i><label_i| (x) |psi_i><psi_i| with orthogonal labels on
// B (label_on_b) or on A. Components are normalized on construction.
struct LabelSpec {
  Index dim_a = 2;
  Index dim_b = 2;
  std::vector<double> probabilities;
  std::vector<CVector> components;
  bool label_on_b = true;
};
BipartiteState label_state(const LabelSpec& spec);
// sum_i p_i S(tr_A |psi_i><psi_i|), in bits.
double label_state_entanglement(const LabelSpec& spec);

// 2|phi_1><phi_1| + 2|phi_2><phi_2|, phi_1 = |11> + |22>, phi_2 = |13> + |24>.
BipartiteState reducible_4x4_example();
// Both printed B-direct decompositions, each a pair summing to the example.
std::array<std::array<BipartiteState, 2>, 2> reducible_4x4_decompositions();

// |psi_1><psi_1| + |psi_2><psi_2|, psi_1 = sqrt(p/2)(|00>+|11>),
// psi_2 = sqrt((1-p)/2)(|00>-|11>).
BipartiteState two_term_2x2(double p);
// (|11> + |22>)(<11| + <22|) + |23><23| + |13><13|.
BipartiteState rfrp_violator_2x3();

using Fixture = std::variant<BipartiteState, TripartitePure>;

struct FixtureSpec {
  // antisymmetric, werner, upb_tiles_3x3, upb_shifts_2x2x2, generalized_ghz,
  // label_state, reducible_4x4_example, checkerboard, two_term_2x2,
  // rfrp_violator_2x3, bell
  std::string name;
  Index n = 3;
  double phi = 0.0;
  double p = 0.25;
  ShiftsBasis shifts = ShiftsBasis::from_angles(0.7853981633974483, 0.7853981633974483, 0.7853981633974483);
  int cut = 0;  // party alone in the shifts bipartition
  CVector ghz;
  LabelSpec label;
  CheckerboardParams checkerboard;
};

Fixture make_fixture(const FixtureSpec& spec);

}  // namespace qdistill
