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

#include "qdistill/families.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "qdistill/rank4.hpp"
#include "qdistill/structure.hpp"

namespace qdistill {

namespace {

size_t letter_index(char letter) {
  const char* pos = std::strchr(CheckerboardParams::kLetters, letter);
  if (letter == '\0' || pos == nullptr) throw ValidationError(std::string("checkerboard: unknown parameter '") + letter + "'");
  return static_cast<size_t>(pos - CheckerboardParams::kLetters);
}

CVector basis3(cplx c0, cplx c1, cplx c2) {
  CVector v(3);
  v << c0, c1, c2;
  return v;
}

CVector qubit(cplx c0, cplx c1) {
  CVector v(2);
  v << c0, c1;
  return v;
}

void require_orthonormal(const CVector& u, const CVector& v, const char* what) {
  const double tol = 1e-12;
  if (u.size() != 2 || v.size() != 2) throw ValidationError(std::string("upb_shifts: ") + what + " must be qubit vectors");
  if (std::abs(u.norm() - 1.0) > tol || std::abs(v.norm() - 1.0) > tol || std::abs(u.dot(v)) > tol)
    throw ValidationError(std::string("upb_shifts: ") + what + " is not an orthonormal pair");
}

}  // namespace

cplx& CheckerboardParams::operator[](char letter) { return values[letter_index(letter)]; }
cplx CheckerboardParams::operator[](char letter) const { return values[letter_index(letter)]; }

CheckerboardParams CheckerboardParams::random(Rng& rng) {
  CheckerboardParams p;
  std::normal_distribution<double> nd;
  for (cplx& v : p.values) v = cplx(nd(rng), nd(rng));
  return p;
}

CheckerboardParams CheckerboardParams::ppt_instance(double theta, cplx r, cplx k) {
  if (std::abs(k) == 0.0) throw ValidationError("checkerboard ppt_instance: k must be nonzero");
  CheckerboardParams p;
  const cplx c = std::polar(1.0, theta);
  p['a'] = p['g'] = p['f'] = p['s'] = p['n'] = 1.0;
  p['c'] = c;
  p['r'] = r;
  p['k'] = k;
  p['h'] = r * std::conj(k);
  p['l'] = c * std::conj(r) * k / std::conj(k);
  return p;
}

std::vector<CVector> checkerboard_vectors(const CheckerboardParams& p) {
  auto psi = [](const CVector& s1, const CVector& s2, const CVector& s3) {
    CVector v(9);
    v << s1, s2, s3;
    return v;
  };
  return {
      psi(basis3(p['a'], 0, p['d']), basis3(0, p['c'], 0), basis3(p['b'], 0, p['e'])),
      psi(basis3(0, p['g'], 0), basis3(p['f'], 0, p['i']), basis3(0, p['h'], 0)),
      psi(basis3(p['j'], 0, p['m']), basis3(0, p['l'], 0), basis3(p['k'], 0, p['n'])),
      psi(basis3(0, p['q'], 0), basis3(p['p'], 0, p['s']), basis3(0, p['r'], 0)),
  };
}

std::array<CMatrix, 3> checkerboard_conj_blocks(const CheckerboardParams& p) {
  std::array<CMatrix, 3> c;
  for (CMatrix& m : c) m = CMatrix::Zero(4, 3);
  c[0] << p['a'], 0, p['d'], 0, p['g'], 0, p['j'], 0, p['m'], 0, p['q'], 0;
  c[1] << 0, p['c'], 0, p['f'], 0, p['i'], 0, p['l'], 0, p['p'], 0, p['s'];
  c[2] << p['b'], 0, p['e'], 0, p['h'], 0, p['k'], 0, p['n'], 0, p['r'], 0;
  return c;
}

BipartiteState make_checkerboard(const CheckerboardParams& p) {
  bool any = false;
  for (const cplx& v : p.values) any = any || v != 0.0;
  if (!any) throw ValidationError("make_checkerboard: all parameters are zero");
  CMatrix rho = CMatrix::Zero(9, 9);
  for (const CVector& v : checkerboard_vectors(p)) rho += v * v.adjoint();
  return {3, 3, rho};
}

namespace {

struct SweepPoint {
  double value = 0.0;
  double t = 0.0;
  double phase = 0.0;
  bool b_side = false;
};

// Projection onto span{cos t |1> + e^{i phase} sin t |3>, |2>} on one side.
LocalMap sweep_map(double t, double phase, bool b_side) {
  CMatrix v = CMatrix::Zero(2, 3);
  v(0, 0) = std::cos(t);
  v(0, 2) = std::polar(std::sin(t), phase);
  v(1, 1) = 1.0;
  if (b_side) return {v, CMatrix::Identity(3, 3), true};
  return {v, CMatrix::Identity(3, 3), false};
}

double sweep_value(const BipartiteState& s, double t, double phase, bool b_side, CVector* eigvec = nullptr) {
  const BipartiteState p = apply_local(s, sweep_map(t, phase, b_side));
  const double tr = p.rho.trace().real();
  if (!(tr > 0.0)) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(partial_transpose(p));
  if (eigvec) *eigvec = es.eigenvectors().col(0);
  return es.eigenvalues()(0) / tr;
}

}  // namespace

Certificate classify_checkerboard(const BipartiteState& s, const Options& opts) {
  if (s.dim_a != 3 || s.dim_b != 3) throw ValidationError("classify_checkerboard: expected a 3x3 state");
  const ToleranceConfig& tol = opts.tol;
  const PptResult ppt = is_ppt(s, tol);
  if (ppt.ppt) {
    Certificate c = classify_state(s, opts);
    c.trail.insert(c.trail.begin(), "checkerboard:ppt");
    return c;
  }
  std::vector<std::string> trail{"checkerboard:npt"};
  auto done = [&](Witness w, const std::string& step) -> std::optional<Certificate> {
    if (!validate_witness(s, w, tol).ok) return std::nullopt;
    trail.push_back(step);
    Certificate c;
    c.verdict = Verdict::Distillable;
    c.min_eig_gamma = ppt.min_eigenvalue;
    c.witness = std::move(w);
    c.trail = trail;
    return c;
  };

  const LocalRanks lr = local_ranks(s, tol);
  if (lr.a < 3 || lr.b < 3) {
    trail.push_back("local_rank_below_3");
    Certificate c = classify_state(s, opts);
    if (c.verdict == Verdict::Distillable && c.witness && validate_witness(s, *c.witness, tol).ok) {
      c.trail.insert(c.trail.begin(), trail.begin(), trail.end());
      return c;
    }
  } else if (auto w = trivially_distillable(s, tol)) {
    if (auto c = done(*w, "trivial_submatrix")) return *c;
  }

  // Every 2-dim subspace span{u, |2>}, u in span{|1>, |3>}, on either side.
  // The family is invariant under the local operators that fix the
  // checkerboard pattern, so it contains the gauge-fixed sweep V(x).
  SweepPoint best{1.0, 0.0, 0.0, false};
  const int nt = 13, np = 16;
  for (int side = 0; side < 2; ++side)
    for (int it = 0; it < nt; ++it)
      for (int ip = 0; ip < (it == 0 ? 1 : np); ++ip) {
        const double t = 1.5707963267948966 * it / (nt - 1);
        const double ph = 6.283185307179586 * ip / np;
        const double v = sweep_value(s, t, ph, side == 1);
        if (v < best.value) best = {v, t, ph, side == 1};
      }
  double step_t = 1.5707963267948966 / (nt - 1), step_p = 6.283185307179586 / np;
  for (int iter = 0; iter < 60 && step_t > 1e-9; ++iter) {
    bool moved = false;
    for (const auto& d : {std::pair<double, double>{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const double t = best.t + d.first * step_t, ph = best.phase + d.second * step_p;
      const double v = sweep_value(s, t, ph, best.b_side);
      if (v < best.value) {
        best = {v, t, ph, best.b_side};
        moved = true;
      }
    }
    if (!moved) {
      step_t *= 0.5;
      step_p *= 0.5;
    }
  }
  if (best.value < -tol.psd_tol) {
    CVector phi;
    sweep_value(s, best.t, best.phase, best.b_side, &phi);
    Witness w = witness_from_vector(s, sweep_map(best.t, best.phase, best.b_side), phi, WitnessKind::TwoByNProjection);
    if (std::abs(std::cos(best.t)) > 1e-12) w.x = std::polar(std::tan(best.t), best.phase);
    if (auto c = done(w, best.b_side ? "projection_sweep_b" : "projection_sweep_a")) return *c;
  }

  std::vector<std::string> sub;
  if (auto w = find_witness(s, opts, &sub)) {
    trail.insert(trail.end(), sub.begin(), sub.end());
    if (auto c = done(*w, "find_witness")) return *c;
  }
  if (auto c = common_kernel_distill(s, opts)) {
    if (c->witness && validate_witness(s, *c->witness, tol).ok) {
      c->trail.insert(c->trail.begin(), trail.begin(), trail.end());
      return *c;
    }
  }
  std::ostringstream os;
  os << "classify_checkerboard: NPT (min eig " << ppt.min_eigenvalue << ") but no witness found; best sweep value "
     << best.value;
  throw SearchExhausted(os.str());
}

BipartiteState antisymmetric(Index n) {
  if (n < 2) throw ValidationError("antisymmetric: n must be at least 2");
  CMatrix rho = CMatrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      CVector v = CVector::Zero(n * n);
      v(i * n + j) = 1.0;
      v(j * n + i) = -1.0;
      rho += v * v.adjoint();
    }
  return {n, n, rho};
}

BipartiteState werner(Index n, double phi) {
  if (n < 2) throw ValidationError("werner: n must be at least 2");
  if (!(phi >= -1.0 && phi <= 1.0)) throw ValidationError("werner: phi must lie in [-1, 1]");
  CMatrix f = CMatrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) f(i * n + j, j * n + i) = 1.0;
  const double norm = static_cast<double>(n * n) - static_cast<double>(n) * phi;
  return {n, n, (CMatrix::Identity(n * n, n * n) - phi * f) / norm};
}

BipartiteState upb_tiles_3x3() {
  const double h = std::sqrt(0.5);
  const std::array<std::pair<CVector, CVector>, 5> tiles{{
      {basis3(1, 0, 0), basis3(h, -h, 0)},
      {basis3(h, -h, 0), basis3(0, 0, 1)},
      {basis3(0, 0, 1), basis3(0, h, -h)},
      {basis3(0, h, -h), basis3(1, 0, 0)},
      {basis3(1, 1, 1) / std::sqrt(3.0), basis3(1, 1, 1) / std::sqrt(3.0)},
  }};
  CMatrix rho = CMatrix::Identity(9, 9);
  for (const auto& [a, b] : tiles) {
    const CVector v = kron(a, b);
    rho -= v * v.adjoint();
  }
  return {3, 3, rho};
}

ShiftsBasis ShiftsBasis::from_angles(double theta_a, double theta_b, double theta_c) {
  auto pair = [](double t) { return std::make_pair(qubit(std::cos(t), std::sin(t)), qubit(-std::sin(t), std::cos(t))); };
  ShiftsBasis s;
  std::tie(s.a, s.a_perp) = pair(theta_a);
  std::tie(s.b, s.b_perp) = pair(theta_b);
  std::tie(s.c, s.c_perp) = pair(theta_c);
  return s;
}

CMatrix upb_shifts_operator(const ShiftsBasis& s) {
  require_orthonormal(s.a, s.a_perp, "{a, a_perp}");
  require_orthonormal(s.b, s.b_perp, "{b, b_perp}");
  require_orthonormal(s.c, s.c_perp, "{c, c_perp}");
  const CVector e1 = qubit(1, 0), e2 = qubit(0, 1);
  const std::array<CVector, 4> psi{kron(kron(e1, e1), e1), kron(kron(e2, s.b), s.c), kron(kron(s.a, e2), s.c_perp),
                                   kron(kron(s.a_perp, s.b_perp), e2)};
  CMatrix rho = CMatrix::Identity(8, 8);
  for (const CVector& v : psi) rho -= v * v.adjoint();
  return rho;
}

BipartiteState three_qubit_cut(const CMatrix& rho8, int party) {
  if (rho8.rows() != 8 || rho8.cols() != 8) throw ValidationError("three_qubit_cut: expected an 8x8 operator");
  if (party < 0 || party > 2) throw ValidationError("three_qubit_cut: party must be 0, 1 or 2");
  std::array<int, 3> order{party, party == 0 ? 1 : 0, party == 2 ? 1 : 2};
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(8);
  for (int idx = 0; idx < 8; ++idx) {
    const int bits[3] = {(idx >> 2) & 1, (idx >> 1) & 1, idx & 1};
    perm.indices()(idx) = bits[order[0]] * 4 + bits[order[1]] * 2 + bits[order[2]];
  }
  return {2, 4, perm * rho8 * perm.transpose()};
}

namespace {

void validate_label(const LabelSpec& spec) {
  if (spec.probabilities.empty() || spec.probabilities.size() != spec.components.size())
    throw ValidationError("label_state: probabilities and components must be non-empty and of equal length");
  double total = 0.0;
  for (double p : spec.probabilities) {
    if (!(p >= 0.0)) throw ValidationError("label_state: probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("label_state: probabilities must sum to 1");
  for (const CVector& c : spec.components)
    if (c.size() != spec.dim_a * spec.dim_b || c.norm() == 0.0)
      throw ValidationError("label_state: each component must be a nonzero vector of size dim_a * dim_b");
}

}  // namespace

BipartiteState label_state(const LabelSpec& spec) {
  validate_label(spec);
  const Index n = static_cast<Index>(spec.components.size());
  const Index da = spec.dim_a, db = spec.dim_b;
  const Index out_a = spec.label_on_b ? da : n * da, out_b = spec.label_on_b ? n * db : db;
  CMatrix rho = CMatrix::Zero(out_a * out_b, out_a * out_b);
  for (Index i = 0; i < n; ++i) {
    const CVector psi = spec.components[static_cast<size_t>(i)].normalized();
    CVector v = CVector::Zero(out_a * out_b);
    for (Index a = 0; a < da; ++a)
      for (Index b = 0; b < db; ++b)
        v(spec.label_on_b ? a * out_b + i * db + b : (i * da + a) * db + b) = psi(a * db + b);
    rho += spec.probabilities[static_cast<size_t>(i)] * v * v.adjoint();
  }
  return {out_a, out_b, rho};
}

double label_state_entanglement(const LabelSpec& spec) {
  validate_label(spec);
  double e = 0.0;
  for (size_t i = 0; i < spec.components.size(); ++i) {
    if (spec.probabilities[i] == 0.0) continue;
    const BipartiteState s = pure_state(spec.components[i].normalized(), spec.dim_a, spec.dim_b);
    e += spec.probabilities[i] * von_neumann_entropy(reduce(s, Side::B));
  }
  return e;
}

namespace {

CVector ket44(std::initializer_list<std::pair<cplx, std::pair<int, int>>> terms) {
  CVector v = CVector::Zero(16);
  for (const auto& [c, ij] : terms) v((ij.first - 1) * 4 + (ij.second - 1)) += c;
  return v;
}

}  // namespace

std::array<std::array<BipartiteState, 2>, 2> reducible_4x4_decompositions() {
  const CVector phi1 = ket44({{1.0, {1, 1}}, {1.0, {2, 2}}});
  const CVector phi2 = ket44({{1.0, {1, 3}}, {1.0, {2, 4}}});
  const CVector p1 = ket44({{1.0, {1, 1}}, {1.0, {1, 3}}, {1.0, {2, 2}}, {1.0, {2, 4}}});
  const CVector p2 = ket44({{1.0, {1, 1}}, {-1.0, {1, 3}}, {1.0, {2, 2}}, {-1.0, {2, 4}}});
  auto st = [](const CVector& v, double w) { return BipartiteState{4, 4, w * v * v.adjoint()}; };
  return {{{st(phi1, 2.0), st(phi2, 2.0)}, {st(p1, 1.0), st(p2, 1.0)}}};
}

BipartiteState reducible_4x4_example() {
  const auto d = reducible_4x4_decompositions();
  return {4, 4, d[0][0].rho + d[0][1].rho};
}

BipartiteState two_term_2x2(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("two_term_2x2: p must lie in (0, 1)");
  CVector v1 = CVector::Zero(4), v2 = CVector::Zero(4);
  v1(0) = v1(3) = std::sqrt(p / 2.0);
  v2(0) = std::sqrt((1.0 - p) / 2.0);
  v2(3) = -v2(0);
  return {2, 2, v1 * v1.adjoint() + v2 * v2.adjoint()};
}

BipartiteState rfrp_violator_2x3() {
  CVector v = CVector::Zero(6);
  v(0) = v(4) = 1.0;  // |11> + |22>
  CMatrix rho = v * v.adjoint();
  rho(5, 5) += 1.0;  // |23>
  rho(2, 2) += 1.0;  // |13>
  return {2, 3, rho};
}

Fixture make_fixture(const FixtureSpec& spec) {
  const std::string& n = spec.name;
  if (n == "antisymmetric") return antisymmetric(spec.n);
  if (n == "werner") return werner(spec.n, spec.phi);
  if (n == "upb_tiles_3x3") return upb_tiles_3x3();
  if (n == "upb_shifts_2x2x2") return three_qubit_cut(upb_shifts_operator(spec.shifts), spec.cut);
  if (n == "generalized_ghz") return generalized_ghz(spec.ghz);
  if (n == "label_state") return label_state(spec.label);
  if (n == "reducible_4x4_example") return reducible_4x4_example();
  if (n == "checkerboard") return make_checkerboard(spec.checkerboard);
  if (n == "two_term_2x2") return two_term_2x2(spec.p);
  if (n == "rfrp_violator_2x3") return rfrp_violator_2x3();
  if (n == "bell") {
    CVector v = CVector::Zero(4);
    v(0) = v(3) = 1.0;
    return pure_state(v, 2, 2);
  }
  throw ValidationError("make_fixture: unknown family '" + n + "'");
}

}  // namespace qdistill
