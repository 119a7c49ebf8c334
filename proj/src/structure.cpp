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

#include "qdistill/structure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdistill/product_search.hpp"

namespace qdistill {

BNormalization b_normalize(const BipartiteState& s, const ToleranceConfig& tol) {
  const CMatrix rb = reduce(s, Side::B);
  Support sup = psd_support(rb, tol);
  BNormalization out;
  if (sup.basis.cols() == s.dim_b) {
    out.v = psd_inv_sqrt(rb);
    out.w = psd_sqrt(rb);
  } else {
    out.v = sup.values.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * sup.basis.adjoint();
    out.w = sup.basis * sup.values.cwiseSqrt().cast<cplx>().asDiagonal();
  }
  out.state = apply_local(s, CMatrix::Identity(s.dim_a, s.dim_a), out.v);
  return out;
}

Commutant commutant_decompose(const std::vector<CMatrix>& family, const Options& opts) {
  if (family.empty()) throw ValidationError("commutant_decompose: empty family");
  const Index n = family[0].rows();
  CMatrix lin(static_cast<Index>(family.size()) * n * n, n * n);
  const CMatrix id = CMatrix::Identity(n, n);
  for (size_t i = 0; i < family.size(); ++i) {
    const CMatrix& g = family[i];
    lin.middleRows(static_cast<Index>(i) * n * n, n * n) = kron(CMatrix(g.transpose()), id) - kron(id, g);
  }
  RankInfo ri = numerical_rank(lin, opts.tol);
  Commutant out;
  out.dimension = ri.kernel.cols();
  if (out.dimension <= 1) {
    out.projectors.push_back(id);
    return out;
  }
  std::vector<CMatrix> herm;
  for (Index k = 0; k < ri.kernel.cols(); ++k) {
    CMatrix x = Eigen::Map<const CMatrix>(ri.kernel.col(k).data(), n, n);
    herm.push_back(x + x.adjoint());
    herm.push_back(cplx(0, 1) * (x - x.adjoint()));
  }
  Rng rng(sub_seed(opts.seed, 83));
  for (int attempt = 0; attempt < 3; ++attempt) {
    CMatrix h = CMatrix::Zero(n, n);
    for (const auto& m : herm) h += random_uniform(rng, -1.0, 1.0) * m;
    Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
    const RVector& ev = es.eigenvalues();
    const double spread = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<CMatrix> projs;
    Index start = 0;
    for (Index i = 1; i <= n; ++i) {
      if (i == n || ev(i) - ev(i - 1) > 1e-6 * spread) {
        CMatrix v = es.eigenvectors().middleCols(start, i - start);
        projs.push_back(v * v.adjoint());
        start = i;
      }
    }
    bool ok = true;
    for (const auto& p : projs)
      for (const auto& g : family)
        if ((p * g - g * p).norm() > 1e3 * opts.tol.residual_tol * std::max(1.0, g.norm())) ok = false;
    if (ok) {
      out.projectors = std::move(projs);
      return out;
    }
  }
  throw SearchExhausted("commutant_decompose: eigenprojectors of the commutant do not commute with the family");
}

LocalMap BDirectDecomposition::component_map(size_t k) const {
  const Index m = normalization.state.dim_a;
  return {CMatrix::Identity(m, m), projectors[k] * normalization.v, false};
}

BipartiteState BDirectDecomposition::pulled_back(size_t k) const {
  const BipartiteState& c = components[k];
  const CMatrix lift = kron(CMatrix::Identity(c.dim_a, c.dim_a), normalization.w);
  return {c.dim_a, normalization.w.rows(), lift * c.rho * lift.adjoint()};
}

BDirectDecomposition decompose_b_direct(const BipartiteState& s, const Options& opts) {
  BDirectDecomposition d;
  d.normalization = b_normalize(s, opts.tol);
  const BipartiteState& ns = d.normalization.state;
  std::vector<CMatrix> family;
  for (Index i = 0; i < ns.dim_a; ++i)
    for (Index j = 0; j < ns.dim_a; ++j) {
      CMatrix b = ns.block(i, j);
      if (b.norm() > 0) family.push_back(b);
    }
  Commutant c = commutant_decompose(family, opts);
  d.projectors = c.projectors;
  for (const auto& p : d.projectors) {
    const CMatrix k = kron(CMatrix::Identity(ns.dim_a, ns.dim_a), p);
    d.components.push_back({ns.dim_a, ns.dim_b, k * ns.rho * k});
  }
  return d;
}

Certificate aggregate(const BipartiteState& s, const BDirectDecomposition& d, const std::vector<Certificate>& parts,
                      const ToleranceConfig& tol) {
  if (parts.size() != d.size()) throw ValidationError("aggregate: one certificate per component is required");
  Certificate out;
  out.trail.push_back("b_direct_sum:" + std::to_string(d.size()));
  for (size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].verdict != Verdict::Distillable || !parts[k].witness) continue;
    const Witness& w = *parts[k].witness;
    const LocalMap cm = d.component_map(k);
    Witness lifted = w;
    lifted.map = compose(cm, w.map);
    lifted.psi = lift_vector(cm, w.psi);
    lifted.psi.normalize();
    lifted.value = lifted.psi.dot(partial_transpose(s) * lifted.psi).real();
    if (w.kind == WitnessKind::ReductionViolation) lifted.kind = WitnessKind::SchmidtRank2;
    out.verdict = Verdict::Distillable;
    out.witness = lifted;
    out.trail.push_back("component_" + std::to_string(k) + "_distillable");
    return out;
  }
  bool all_sep = true, all_ppt = true, any_entangled = false;
  double min_eig = 0.0;
  for (const auto& p : parts) {
    if (p.verdict != Verdict::Separable) all_sep = false;
    if (p.verdict == Verdict::Undecided || p.verdict == Verdict::Distillable) all_ppt = false;
    if (p.verdict == Verdict::PPTEntangled) any_entangled = true;
  }
  if (all_sep) {
    for (size_t k = 0; k < parts.size(); ++k)
      for (const auto& t : parts[k].products) out.products.push_back({t.a, d.normalization.w * t.b});
    out.verdict = Verdict::Separable;
    out.min_eig_gamma = is_ppt(s, tol).min_eigenvalue;
    return out;
  }
  if (all_ppt) {
    min_eig = is_ppt(s, tol).min_eigenvalue;
    out.verdict = any_entangled ? Verdict::PPTEntangled : Verdict::PPT;
    out.min_eig_gamma = min_eig;
    return out;
  }
  out.verdict = Verdict::Undecided;
  out.note = "a component is undecided and none is distillable";
  return out;
}

std::optional<Certificate> common_kernel_distill(const BipartiteState& s, const Options& opts) {
  const ToleranceConfig& tol = opts.tol;
  Compressed c = compress(s, tol);
  const Index m = c.state.dim_a, n = c.state.dim_b;
  if (m < 2) return std::nullopt;
  BlockForm f = block_form(c.state, tol);
  std::vector<CMatrix> pencil;
  for (Index l = 0; l < n; ++l) {
    CMatrix k(f.rank, m);
    for (Index j = 0; j < m; ++j) k.col(j) = f.blocks[static_cast<size_t>(j)].col(l);
    pencil.push_back(k);
  }
  SearchOptions so;
  so.tol = tol;
  so.seed = sub_seed(opts.seed, 97);
  so.restarts = 40 * std::max(1, opts.budget);
  RankOneResult r1 = find_rank_one_in_span(pencil, so);
  if (!r1.found) return std::nullopt;
  const CVector b = r1.coefficients.normalized();
  CMatrix kb = CMatrix::Zero(f.rank, m);
  for (Index l = 0; l < n; ++l) kb += b(l) * pencil[static_cast<size_t>(l)];
  RankInfo ri = numerical_rank(kb, tol);
  if (ri.kernel.cols() < m - 1) return std::nullopt;
  const CMatrix hprime = ri.kernel.leftCols(m - 1);

  Certificate cert;
  cert.trail.push_back("common_kernel");
  BDirectDecomposition d = decompose_b_direct(s, opts);
  if (d.size() > 1) {
    if (n != 3) return std::nullopt;
    cert.trail.push_back("reducible_b_rank_3");
    for (size_t k = 0; k < d.size(); ++k) {
      std::vector<std::string> trail;
      if (auto w = find_witness(d.components[k], opts, &trail)) {
        std::vector<Certificate> parts(d.size());
        parts[k].verdict = Verdict::Distillable;
        parts[k].witness = *w;
        Certificate agg = aggregate(s, d, parts, tol);
        cert.verdict = agg.verdict;
        cert.witness = agg.witness;
        cert.trail.insert(cert.trail.end(), agg.trail.begin(), agg.trail.end());
        return cert;
      }
    }
    return std::nullopt;
  }
  // Rotate A so that H' = span{|2>, ..., |M>}, then move b to the first B
  // vector with the rest of B orthogonal to it under the (1,1) block.
  CMatrix q = complete_unitary(hprime);
  CMatrix rot(m, m);
  rot.row(0) = q.col(m - 1).adjoint();
  for (Index j = 0; j + 1 < m; ++j) rot.row(j + 1) = q.col(j).adjoint();
  const BipartiteState rotated = apply_local(c.state, rot, CMatrix::Identity(n, n));
  const CVector sb = rotated.block(0, 0) * b;
  CMatrix t = complete_unitary(sb.normalized());
  t.col(0) = b;
  const LocalMap map = compose(c.to_compressed(), LocalMap{rot, CMatrix(t.adjoint()), false});
  if (auto w = trivially_distillable(s, map, tol)) {
    cert.trail.push_back("trivially_distillable");
    cert.verdict = Verdict::Distillable;
    cert.witness = *w;
    return cert;
  }
  return std::nullopt;
}

ClassicalSide classical_side(const BipartiteState& s, Side side, const ToleranceConfig& tol) {
  std::vector<CMatrix> family;
  if (side == Side::B) {
    for (Index i = 0; i < s.dim_a; ++i)
      for (Index j = 0; j < s.dim_a; ++j) family.push_back(s.block(i, j));
  } else {
    for (Index b1 = 0; b1 < s.dim_b; ++b1)
      for (Index b2 = 0; b2 < s.dim_b; ++b2) {
        CMatrix g(s.dim_a, s.dim_a);
        for (Index i = 0; i < s.dim_a; ++i)
          for (Index k = 0; k < s.dim_a; ++k) g(i, k) = s.rho(i * s.dim_b + b1, k * s.dim_b + b2);
        family.push_back(g);
      }
  }
  const double scale = s.rho.norm();
  ClassicalSide out;
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = i + 1; j < family.size(); ++j)
      if ((family[i] * family[j] - family[j] * family[i]).norm() > tol.residual_tol * scale * scale) return out;
  const Index n = family[0].rows();
  Rng rng(0x5ca1ab1eULL);
  for (int attempt = 0; attempt < 3; ++attempt) {
    CMatrix h = CMatrix::Zero(n, n);
    for (const auto& g : family) {
      h += random_uniform(rng, -1.0, 1.0) * (g + g.adjoint());
      h += random_uniform(rng, -1.0, 1.0) * cplx(0, 1) * (g - g.adjoint());
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
    const CMatrix u = es.eigenvectors();
    bool ok = true;
    for (const auto& g : family) {
      CMatrix d = u.adjoint() * g * u;
      if ((d - CMatrix(d.diagonal().asDiagonal())).norm() > 1e3 * tol.residual_tol * std::max(scale, 1e-300)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.classical = true;
      out.basis = u;
      return out;
    }
  }
  return out;
}

}  // namespace qdistill
