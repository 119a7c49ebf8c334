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

#include "qdistill/tripartite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qdistill/decomposition.hpp"
#include "qdistill/rank4.hpp"
#include "qdistill/structure.hpp"

namespace qdistill {

const char* to_string(Pair p) {
  switch (p) {
    case Pair::AB: return "AB";
    case Pair::AC: return "AC";
    case Pair::BC: return "BC";
  }
  return "?";
}

TripartitePure make_tripartite(const CVector& amplitudes, Index da, Index db, Index dc) {
  if (da <= 0 || db <= 0 || dc <= 0) throw ValidationError("make_tripartite: dimensions must be positive");
  if (amplitudes.size() != da * db * dc) throw ValidationError("make_tripartite: amplitude count does not match dims");
  if (amplitudes.norm() == 0.0) throw ValidationError("make_tripartite: zero vector");
  return {da, db, dc, amplitudes};
}

BipartiteState reduced_pair(const TripartitePure& psi, Pair p) {
  const Index da = psi.da, db = psi.db, dc = psi.dc;
  switch (p) {
    case Pair::AB: {
      CMatrix m(da * db, dc);
      for (Index r = 0; r < da * db; ++r) m.row(r) = psi.amplitudes.segment(r * dc, dc).transpose();
      return {da, db, m * m.adjoint()};
    }
    case Pair::AC: {
      CMatrix m(da * dc, db);
      for (Index i = 0; i < da; ++i)
        for (Index j = 0; j < db; ++j)
          for (Index k = 0; k < dc; ++k) m(i * dc + k, j) = psi.amplitudes(i * db * dc + j * dc + k);
      return {da, dc, m * m.adjoint()};
    }
    case Pair::BC: {
      CMatrix m(db * dc, da);
      for (Index i = 0; i < da; ++i) m.col(i) = psi.amplitudes.segment(i * db * dc, db * dc);
      return {db, dc, m * m.adjoint()};
    }
  }
  throw ValidationError("reduced_pair: unknown pair");
}

TripartitePure apply_local3(const TripartitePure& psi, const CMatrix& ua, const CMatrix& ub, const CMatrix& uc) {
  return {ua.rows(), ub.rows(), uc.rows(), kron(kron(ua, ub), uc) * psi.amplitudes};
}

TripartitePure generalized_ghz(const CVector& coefficients) {
  const Index d = coefficients.size();
  if (d == 0) throw ValidationError("generalized_ghz: no coefficients");
  CVector amp = CVector::Zero(d * d * d);
  for (Index i = 0; i < d; ++i) amp(i * d * d + i * d + i) = coefficients(i);
  return make_tripartite(amp, d, d, d);
}

CanonicalForm canonical_form(const TripartitePure& psi, const Options& opts) {
  const ToleranceConfig& tol = opts.tol;
  const BipartiteState rab = reduced_pair(psi, Pair::AB);
  const BipartiteState rac = reduced_pair(psi, Pair::AC);
  if (!is_ppt(rab, tol).ppt || !is_ppt(rac, tol).ppt)
    throw PreconditionError("canonical_form: both reductions containing A must be PPT");
  const Index da = psi.da, db = psi.db, dc = psi.dc;
  std::vector<ProductTerm> prods = separable_decomposition_rank_n(rab, opts);
  const Index d = static_cast<Index>(prods.size());

  // psi = sum_i |a_i b_i> (x) |c_i> with c_i orthonormal.
  CMatrix v(da * db, d);
  for (Index i = 0; i < d; ++i) v.col(i) = kron(prods[static_cast<size_t>(i)].a, prods[static_cast<size_t>(i)].b);
  CMatrix psim(da * db, dc);
  for (Index r = 0; r < da * db; ++r) psim.row(r) = psi.amplitudes.segment(r * dc, dc).transpose();
  const CMatrix w = v.completeOrthogonalDecomposition().solve(psim);
  std::vector<CVector> c(static_cast<size_t>(d));
  for (Index i = 0; i < d; ++i) c[static_cast<size_t>(i)] = w.row(i).transpose();

  // Groups of parallel a_i.
  std::vector<int> group(static_cast<size_t>(d), -1);
  std::vector<CVector> reps;
  for (Index i = 0; i < d; ++i) {
    const CVector ai = prods[static_cast<size_t>(i)].a.normalized();
    for (size_t g = 0; g < reps.size(); ++g)
      if (std::abs(reps[g].dot(ai)) > 1.0 - 1e-8) {
        group[static_cast<size_t>(i)] = static_cast<int>(g);
        break;
      }
    if (group[static_cast<size_t>(i)] < 0) {
      group[static_cast<size_t>(i)] = static_cast<int>(reps.size());
      reps.push_back(ai);
    }
  }

  // Re-diagonalize the A-C correlations inside each group.
  std::vector<CVector> fhat;
  for (size_t g = 0; g < reps.size(); ++g) {
    CMatrix tau = CMatrix::Zero(dc, dc);
    for (Index i = 0; i < d; ++i) {
      if (group[static_cast<size_t>(i)] != static_cast<int>(g)) continue;
      const cplx ai = reps[g].dot(prods[static_cast<size_t>(i)].a);
      for (Index j = 0; j < d; ++j) {
        if (group[static_cast<size_t>(j)] != static_cast<int>(g)) continue;
        const cplx aj = reps[g].dot(prods[static_cast<size_t>(j)].a);
        const cplx overlap = prods[static_cast<size_t>(j)].b.dot(prods[static_cast<size_t>(i)].b);
        tau += overlap * ai * std::conj(aj) * c[static_cast<size_t>(i)] * c[static_cast<size_t>(j)].adjoint();
      }
    }
    Support sup = psd_support(tau, tol);
    for (Index k = 0; k < sup.basis.cols(); ++k) fhat.push_back(sup.basis.col(k));
  }
  if (static_cast<Index>(fhat.size()) != d) throw SearchExhausted("canonical_form: group spectra do not span the C support");

  CanonicalForm out;
  std::vector<CVector> h(static_cast<size_t>(d)), e(static_cast<size_t>(d));
  for (Index j = 0; j < d; ++j) {
    CVector chi = psim * fhat[static_cast<size_t>(j)].conjugate();
    CMatrix cm = coefficient_matrix(chi, da, db);
    Eigen::JacobiSVD<CMatrix> svd(cm, Eigen::ComputeThinU | Eigen::ComputeThinV);
    e[static_cast<size_t>(j)] = svd.singularValues()(0) * svd.matrixU().col(0);
    h[static_cast<size_t>(j)] = svd.matrixV().col(0).conjugate();
  }
  std::vector<Index> order(static_cast<size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return e[static_cast<size_t>(x)].norm() > e[static_cast<size_t>(y)].norm(); });
  out.ub.resize(d, db);
  out.uc.resize(d, dc);
  for (Index j = 0; j < d; ++j) {
    const Index src = order[static_cast<size_t>(j)];
    CVector a = e[static_cast<size_t>(src)];
    cplx phase = 1.0;
    const double an = a.norm();
    for (Index t = 0; t < a.size(); ++t)
      if (std::abs(a(t)) > 1e-8 * an) {
        phase = a(t) / std::abs(a(t));
        break;
      }
    out.a_vectors.push_back(a * std::conj(phase));
    out.ub.row(j) = std::conj(phase) * h[static_cast<size_t>(src)].adjoint();
    out.uc.row(j) = fhat[static_cast<size_t>(src)].adjoint();
  }
  CVector target = CVector::Zero(da * d * d);
  for (Index j = 0; j < d; ++j) {
    CVector jj = CVector::Zero(d * d);
    jj(j * d + j) = 1.0;
    target += kron(out.a_vectors[static_cast<size_t>(j)], jj);
  }
  const CVector mapped = kron(kron(CMatrix::Identity(da, da), out.ub), out.uc) * psi.amplitudes;
  out.residual = (mapped - target).norm() / psi.amplitudes.norm();
  if (!(out.residual <= 10.0 * tol.residual_tol)) {
    std::ostringstream os;
    os << "canonical_form: residual " << out.residual << " exceeds tolerance";
    throw SearchExhausted(os.str());
  }
  return out;
}

PairClassification classify_pairs(const TripartitePure& psi, const Options& opts, bool certify_npt) {
  PairClassification out;
  const BipartiteState rab = reduced_pair(psi, Pair::AB);
  const BipartiteState rac = reduced_pair(psi, Pair::AC);
  const PptResult pab = is_ppt(rab, opts.tol), pac = is_ppt(rac, opts.tol);
  out.ab_ppt = pab.ppt;
  out.ac_ppt = pac.ppt;
  if (pab.ppt && pac.ppt) {
    out.canonical = canonical_form(psi, opts);
    const CanonicalForm& cf = *out.canonical;
    out.ab.verdict = out.ac.verdict = Verdict::Separable;
    out.ab.trail = out.ac.trail = {"canonical_form"};
    out.ab.min_eig_gamma = pab.min_eigenvalue;
    out.ac.min_eig_gamma = pac.min_eigenvalue;
    for (size_t j = 0; j < cf.a_vectors.size(); ++j) {
      out.ab.products.push_back({cf.a_vectors[j], cf.ub.row(static_cast<Index>(j)).adjoint()});
      out.ac.products.push_back({cf.a_vectors[j], cf.uc.row(static_cast<Index>(j)).adjoint()});
    }
    return out;
  }
  auto one = [&](const BipartiteState& r, const PptResult& p, Certificate& cert, std::uint64_t salt) {
    if (!certify_npt && !p.ppt) {
      cert.verdict = Verdict::Undecided;
      cert.min_eig_gamma = p.min_eigenvalue;
      cert.note = "NPT; certification skipped";
      return;
    }
    Options sub = opts;
    sub.seed = sub_seed(opts.seed, salt);
    if (!certify_npt) {
      cert.verdict = Verdict::PPT;
      cert.min_eig_gamma = p.min_eigenvalue;
      return;
    }
    cert = classify_state(r, sub);
  };
  one(rab, pab, out.ab, 401);
  one(rac, pac, out.ac, 402);
  return out;
}

GhzResult ghz_test(const TripartitePure& psi, const Options& opts) {
  GhzResult out;
  const BipartiteState rab = reduced_pair(psi, Pair::AB);
  const BipartiteState rac = reduced_pair(psi, Pair::AC);
  const BipartiteState rbc = reduced_pair(psi, Pair::BC);

  // Route 1: undistillability of all three reductions. Both reductions that
  // contain A being PPT yields the canonical form; the B-C reduction then has
  // rank at most its local ranks, where PPT is equivalent to undistillable.
  PairClassification pa = classify_pairs(psi, opts, false);
  std::optional<CanonicalForm> cf = pa.canonical;
  bool route1 = pa.ab_ppt && pa.ac_ppt && is_ppt(rbc, opts.tol).ppt;
  out.route_undistillable = route1;

  // Route 2: every reduction is classical on at least one side.
  bool route2 = true;
  for (const BipartiteState* r : {&rab, &rac, &rbc}) {
    if (classical_side(*r, Side::A, opts.tol).classical) continue;
    if (classical_side(*r, Side::B, opts.tol).classical) continue;
    route2 = false;
    break;
  }
  out.route_zero_discord = route2;
  if (route1 != route2) throw Error("ghz_test: the undistillability and zero-discord routes disagree");
  out.ghz = route1;
  if (out.ghz && cf) {
    out.coefficients.resize(static_cast<Index>(cf->a_vectors.size()));
    for (size_t j = 0; j < cf->a_vectors.size(); ++j) out.coefficients(static_cast<Index>(j)) = cf->a_vectors[j].norm();
  }
  return out;
}

}  // namespace qdistill
