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

#include "qdistill/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qdistill/decomposition.hpp"

namespace qdistill {

const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::TrivialSubmatrix: return "TrivialSubmatrix";
    case WitnessKind::TwoByNProjection: return "TwoByNProjection";
    case WitnessKind::ReductionViolation: return "ReductionViolation";
    case WitnessKind::SchmidtRank2: return "SchmidtRank2";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Separable: return "Separable";
    case Verdict::PPT: return "PPT";
    case Verdict::PPTEntangled: return "PPTEntangled";
    case Verdict::Distillable: return "Distillable";
    case Verdict::Undecided: return "Undecided";
  }
  return "?";
}

const char* to_string(FullRankStatus s) {
  switch (s) {
    case FullRankStatus::Holds: return "Holds";
    case FullRankStatus::Violated: return "Violated";
    case FullRankStatus::ShortcutHolds: return "ShortcutHolds";
    case FullRankStatus::ShortcutViolated: return "ShortcutViolated";
  }
  return "?";
}

CMatrix product_sum(const std::vector<ProductTerm>& terms) {
  if (terms.empty()) return CMatrix();
  const Index n = terms[0].a.size() * terms[0].b.size();
  CMatrix out = CMatrix::Zero(n, n);
  for (const auto& t : terms) {
    CVector v = kron(t.a, t.b);
    out += v * v.adjoint();
  }
  return out;
}

double reconstruction_residual(const BipartiteState& s, const std::vector<ProductTerm>& terms) {
  if (terms.empty()) return std::numeric_limits<double>::infinity();
  return (product_sum(terms) - s.rho).norm() / s.rho.norm();
}

PptResult is_ppt(const BipartiteState& s, const ToleranceConfig& tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(partial_transpose(s));
  PptResult r;
  r.min_eigenvalue = es.eigenvalues()(0);
  r.eigenvector = es.eigenvectors().col(0);
  r.threshold = tol.psd_tol * state_norm(s);
  r.ppt = r.min_eigenvalue >= -r.threshold;
  return r;
}

ReductionResult reduction_criterion(const BipartiteState& s, const ToleranceConfig& tol) {
  const double thr = tol.psd_tol * state_norm(s);
  ReductionResult best;
  best.eigenvalue = std::numeric_limits<double>::infinity();
  for (Side side : {Side::A, Side::B}) {
    CMatrix red = reduce(s, side);
    CMatrix op = side == Side::A ? kron(red, CMatrix::Identity(s.dim_b, s.dim_b))
                                 : kron(CMatrix::Identity(s.dim_a, s.dim_a), red);
    op -= s.rho;
    Eigen::SelfAdjointEigenSolver<CMatrix> es((op + op.adjoint()) / 2.0);
    if (es.eigenvalues()(0) < best.eigenvalue) {
      best.eigenvalue = es.eigenvalues()(0);
      best.eigenvector = es.eigenvectors().col(0);
      best.side = side;
    }
  }
  best.violated = best.eigenvalue < -thr;
  return best;
}

Witness witness_from_vector(const BipartiteState& s, const LocalMap& map, const CVector& phi, WitnessKind kind) {
  Witness w;
  w.kind = kind;
  w.map = map;
  w.psi = lift_vector(map, phi);
  const double nrm = w.psi.norm();
  if (nrm > 0) w.psi /= nrm;
  w.value = w.psi.dot(partial_transpose(s) * w.psi).real();
  return w;
}

namespace {

// Negative eigenvector of a 2x2 principal submatrix, embedded.
CVector embed_pair_eigenvector(const CMatrix& g, Index p, Index q, double* lambda) {
  Eigen::Matrix2cd sub;
  sub << g(p, p), g(p, q), g(q, p), g(q, q);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es((sub + sub.adjoint()) / 2.0);
  if (lambda) *lambda = es.eigenvalues()(0);
  CVector v = CVector::Zero(g.rows());
  v(p) = es.eigenvectors()(0, 0);
  v(q) = es.eigenvectors()(1, 0);
  return v;
}

}  // namespace

std::optional<Witness> trivially_distillable(const BipartiteState& s, const LocalMap& map, const ToleranceConfig& tol) {
  BipartiteState t = apply_local(s, map);
  const CMatrix g = partial_transpose(t);
  const double thr = tol.psd_tol * state_norm(t);
  const Index n = g.rows();
  for (Index p = 0; p < n; ++p)
    for (Index q = p + 1; q < n; ++q) {
      const double a = g(p, p).real(), c = g(q, q).real();
      if (std::min(std::abs(a), std::abs(c)) > thr) continue;
      if (std::abs(g(p, q)) <= thr) continue;
      double lambda = 0;
      CVector phi = embed_pair_eigenvector(g, p, q, &lambda);
      if (lambda >= -thr) continue;
      Witness w = witness_from_vector(s, map, phi, WitnessKind::TrivialSubmatrix);
      w.row = p;
      w.col = q;
      return w;
    }
  return std::nullopt;
}

std::optional<Witness> trivially_distillable(const BipartiteState& s, const ToleranceConfig& tol) {
  return trivially_distillable(s, LocalMap::identity(s.dim_a, s.dim_b), tol);
}

FullRankResult full_rank_property(const BipartiteState& s, Side side, const Options& opts) {
  const Compressed c = compress(s, opts.tol);
  const BlockForm f = block_form(c.state, opts.tol);
  const Index m = c.state.dim_a, n = c.state.dim_b, r = f.rank;
  FullRankResult res;
  res.side = side;
  res.rank = r;
  res.target = side == Side::B ? n : m;
  const Index free_dim = side == Side::B ? m : n;
  res.support = side == Side::B ? c.ua : c.ub;
  res.degree = static_cast<int>(res.target);

  // Pencil in the free variables: sum_k x_k P_k, each P_k of size r x target.
  std::vector<CMatrix> pencil;
  if (side == Side::B) {
    pencil = f.blocks;
  } else {
    for (Index l = 0; l < n; ++l) {
      CMatrix k(r, m);
      for (Index j = 0; j < m; ++j) k.col(j) = f.blocks[static_cast<size_t>(j)].col(l);
      pencil.push_back(k);
    }
  }

  const bool shortcut_violated = r < res.target;
  const bool shortcut_holds = r > free_dim * (res.target - 1);
  if (shortcut_violated) {
    res.status = FullRankStatus::ShortcutViolated;
    return res;
  }

  // Lattice of step 2^-12 inside the unit disc, for the Schwartz-Zippel bound.
  constexpr double kStep = 1.0 / 4096.0;
  const double lattice_size = M_PI / (kStep * kStep);
  Rng rng(sub_seed(opts.seed, 11));
  const int samples = 64 * std::max(1, opts.budget);
  for (int t = 0; t < samples; ++t) {
    CVector x(free_dim);
    for (Index i = 0; i < free_dim; ++i) {
      cplx z = random_disc_point(rng);
      x(i) = cplx(std::round(z.real() / kStep) * kStep, std::round(z.imag() / kStep) * kStep);
    }
    CMatrix pm = CMatrix::Zero(r, res.target);
    for (Index i = 0; i < free_dim; ++i) pm += x(i) * pencil[static_cast<size_t>(i)];
    Eigen::JacobiSVD<CMatrix> svd(pm);
    const RVector& sv = svd.singularValues();
    const double ratio = sv(0) > 0 ? sv(res.target - 1) / sv(0) : 0.0;
    res.samples = t + 1;
    res.best_ratio = std::max(res.best_ratio, ratio);
    if (ratio > opts.tol.residual_tol) {
      res.status = shortcut_holds ? FullRankStatus::ShortcutHolds : FullRankStatus::Holds;
      res.witness = res.support * x;
      return res;
    }
  }
  if (shortcut_holds) {
    res.status = FullRankStatus::ShortcutHolds;
    return res;
  }
  res.status = FullRankStatus::Violated;
  res.log10_failure_bound = res.samples * std::log10(static_cast<double>(res.degree) / lattice_size);
  return res;
}

namespace {

// Search state for Schmidt-rank-2 vectors: `g` is the partial transpose of
// the working state, frames are 2 x dim_a row-orthonormal maps on A.
struct FrameSearch {
  const CMatrix& g;
  Index dim_a, dim_b;

  struct Eval {
    double value = std::numeric_limits<double>::infinity();
    CVector phi;
    CMatrix frame;
  };

  Eval eval(const CMatrix& frame) const {
    CMatrix lift = kron(CMatrix(frame.conjugate()), CMatrix::Identity(dim_b, dim_b));
    CMatrix proj = lift * g * lift.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> es((proj + proj.adjoint()) / 2.0);
    Eval e;
    e.value = es.eigenvalues()(0);
    e.phi = es.eigenvectors().col(0);
    e.frame = frame;
    return e;
  }

  // Alternating minimization: frame -> best phi -> best A-vectors for phi.
  Eval refine(Eval cur, int iterations) const {
    for (int it = 0; it < iterations; ++it) {
      CMatrix phi_rows = coefficient_matrix(cur.phi, 2, dim_b);
      // psi = w_1 (x) r_1 + w_2 (x) r_2, linear in w = (w_1, w_2).
      CMatrix l(dim_a * dim_b, 2 * dim_a);
      for (Index k = 0; k < 2; ++k)
        for (Index i = 0; i < dim_a; ++i) {
          CVector e = CVector::Zero(dim_a);
          e(i) = 1.0;
          l.col(k * dim_a + i) = kron(e, CVector(phi_rows.row(k).transpose()));
        }
      CMatrix gram = l.adjoint() * l;
      CMatrix quad = l.adjoint() * g * l;
      Eigen::LLT<CMatrix> llt(gram);
      if (llt.info() != Eigen::Success) break;
      CMatrix linv = llt.matrixL().solve(CMatrix::Identity(gram.rows(), gram.cols()));
      CMatrix red = linv * quad * linv.adjoint();
      Eigen::SelfAdjointEigenSolver<CMatrix> es((red + red.adjoint()) / 2.0);
      CVector w = linv.adjoint() * es.eigenvectors().col(0);
      CMatrix span(dim_a, 2);
      span.col(0) = w.head(dim_a);
      span.col(1) = w.tail(dim_a);
      Eigen::HouseholderQR<CMatrix> qr(span);
      CMatrix q = qr.householderQ() * CMatrix::Identity(dim_a, 2);
      // The A-support of the lifted vector is spanned by the columns of frame^T.
      Eval next = eval(CMatrix(q.transpose()));
      if (!(next.value < cur.value - 1e-15 * std::abs(cur.value))) {
        if (next.value < cur.value) cur = next;
        break;
      }
      cur = next;
    }
    return cur;
  }
};

CMatrix coordinate_frame(Index dim_a, Index k, Index l) {
  CMatrix f = CMatrix::Zero(2, dim_a);
  f(0, k) = 1.0;
  f(1, l) = 1.0;
  return f;
}

CMatrix random_frame(Index dim_a, Rng& rng) {
  CMatrix u = random_unitary(dim_a, rng);
  return u.leftCols(2).adjoint();
}

}  // namespace

std::optional<Witness> schmidt2_witness(const BipartiteState& s, const Options& opts) {
  const Compressed c = compress(s, opts.tol);
  const double thr = opts.tol.psd_tol * state_norm(s);
  const BipartiteState& w0 = c.state;

  // Any vector of 2 (x) N or N (x) 2 has Schmidt rank at most two.
  if (std::min(w0.dim_a, w0.dim_b) <= 2) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(partial_transpose(w0));
    if (es.eigenvalues()(0) >= -thr) return std::nullopt;
    Witness w = witness_from_vector(s, c.to_compressed(), es.eigenvectors().col(0), WitnessKind::SchmidtRank2);
    if (w.value < -thr) return w;
    return std::nullopt;
  }

  Rng rng(sub_seed(opts.seed, 23));
  const int randoms = 24 * std::max(1, opts.budget);
  struct Candidate {
    FrameSearch::Eval eval;
    bool swapped;
  };
  std::vector<Candidate> cands;

  for (bool swapped : {false, true}) {
    const BipartiteState work = swapped ? swap_sides(w0) : w0;
    const CMatrix g = partial_transpose(work);
    FrameSearch fs{g, work.dim_a, work.dim_b};
    const Index m = work.dim_a;
    std::vector<CMatrix> frames;
    for (Index k = 0; k < m; ++k)
      for (Index l = k + 1; l < m; ++l) frames.push_back(coordinate_frame(m, k, l));
    {
      // Best rank-two truncation of the most negative eigenvector of rho^G.
      Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
      for (Index e = 0; e < std::min<Index>(3, g.rows()); ++e) {
        CMatrix coef = coefficient_matrix(es.eigenvectors().col(e), m, work.dim_b);
        Eigen::JacobiSVD<CMatrix> svd(coef, Eigen::ComputeThinU);
        frames.push_back(CMatrix(svd.matrixU().leftCols(2).transpose()));
      }
      Eigen::SelfAdjointEigenSolver<CMatrix> ea(reduce(work, Side::A));
      for (Index k = 0; k < m; ++k)
        for (Index l = k + 1; l < m; ++l) {
          CMatrix f(2, m);
          f.row(0) = ea.eigenvectors().col(k).adjoint();
          f.row(1) = ea.eigenvectors().col(l).adjoint();
          frames.push_back(f);
        }
    }
    for (int t = 0; t < randoms; ++t) frames.push_back(random_frame(m, rng));
    for (const auto& f : frames) cands.push_back({fs.eval(f), swapped});
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& x, const Candidate& y) { return x.eval.value < y.eval.value; });

  auto finish = [&](const Candidate& cd) -> std::optional<Witness> {
    LocalMap m = c.to_compressed();
    if (cd.swapped) m = compose(m, LocalMap{CMatrix::Identity(w0.dim_b, w0.dim_b), CMatrix::Identity(w0.dim_a, w0.dim_a), true});
    const Index rest = cd.swapped ? w0.dim_a : w0.dim_b;
    m = compose(m, LocalMap{cd.eval.frame, CMatrix::Identity(rest, rest), false});
    Witness w = witness_from_vector(s, m, cd.eval.phi, WitnessKind::SchmidtRank2);
    if (w.value < -thr) return w;
    return std::nullopt;
  };

  if (!cands.empty() && cands[0].eval.value < -thr) {
    if (auto w = finish(cands[0])) return w;
  }
  // Refine the most promising starts.
  const size_t refine_count = std::min<size_t>(cands.size(), 6 * static_cast<size_t>(std::max(1, opts.budget)));
  std::optional<Candidate> best;
  for (size_t i = 0; i < refine_count; ++i) {
    const BipartiteState work = cands[i].swapped ? swap_sides(w0) : w0;
    const CMatrix g = partial_transpose(work);
    FrameSearch fs{g, work.dim_a, work.dim_b};
    Candidate r{fs.refine(cands[i].eval, 60 * std::max(1, opts.budget)), cands[i].swapped};
    if (!best || r.eval.value < best->eval.value) best = r;
    if (best->eval.value < -thr * 100) break;
  }
  if (best && best->eval.value < -thr) return finish(*best);
  return std::nullopt;
}

WitnessCheck validate_witness(const BipartiteState& s, const Witness& w, const ToleranceConfig& tol) {
  WitnessCheck chk;
  const double thr = tol.psd_tol * state_norm(s);
  if (w.psi.size() != s.dim()) {
    chk.message = "witness vector has wrong length";
    return chk;
  }
  const CVector psi = w.psi.normalized();
  chk.value = psi.dot(partial_transpose(s) * psi).real();
  chk.schmidt_rank = rank_of(coefficient_matrix(psi, s.dim_a, s.dim_b), tol);
  if (!(chk.value < -thr)) {
    chk.message = "expectation in the partial transpose is not negative";
    return chk;
  }
  if (chk.schmidt_rank != 2) {
    chk.message = "witness vector does not have Schmidt rank two";
    return chk;
  }
  switch (w.kind) {
    case WitnessKind::TrivialSubmatrix: {
      BipartiteState t = apply_local(s, w.map);
      CMatrix g = partial_transpose(t);
      const double tt = tol.psd_tol * state_norm(t);
      if (w.row < 0 || w.col < 0 || w.row >= g.rows() || w.col >= g.rows() || w.row == w.col) {
        chk.message = "submatrix indices out of range";
        return chk;
      }
      const double a = std::abs(g(w.row, w.row)), c = std::abs(g(w.col, w.col));
      if (std::min(a, c) > tt || std::abs(g(w.row, w.col)) <= tt) {
        chk.message = "submatrix does not have the trivially distillable pattern";
        return chk;
      }
      break;
    }
    case WitnessKind::TwoByNProjection: {
      BipartiteState t = apply_local(s, w.map);
      if (t.dim_a != 2) {
        chk.message = "projection does not map A onto two dimensions";
        return chk;
      }
      if (is_ppt(t, tol).ppt) {
        chk.message = "projected state is PPT";
        return chk;
      }
      break;
    }
    case WitnessKind::ReductionViolation: {
      CMatrix red = reduce(s, w.side);
      CMatrix op = w.side == Side::A ? kron(red, CMatrix::Identity(s.dim_b, s.dim_b))
                                     : kron(CMatrix::Identity(s.dim_a, s.dim_a), red);
      op -= s.rho;
      if (w.eigenvector.size() != s.dim() ||
          !(w.eigenvector.normalized().dot(op * w.eigenvector.normalized()).real() < -thr)) {
        chk.message = "reduction criterion is not violated by the recorded eigenvector";
        return chk;
      }
      break;
    }
    case WitnessKind::SchmidtRank2: break;
  }
  chk.ok = true;
  return chk;
}

std::optional<Witness> find_witness(const BipartiteState& s, const Options& opts, std::vector<std::string>* trail) {
  auto note = [&](const std::string& t) {
    if (trail) trail->push_back(t);
  };
  if (is_ppt(s, opts.tol).ppt) return std::nullopt;
  if (auto w = trivially_distillable(s, opts.tol)) {
    note("trivially_distillable");
    return w;
  }
  ReductionResult red = reduction_criterion(s, opts.tol);
  if (auto w = schmidt2_witness(s, opts)) {
    if (red.violated) {
      note("reduction_criterion_violated");
      w->kind = WitnessKind::ReductionViolation;
      w->side = red.side;
      w->eigenvector = red.eigenvector;
      w->eigenvalue = red.eigenvalue;
    } else {
      note("schmidt2_search");
    }
    return w;
  }
  note("witness_search_exhausted");
  return std::nullopt;
}

Certificate classify_rank_le_max(const BipartiteState& s, const Options& opts) {
  const ToleranceConfig& tol = opts.tol;
  Compressed c = compress(s, tol);
  BipartiteState work = c.state;
  LocalMap to_work = c.to_compressed();
  const Index r = state_rank(work, tol);
  if (r > std::max(work.dim_a, work.dim_b)) {
    std::ostringstream os;
    os << "classify_rank_le_max: rank " << r << " exceeds both local ranks " << work.dim_a << "x" << work.dim_b;
    throw PreconditionError(os.str());
  }
  Certificate cert;
  if (work.dim_a > work.dim_b) {
    to_work = compose(to_work, LocalMap{CMatrix::Identity(work.dim_b, work.dim_b), CMatrix::Identity(work.dim_a, work.dim_a), true});
    work = swap_sides(work);
    cert.trail.push_back("swap_sides");
  }
  const Index m = work.dim_a, n = work.dim_b;
  const PptResult ppt = is_ppt(s, tol);

  auto distillable = [&](Witness w, const char* tag) {
    cert.verdict = Verdict::Distillable;
    cert.witness = std::move(w);
    cert.trail.push_back(tag);
    return cert;
  };
  auto search_or_throw = [&](const char* why) {
    cert.trail.push_back(why);
    if (auto w = find_witness(s, opts, &cert.trail)) {
      cert.verdict = Verdict::Distillable;
      cert.witness = std::move(*w);
      return cert;
    }
    throw SearchExhausted(std::string("classify_rank_le_max: no witness found after ") + why);
  };

  if (r < n) {
    if (ppt.ppt) throw SearchExhausted("classify_rank_le_max: PPT state with rank below local rank; tolerances too loose");
    return search_or_throw("rank_below_local_rank");
  }
  if (ppt.ppt) {
    cert.trail.push_back("ppt_rank_equals_local_rank");
    cert.products = separable_decomposition_rank_n(s, opts);
    cert.verdict = Verdict::Separable;
    cert.min_eig_gamma = ppt.min_eigenvalue;
    return cert;
  }
  cert.min_eig_gamma = ppt.min_eigenvalue;
  if (auto w = trivially_distillable(s, tol)) return distillable(*w, "trivially_distillable");
  if (m == 1) throw SearchExhausted("classify_rank_le_max: product-type state reported NPT");

  FullRankResult fr = full_rank_property(work, Side::B, opts);
  if (fr.status == FullRankStatus::Violated || fr.status == FullRankStatus::ShortcutViolated || fr.witness.size() == 0)
    return search_or_throw("full_rank_violated");
  cert.trail.push_back("full_rank_holds");

  // Rotate A so that the last basis vector is the full-rank direction, then
  // gauge the last block to the identity.
  const CVector xhat = fr.witness.normalized();
  CMatrix q = complete_unitary(xhat);
  CMatrix rot(m, m);
  for (Index i = 1; i < m; ++i) rot.row(i - 1) = q.col(i).adjoint();
  rot.row(m - 1) = xhat.adjoint();
  BipartiteState rotated = apply_local(work, rot, CMatrix::Identity(n, n));
  BlockForm f = block_form(rotated, tol);
  const CMatrix& last = f.blocks.back();
  Eigen::FullPivLU<CMatrix> lu(last);
  if (!lu.isInvertible()) throw SearchExhausted("classify_rank_le_max: gauge block is singular");
  const CMatrix last_inv = lu.inverse();
  std::vector<CMatrix> d;
  for (Index i = 0; i + 1 < m; ++i) d.push_back(f.blocks[static_cast<size_t>(i)] * last_inv);
  const LocalMap to_gauge = compose(to_work, LocalMap{rot, CMatrix(last_inv.adjoint()), false});
  const BipartiteState gauged = apply_local(s, to_gauge);

  // Pair projections onto span{|i>, |M>}.
  {
    double best = std::numeric_limits<double>::infinity();
    std::optional<Witness> wbest;
    for (Index i = 0; i + 1 < m; ++i) {
      CMatrix p = coordinate_frame(m, i, m - 1);
      BipartiteState proj = apply_local(gauged, p, CMatrix::Identity(n, n));
      PptResult pp = is_ppt(proj, tol);
      if (pp.ppt) continue;
      const double rel = pp.min_eigenvalue / state_norm(proj);
      if (rel < best) {
        best = rel;
        wbest = witness_from_vector(s, compose(to_gauge, LocalMap{p, CMatrix::Identity(n, n), false}), pp.eigenvector,
                                    WitnessKind::TwoByNProjection);
      }
    }
    if (wbest && wbest->value < -ppt.threshold) return distillable(*wbest, "pair_projection_npt");
  }

  // First non-commuting pair in lexicographic order.
  Index pi = -1, pj = -1;
  for (Index i = 0; i + 1 < m - 1 && pi < 0; ++i)
    for (Index j = i + 1; j < m - 1; ++j) {
      const CMatrix& a = d[static_cast<size_t>(i)];
      const CMatrix& b = d[static_cast<size_t>(j)];
      if ((a * b - b * a).norm() > tol.residual_tol * a.norm() * b.norm()) {
        pi = i;
        pj = j;
        break;
      }
    }
  if (pi < 0) return search_or_throw("blocks_commute");
  cert.trail.push_back("noncommuting_pair");

  auto sweep_map = [&](cplx x) {
    CMatrix v = CMatrix::Zero(2, m);
    v(0, pi) = std::conj(x);
    v(0, pj) = 1.0;
    v(1, m - 1) = 1.0;
    return v;
  };
  std::vector<cplx> grid;
  const cplx phases[] = {1.0, -1.0, cplx(0, 1), cplx(0, -1)};
  for (int k = 1; k <= 8; ++k)
    for (const cplx& ph : phases) {
      grid.push_back(ph * static_cast<double>(k));
      if (k > 1) grid.push_back(ph / static_cast<double>(k));
    }
  Rng rng(sub_seed(opts.seed, 37));
  const int budget = 256 * std::max(1, opts.budget);
  double best = std::numeric_limits<double>::infinity();
  cplx bestx = 0.0;
  CVector bestphi;
  for (int t = 0; t < budget; ++t) {
    if (t >= static_cast<int>(grid.size()) && best < -ppt.threshold) break;
    const cplx x = t < static_cast<int>(grid.size()) ? grid[static_cast<size_t>(t)] : 4.0 * random_disc_point(rng);
    CMatrix v = sweep_map(x);
    BipartiteState proj = apply_local(gauged, v, CMatrix::Identity(n, n));
    PptResult pp = is_ppt(proj, tol);
    const double rel = pp.min_eigenvalue / state_norm(proj);
    if (rel < best) {
      best = rel;
      bestx = x;
      bestphi = pp.eigenvector;
    }
  }
  if (best < -tol.psd_tol) {
    Witness w = witness_from_vector(s, compose(to_gauge, LocalMap{sweep_map(bestx), CMatrix::Identity(n, n), false}),
                                    bestphi, WitnessKind::TwoByNProjection);
    w.x = bestx;
    if (w.value < -ppt.threshold) return distillable(w, "projection_sweep");
  }
  throw SearchExhausted("classify_rank_le_max: projection sweep exhausted without an NPT projection");
}

Certificate certify_pure_plus_sigma(const CVector& psi, const BipartiteState& sigma, const ToleranceConfig& tol) {
  if (psi.size() != sigma.dim()) throw ValidationError("certify_pure_plus_sigma: vector length does not match dims");
  if (rank_of(coefficient_matrix(psi, sigma.dim_a, sigma.dim_b), tol) < 2)
    throw PreconditionError("certify_pure_plus_sigma: psi is a product vector");
  BipartiteState rho{sigma.dim_a, sigma.dim_b, psi * psi.adjoint() + sigma.rho};
  Compressed c = compress(rho, tol);
  const Index m = c.state.dim_a, n = c.state.dim_b;
  const CVector psi_c = kron(CMatrix(c.ua.adjoint()), CMatrix(c.ub.adjoint())) * psi;
  const BipartiteState sig_c = apply_local(sigma, c.to_compressed());
  RankInfo sa = numerical_rank(reduce(sig_c, Side::A), tol);
  if (sa.rank >= m) throw PreconditionError("certify_pure_plus_sigma: sigma_A has full local rank");

  const CMatrix coef = coefficient_matrix(psi_c, m, n);
  // Kernel direction of sigma_A carrying the largest part of psi.
  CMatrix kt = sa.kernel.adjoint() * coef;
  Eigen::JacobiSVD<CMatrix> svd(kt, Eigen::ComputeThinU);
  CVector mvec = (sa.kernel * svd.matrixU().col(0)).normalized();
  CMatrix q = complete_unitary(mvec);
  auto slice = [&](const CVector& u) -> CVector { return (u.adjoint() * coef).transpose(); };
  const CVector psi_m = slice(mvec);
  Index best_k = -1;
  double best_perp = 0.0;
  for (Index i = 1; i < m; ++i) {
    CVector pk = slice(q.col(i));
    CVector perp = pk - (psi_m.dot(pk) / psi_m.squaredNorm()) * psi_m;
    if (perp.norm() > best_perp) {
      best_perp = perp.norm();
      best_k = i;
    }
  }
  if (best_k < 0 || best_perp <= tol.residual_tol * coef.norm())
    throw SearchExhausted("certify_pure_plus_sigma: all slices of psi are parallel");
  const CVector psi_k = slice(q.col(best_k));
  CMatrix pair(n, 2);
  pair << psi_k, psi_m;
  CMatrix w = complete_unitary(pair);
  w.col(0) = psi_k;
  w.col(1) = psi_m;
  const CMatrix v = w.inverse();
  CMatrix a(2, m);
  a.row(0) = q.col(best_k).adjoint();
  a.row(1) = mvec.adjoint();
  const LocalMap map = compose(c.to_compressed(), LocalMap{a, v, false});
  const BipartiteState t = apply_local(rho, map);
  const CMatrix g = partial_transpose(t);
  double lambda = 0.0;
  CVector phi = embed_pair_eigenvector(g, 1, n, &lambda);
  Witness wit = witness_from_vector(rho, map, phi, WitnessKind::TrivialSubmatrix);
  wit.row = 1;
  wit.col = n;
  Certificate cert;
  cert.trail = {"pure_plus_sigma"};
  cert.verdict = Verdict::Distillable;
  cert.witness = wit;
  return cert;
}

}  // namespace qdistill
