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

#include "qdistill/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qdistill {

namespace {

std::vector<ProductTerm> lift_products(const std::vector<ProductTerm>& terms, const CMatrix& ua, const CMatrix& ub,
                                       bool swapped) {
  std::vector<ProductTerm> out;
  for (const auto& t : terms) {
    const CVector& a = swapped ? t.b : t.a;
    const CVector& b = swapped ? t.a : t.b;
    out.push_back({ua * a, ub * b});
  }
  return out;
}

// Unitary U with U^dag D_i U diagonal for a family of commuting normal
// matrices; nullopt when a random combination fails to separate them.
std::optional<CMatrix> joint_diagonalizer(const std::vector<CMatrix>& d, Rng& rng, double tol) {
  const Index n = d.empty() ? 0 : d[0].rows();
  for (int attempt = 0; attempt < 2; ++attempt) {
    CMatrix h = CMatrix::Zero(n, n);
    for (const auto& di : d) h += random_uniform(rng, -1.0, 1.0) * di;
    Eigen::ComplexSchur<CMatrix> schur(h);
    const CMatrix u = schur.matrixU();
    bool ok = true;
    for (const auto& di : d) {
      CMatrix t = u.adjoint() * di * u;
      const double off = (t - CMatrix(t.diagonal().asDiagonal())).norm();
      if (off > tol * std::max(1.0, di.norm())) {
        ok = false;
        break;
      }
    }
    if (ok) return u;
  }
  return std::nullopt;
}

}  // namespace

std::vector<ProductTerm> separable_decomposition_rank_n(const BipartiteState& s, const Options& opts) {
  const ToleranceConfig& tol = opts.tol;
  Compressed c = compress(s, tol);
  BipartiteState work = c.state;
  const bool swapped = work.dim_a > work.dim_b;
  if (swapped) work = swap_sides(work);
  const Index m = work.dim_a, n = work.dim_b;
  const Index r = state_rank(work, tol);
  if (r != n) {
    std::ostringstream os;
    os << "separable_decomposition_rank_n: rank " << r << " differs from local rank " << n;
    throw PreconditionError(os.str());
  }
  std::vector<ProductTerm> terms;
  if (m == 1) {
    auto eig = hermitian_eigen(work.block(0, 0), tol);
    for (Index k = n - 1; k >= 0; --k) {
      if (eig.values(k) <= 0) continue;
      terms.push_back({CVector::Ones(1), std::sqrt(eig.values(k)) * eig.vectors.col(k)});
    }
  } else {
    FullRankResult fr = full_rank_property(work, Side::B, opts);
    if (fr.witness.size() == 0) throw SearchExhausted("separable_decomposition_rank_n: no full-rank direction found");
    const CVector xhat = fr.witness.normalized();
    CMatrix q = complete_unitary(xhat);
    CMatrix rot(m, m);
    for (Index i = 1; i < m; ++i) rot.row(i - 1) = q.col(i).adjoint();
    rot.row(m - 1) = xhat.adjoint();
    BlockForm f = block_form(apply_local(work, rot, CMatrix::Identity(n, n)), tol);
    const CMatrix last = f.blocks.back();
    Eigen::FullPivLU<CMatrix> lu(last);
    if (!lu.isInvertible()) throw SearchExhausted("separable_decomposition_rank_n: gauge block is singular");
    const CMatrix last_inv = lu.inverse();
    std::vector<CMatrix> d;
    for (Index i = 0; i + 1 < m; ++i) d.push_back(f.blocks[static_cast<size_t>(i)] * last_inv);
    Rng rng(sub_seed(opts.seed, 53));
    auto u = joint_diagonalizer(d, rng, 1e-6);
    if (!u) throw SearchExhausted("separable_decomposition_rank_n: blocks are not jointly diagonalizable");
    const CMatrix rot_inv = rot.adjoint();
    const CMatrix b_inv = last.adjoint();
    for (Index k = 0; k < n; ++k) {
      CVector a(m);
      for (Index i = 0; i + 1 < m; ++i) a(i) = std::conj(u->col(k).dot(d[static_cast<size_t>(i)] * u->col(k)));
      a(m - 1) = 1.0;
      terms.push_back({rot_inv * a, b_inv * u->col(k)});
    }
  }
  auto out = lift_products(terms, c.ua, c.ub, swapped);
  const double res = reconstruction_residual(s, out);
  if (!(res <= tol.residual_tol * 10.0)) {
    std::ostringstream os;
    os << "separable_decomposition_rank_n: reconstruction residual " << res;
    throw SearchExhausted(os.str());
  }
  return out;
}

namespace {

struct ConstrainedSystem {
  CMatrix k1;  // kernel of rho, columns
  CMatrix k2;  // kernel of rho^G, columns
  Index m, n;

  CVector residual(const CVector& e, const CVector& f) const {
    CVector r(k1.cols() + k2.cols());
    r << k1.adjoint() * kron(e, f), k2.adjoint() * kron(CVector(e.conjugate()), f);
    return r;
  }
};

ConstrainedProduct lm_constrained(const ConstrainedSystem& sys, Index pa, Index pb, CVector e, CVector f, double tol) {
  const Index m = sys.m, n = sys.n;
  e(pa) = 1.0;
  f(pb) = 1.0;
  std::vector<Index> fe, ff;
  for (Index i = 0; i < m; ++i)
    if (i != pa) fe.push_back(i);
  for (Index j = 0; j < n; ++j)
    if (j != pb) ff.push_back(j);
  const Index nparam = 2 * static_cast<Index>(fe.size() + ff.size());
  const Index m1 = sys.k1.cols(), m2 = sys.k2.cols(), mres = m1 + m2;

  auto unpack = [&](const Eigen::VectorXd& th, CVector& ee, CVector& ffv) {
    Index p = 0;
    for (Index i : fe) ee(i) += cplx(th(p), th(p + static_cast<Index>(fe.size()))), ++p;
    p = 2 * static_cast<Index>(fe.size());
    for (Index j : ff) ffv(j) += cplx(th(p), th(p + static_cast<Index>(ff.size()))), ++p;
  };
  auto real_res = [&](const CVector& ee, const CVector& ffv) {
    CVector r = sys.residual(ee, ffv);
    Eigen::VectorXd out(2 * mres);
    out << r.real(), r.imag();
    return out;
  };
  auto jacobian = [&](const CVector& ee, const CVector& ffv) {
    Eigen::MatrixXd j(2 * mres, nparam);
    const CVector ebar = ee.conjugate();
    auto put = [&](Index col, const CVector& dr) {
      j.col(col) << dr.real(), dr.imag();
    };
    const Index ne = static_cast<Index>(fe.size()), nf = static_cast<Index>(ff.size());
    for (Index t = 0; t < ne; ++t) {
      CVector delta = CVector::Zero(m);
      delta(fe[static_cast<size_t>(t)]) = 1.0;
      CVector hol(mres), anti(mres);
      hol << sys.k1.adjoint() * kron(delta, ffv), CVector::Zero(m2);
      anti << CVector::Zero(m1), sys.k2.adjoint() * kron(delta, ffv);
      put(t, hol + anti);
      put(ne + t, cplx(0, 1) * hol - cplx(0, 1) * anti);
    }
    for (Index t = 0; t < nf; ++t) {
      CVector delta = CVector::Zero(n);
      delta(ff[static_cast<size_t>(t)]) = 1.0;
      CVector dr(mres);
      dr << sys.k1.adjoint() * kron(ee, delta), sys.k2.adjoint() * kron(ebar, delta);
      put(2 * ne + t, dr);
      put(2 * ne + nf + t, cplx(0, 1) * dr);
    }
    return j;
  };

  Eigen::VectorXd r = real_res(e, f);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  for (int it = 0; it < 200 && nparam > 0 && mres > 0; ++it) {
    Eigen::MatrixXd j = jacobian(e, f);
    Eigen::MatrixXd jtj = j.transpose() * j;
    Eigen::VectorXd g = j.transpose() * r;
    const double diag = std::max(jtj.diagonal().maxCoeff(), 1e-300);
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += mu * diag;
      Eigen::VectorXd step = -lhs.ldlt().solve(g);
      CVector et = e, ft = f;
      unpack(step, et, ft);
      Eigen::VectorXd rt = real_res(et, ft);
      const double ct = rt.squaredNorm();
      if (ct < cost) {
        e = et;
        f = ft;
        r = rt;
        cost = ct;
        mu = std::max(mu / 3.0, 1e-12);
        improved = true;
        break;
      }
      mu *= 4.0;
    }
    const double scale = e.squaredNorm() * f.squaredNorm();
    if (!improved || cost <= 1e-30 * scale) break;
  }
  ConstrainedProduct out;
  out.a = e;
  out.b = f;
  out.residual = std::sqrt(cost) / (e.norm() * f.norm());
  out.found = out.residual <= tol;
  return out;
}

}  // namespace

ConstrainedProduct find_constrained_product(const BipartiteState& s, const Options& opts) {
  ConstrainedSystem sys;
  sys.m = s.dim_a;
  sys.n = s.dim_b;
  sys.k1 = numerical_rank(s.rho, opts.tol).kernel;
  sys.k2 = numerical_rank(partial_transpose(s), opts.tol).kernel;
  Rng rng(sub_seed(opts.seed, 71));
  const int restarts = 40 * std::max(1, opts.budget);
  ConstrainedProduct best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < restarts; ++rep) {
    for (Index pa = 0; pa < sys.m; ++pa)
      for (Index pb = 0; pb < sys.n; ++pb) {
        CVector e = random_gaussian_vector(sys.m, rng);
        CVector f = random_gaussian_vector(sys.n, rng);
        ConstrainedProduct p = lm_constrained(sys, pa, pb, e, f, opts.tol.residual_tol);
        if (p.found) return p;
        if (p.residual < best.residual) best = p;
      }
  }
  best.found = false;
  return best;
}

std::vector<ProductTerm> separable_decomposition(const BipartiteState& s, const Options& opts) {
  const ToleranceConfig& tol = opts.tol;
  std::vector<ProductTerm> terms;
  BipartiteState cur = s;
  const double scale = state_norm(s);
  for (int step = 0; step < 4 * static_cast<int>(s.dim()) + 8; ++step) {
    if (state_norm(cur) <= tol.residual_tol * scale) break;
    Compressed c = compress(cur, tol);
    const Index r = state_rank(c.state, tol);
    const Index big = std::max(c.state.dim_a, c.state.dim_b);
    if (r <= big) {
      if (r < big) throw SearchExhausted("separable_decomposition: remainder has rank below its local rank");
      auto rest = separable_decomposition_rank_n(cur, opts);
      terms.insert(terms.end(), rest.begin(), rest.end());
      cur.rho.setZero();
      break;
    }
    Options sub = opts;
    sub.seed = sub_seed(opts.seed, 100 + static_cast<std::uint64_t>(step));
    ConstrainedProduct p = find_constrained_product(c.state, sub);
    if (!p.found) throw SearchExhausted("separable_decomposition: no admissible product vector in the range");
    const CVector a = p.a.normalized(), b = p.b.normalized();
    const CVector v = kron(a, b), vg = kron(CVector(a.conjugate()), b);
    const double q1 = v.dot(psd_pinv(c.state.rho, tol) * v).real();
    const double q2 = vg.dot(psd_pinv(partial_transpose(c.state), tol) * vg).real();
    const double lambda = 1.0 / std::max(q1, q2);
    c.state.rho -= lambda * v * v.adjoint();
    c.state.rho = (c.state.rho + c.state.rho.adjoint()) / 2.0;
    terms.push_back({c.ua * (std::sqrt(lambda) * a), c.ub * b});
    cur.rho = kron(c.ua, c.ub) * c.state.rho * kron(c.ua, c.ub).adjoint();
  }
  if (state_norm(cur) > tol.residual_tol * scale) throw SearchExhausted("separable_decomposition: step budget exhausted");
  const double res = reconstruction_residual(s, terms);
  if (!(res <= tol.residual_tol * 10.0)) {
    std::ostringstream os;
    os << "separable_decomposition: reconstruction residual " << res;
    throw SearchExhausted(os.str());
  }
  return terms;
}

}  // namespace qdistill
