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

#include "qdistill/state.hpp"

#include <cmath>
#include <sstream>

namespace qdistill {

BipartiteState make_state(const CMatrix& rho, Index dim_a, Index dim_b, const ToleranceConfig& tol) {
  if (dim_a <= 0 || dim_b <= 0) throw ValidationError("make_state: local dimensions must be positive");
  if (rho.rows() != dim_a * dim_b || rho.cols() != dim_a * dim_b) {
    std::ostringstream os;
    os << "make_state: matrix is " << rho.rows() << "x" << rho.cols() << " but dims " << dim_a << "x" << dim_b
       << " require " << dim_a * dim_b;
    throw ValidationError(os.str());
  }
  auto eig = hermitian_eigen(rho, tol);
  const double top = eig.values.cwiseAbs().maxCoeff();
  if (top == 0.0) throw ValidationError("make_state: zero operator");
  if (eig.values(0) < -tol.psd_tol * top) {
    std::ostringstream os;
    os << "make_state: not positive semidefinite, min eigenvalue " << eig.values(0);
    throw ValidationError(os.str());
  }
  return {dim_a, dim_b, (rho + rho.adjoint()) / 2.0};
}

BipartiteState pure_state(const CVector& psi, Index dim_a, Index dim_b) {
  if (psi.size() != dim_a * dim_b) throw ValidationError("pure_state: vector length does not match dims");
  if (psi.norm() == 0.0) throw ValidationError("pure_state: zero vector");
  return {dim_a, dim_b, psi * psi.adjoint()};
}

double state_norm(const BipartiteState& s) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s.rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

CMatrix partial_transpose(const CMatrix& rho, Index dim_a, Index dim_b) {
  CMatrix out(rho.rows(), rho.cols());
  for (Index i = 0; i < dim_a; ++i)
    for (Index j = 0; j < dim_a; ++j)
      out.block(i * dim_b, j * dim_b, dim_b, dim_b) = rho.block(j * dim_b, i * dim_b, dim_b, dim_b);
  return out;
}

CMatrix partial_transpose(const BipartiteState& s) { return partial_transpose(s.rho, s.dim_a, s.dim_b); }

CMatrix reduce(const BipartiteState& s, Side keep) {
  if (keep == Side::A) {
    CMatrix out(s.dim_a, s.dim_a);
    for (Index i = 0; i < s.dim_a; ++i)
      for (Index j = 0; j < s.dim_a; ++j) out(i, j) = s.block(i, j).trace();
    return out;
  }
  CMatrix out = CMatrix::Zero(s.dim_b, s.dim_b);
  for (Index i = 0; i < s.dim_a; ++i) out += s.block(i, i);
  return out;
}

CMatrix sector(const BipartiteState& s, const CVector& x, Side side) {
  if (side == Side::A) {
    if (x.size() != s.dim_a) throw ValidationError("sector: vector length must equal dim_a");
    CMatrix out = CMatrix::Zero(s.dim_b, s.dim_b);
    for (Index i = 0; i < s.dim_a; ++i)
      for (Index k = 0; k < s.dim_a; ++k) {
        const cplx w = std::conj(x(i)) * x(k);
        if (w != 0.0) out += w * s.block(i, k);
      }
    return out;
  }
  if (x.size() != s.dim_b) throw ValidationError("sector: vector length must equal dim_b");
  CMatrix out(s.dim_a, s.dim_a);
  for (Index i = 0; i < s.dim_a; ++i)
    for (Index k = 0; k < s.dim_a; ++k) out(i, k) = x.dot(s.block(i, k) * x);
  return out;
}

CMatrix BlockForm::stacked() const {
  CMatrix out(rank, dim_a * dim_b);
  for (Index i = 0; i < dim_a; ++i) out.middleCols(i * dim_b, dim_b) = blocks[static_cast<size_t>(i)];
  return out;
}

CMatrix BlockForm::to_matrix() const {
  CMatrix c = stacked();
  return c.adjoint() * c;
}

CMatrix BlockForm::combination(const CVector& xi) const {
  CMatrix out = CMatrix::Zero(rank, dim_b);
  for (Index i = 0; i < dim_a; ++i) out += xi(i) * blocks[static_cast<size_t>(i)];
  return out;
}

BlockForm block_form_from_vectors(const std::vector<CVector>& psis, Index dim_a, Index dim_b) {
  BlockForm f{dim_a, dim_b, static_cast<Index>(psis.size()), {}};
  for (Index j = 0; j < dim_a; ++j) {
    CMatrix c(f.rank, dim_b);
    for (Index r = 0; r < f.rank; ++r) c.row(r) = psis[static_cast<size_t>(r)].segment(j * dim_b, dim_b).conjugate().transpose();
    f.blocks.push_back(c);
  }
  return f;
}

BlockForm block_form(const BipartiteState& s, const ToleranceConfig& tol) {
  Support sup = psd_support(s.rho, tol);
  std::vector<CVector> psis;
  for (Index r = 0; r < sup.basis.cols(); ++r) psis.push_back(std::sqrt(sup.values(r)) * sup.basis.col(r));
  return block_form_from_vectors(psis, s.dim_a, s.dim_b);
}

LocalMap LocalMap::identity(Index dim_a, Index dim_b) {
  return {CMatrix::Identity(dim_a, dim_a), CMatrix::Identity(dim_b, dim_b), false};
}

LocalMap compose(const LocalMap& first, const LocalMap& second) {
  if (!second.swap) return {second.a * first.a, second.b * first.b, first.swap};
  return {second.a * first.b, second.b * first.a, !first.swap};
}

BipartiteState swap_sides(const BipartiteState& s) {
  const Index m = s.dim_a, n = s.dim_b;
  BipartiteState out{n, m, CMatrix(s.rho.rows(), s.rho.cols())};
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < m; ++k)
        for (Index l = 0; l < n; ++l) out.rho(j * m + i, l * m + k) = s.rho(i * n + j, k * n + l);
  return out;
}

CVector swap_vector(const CVector& psi, Index dim_a, Index dim_b) {
  CVector out(psi.size());
  for (Index i = 0; i < dim_a; ++i)
    for (Index j = 0; j < dim_b; ++j) out(j * dim_a + i) = psi(i * dim_b + j);
  return out;
}

BipartiteState apply_local(const BipartiteState& s, const LocalMap& m) {
  const BipartiteState src = m.swap ? swap_sides(s) : s;
  if (m.a.cols() != src.dim_a || m.b.cols() != src.dim_b) throw ValidationError("apply_local: operator dims do not match state");
  CMatrix k = kron(m.a, m.b);
  BipartiteState out{m.a.rows(), m.b.rows(), k * src.rho * k.adjoint()};
  out.rho = (out.rho + out.rho.adjoint()) / 2.0;
  if (out.rho.norm() <= 1e-14 * s.rho.norm() * std::max(1.0, k.norm() * k.norm()))
    throw PreconditionError("apply_local: image of the state is zero");
  return out;
}

BipartiteState apply_local(const BipartiteState& s, const CMatrix& a, const CMatrix& b) {
  return apply_local(s, LocalMap{a, b, false});
}

CVector lift_vector(const LocalMap& m, const CVector& phi) {
  CVector chi = kron(CMatrix(m.a.transpose()), CMatrix(m.b.adjoint())) * phi;
  if (!m.swap) return chi;
  // chi lives on the swapped space of dims (b.cols, a.cols) seen from the input.
  return swap_vector(chi, m.a.cols(), m.b.cols()).conjugate();
}

LocalRanks local_ranks(const BipartiteState& s, const ToleranceConfig& tol) {
  return {psd_rank(reduce(s, Side::A), tol), psd_rank(reduce(s, Side::B), tol)};
}

Index state_rank(const BipartiteState& s, const ToleranceConfig& tol) { return psd_rank(s.rho, tol); }

Compressed compress(const BipartiteState& s, const ToleranceConfig& tol) {
  Compressed c;
  c.ua = psd_support(reduce(s, Side::A), tol).basis;
  c.ub = psd_support(reduce(s, Side::B), tol).basis;
  c.state = apply_local(s, c.to_compressed());
  return c;
}

CMatrix coefficient_matrix(const CVector& psi, Index dim_a, Index dim_b) {
  if (psi.size() != dim_a * dim_b) throw ValidationError("coefficient_matrix: vector length does not match dims");
  CMatrix m(dim_a, dim_b);
  for (Index i = 0; i < dim_a; ++i)
    for (Index j = 0; j < dim_b; ++j) m(i, j) = psi(i * dim_b + j);
  return m;
}

Schmidt schmidt(const CVector& psi, Index dim_a, Index dim_b, const ToleranceConfig& tol) {
  CMatrix m = coefficient_matrix(psi, dim_a, dim_b);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Index r = numerical_rank(m, tol).rank;
  Schmidt out;
  out.coefficients = svd.singularValues().head(r);
  out.a_vectors = svd.matrixU().leftCols(r);
  out.b_vectors = svd.matrixV().leftCols(r).conjugate();
  return out;
}

BipartiteState tensor(const BipartiteState& s1, const BipartiteState& s2) {
  const Index a1 = s1.dim_a, b1 = s1.dim_b, a2 = s2.dim_a, b2 = s2.dim_b;
  CMatrix raw = kron(s1.rho, s2.rho);  // order A1 B1 A2 B2
  auto src = [&](Index x1, Index y1, Index x2, Index y2) { return ((x1 * b1 + y1) * a2 + x2) * b2 + y2; };
  auto dst = [&](Index x1, Index y1, Index x2, Index y2) { return ((x1 * a2 + x2) * b1 + y1) * b2 + y2; };
  const Index n = raw.rows();
  std::vector<Index> perm(static_cast<size_t>(n));
  for (Index x1 = 0; x1 < a1; ++x1)
    for (Index y1 = 0; y1 < b1; ++y1)
      for (Index x2 = 0; x2 < a2; ++x2)
        for (Index y2 = 0; y2 < b2; ++y2) perm[static_cast<size_t>(src(x1, y1, x2, y2))] = dst(x1, y1, x2, y2);
  CMatrix out(n, n);
  for (Index p = 0; p < n; ++p)
    for (Index q = 0; q < n; ++q) out(perm[static_cast<size_t>(p)], perm[static_cast<size_t>(q)]) = raw(p, q);
  return {a1 * a2, b1 * b2, out};
}

double von_neumann_entropy(const CMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((rho + rho.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().sum();
  if (!(tr > 0)) throw ValidationError("von_neumann_entropy: operator has non-positive trace");
  double h = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i) / tr;
    if (p > 1e-300) h -= p * std::log2(p);
  }
  return h;
}

}  // namespace qdistill
