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

#include "qdistill/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qdistill {

double hermiticity_defect(const CMatrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return (h - h.adjoint()).norm();
}

HermitianEigen hermitian_eigen(const CMatrix& h, const ToleranceConfig& tol) {
  if (h.rows() != h.cols()) {
    std::ostringstream os;
    os << "hermitian_eigen: matrix is " << h.rows() << "x" << h.cols() << ", not square";
    throw ValidationError(os.str());
  }
  const double defect = hermiticity_defect(h);
  if (defect > tol.residual_tol * std::max(1.0, h.norm())) {
    std::ostringstream os;
    os << "hermitian_eigen: Hermiticity defect " << defect << " exceeds tolerance";
    throw ValidationError(os.str());
  }
  CMatrix sym = (h + h.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
  return {es.eigenvalues(), es.eigenvectors()};
}

RankInfo numerical_rank(const CMatrix& m, const ToleranceConfig& tol) {
  RankInfo info;
  const Index rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) {
    info.kernel = CMatrix::Identity(cols, cols);
    info.range = CMatrix(rows, 0);
    return info;
  }
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  info.singular_values = svd.singularValues();
  const double smax = info.singular_values.size() ? info.singular_values(0) : 0.0;
  info.cutoff = tol.rank_tol_factor * smax * static_cast<double>(std::max(rows, cols)) *
                std::numeric_limits<double>::epsilon();
  Index r = 0;
  for (Index i = 0; i < info.singular_values.size(); ++i)
    if (info.singular_values(i) > info.cutoff && info.singular_values(i) > 0) ++r;
  info.rank = r;
  info.kernel = svd.matrixV().rightCols(cols - r);
  info.range = svd.matrixU().leftCols(r);
  return info;
}

Index rank_of(const CMatrix& m, const ToleranceConfig& tol) { return numerical_rank(m, tol).rank; }

Support psd_support(const CMatrix& h, const ToleranceConfig& tol) {
  auto eig = hermitian_eigen(h, tol);
  const Index n = h.rows();
  double lmax = 0.0;
  for (Index i = 0; i < n; ++i) lmax = std::max(lmax, std::abs(eig.values(i)));
  const double cutoff = tol.rank_tol_factor * lmax * static_cast<double>(n) *
                        std::numeric_limits<double>::epsilon();
  std::vector<Index> keep;
  for (Index i = n - 1; i >= 0; --i)
    if (eig.values(i) > cutoff && eig.values(i) > 0) keep.push_back(i);
  Support s;
  s.basis.resize(n, static_cast<Index>(keep.size()));
  s.values.resize(static_cast<Index>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) {
    s.basis.col(static_cast<Index>(k)) = eig.vectors.col(keep[k]);
    s.values(static_cast<Index>(k)) = eig.values(keep[k]);
  }
  return s;
}

Index psd_rank(const CMatrix& h, const ToleranceConfig& tol) { return psd_support(h, tol).basis.cols(); }

double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix complete_unitary(const CMatrix& cols) {
  const Index n = cols.rows();
  CMatrix seed(n, cols.cols() + n);
  seed << cols, CMatrix::Identity(n, n);
  // Modified Gram-Schmidt keeps the given columns first.
  CMatrix q(n, n);
  Index filled = 0;
  for (Index j = 0; j < seed.cols() && filled < n; ++j) {
    CVector v = seed.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Index k = 0; k < filled; ++k) v -= q.col(k).dot(v) * q.col(k);
    const double nv = v.norm();
    if (nv > 1e-10) q.col(filled++) = v / nv;
  }
  return q;
}

double random_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

CMatrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> d(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = cplx(d(rng), d(rng));
  return m;
}

CVector random_gaussian_vector(Index n, Rng& rng) { return random_gaussian(n, 1, rng).col(0); }

CMatrix random_unitary(Index n, Rng& rng) {
  CMatrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_invertible(Index n, Rng& rng, double max_cond) {
  CMatrix u = random_unitary(n, rng), v = random_unitary(n, rng);
  RVector s(n);
  for (Index i = 0; i < n; ++i) s(i) = std::exp(random_uniform(rng, 0.0, std::log(max_cond)));
  return u * s.cast<cplx>().asDiagonal() * v.adjoint();
}

cplx random_disc_point(Rng& rng) {
  const double r = std::sqrt(random_uniform(rng));
  const double t = random_uniform(rng, 0.0, 2.0 * M_PI);
  return std::polar(r, t);
}

CMatrix psd_sqrt(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
  RVector s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix psd_inv_sqrt(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) / 2.0);
  RVector s = es.eigenvalues();
  if (s.size() && s(0) <= 0) throw PreconditionError("psd_inv_sqrt: matrix is not positive definite");
  s = s.cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix psd_pinv(const CMatrix& h, const ToleranceConfig& tol) {
  Support s = psd_support(h, tol);
  return s.basis * s.values.cwiseInverse().cast<cplx>().asDiagonal() * s.basis.adjoint();
}

}  // namespace qdistill
