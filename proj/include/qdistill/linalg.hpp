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

#include "qdistill/types.hpp"

namespace qdistill {

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns, orthonormal
};

// Rejects inputs whose anti-Hermitian part exceeds residual_tol relative to
// the Frobenius norm; decomposes the symmetrized matrix.
HermitianEigen hermitian_eigen(const CMatrix& h, const ToleranceConfig& tol = {});

double hermiticity_defect(const CMatrix& h);

struct RankInfo {
  Index rank = 0;
  double cutoff = 0.0;
  RVector singular_values;
  CMatrix kernel;  // orthonormal columns spanning the numerical null space
  CMatrix range;   // orthonormal columns spanning the numerical column space
};

// Cutoff is rank_tol_factor * sigma_max * max(rows, cols) * eps.
RankInfo numerical_rank(const CMatrix& m, const ToleranceConfig& tol = {});
Index rank_of(const CMatrix& m, const ToleranceConfig& tol = {});

// Rank of a PSD matrix from its spectrum, same cutoff rule as numerical_rank.
Index psd_rank(const CMatrix& h, const ToleranceConfig& tol = {});

// Orthonormal basis of the support of a PSD matrix together with the
// positive eigenvalues on it.
struct Support {
  CMatrix basis;
  RVector values;
};
Support psd_support(const CMatrix& h, const ToleranceConfig& tol = {});

double operator_norm(const CMatrix& m);
double min_eigenvalue(const CMatrix& h);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

// Unitary whose first columns are the orthonormalized columns of `cols`.
CMatrix complete_unitary(const CMatrix& cols);

// Standard complex Gaussian entries (real and imaginary parts N(0, 1/2)).
CMatrix random_gaussian(Index rows, Index cols, Rng& rng);
CVector random_gaussian_vector(Index n, Rng& rng);
CMatrix random_unitary(Index n, Rng& rng);
// Invertible with condition number bounded by `max_cond`.
CMatrix random_invertible(Index n, Rng& rng, double max_cond = 20.0);
// Point drawn uniformly from the unit disc.
cplx random_disc_point(Rng& rng);
double random_uniform(Rng& rng, double lo = 0.0, double hi = 1.0);

// Principal square root and inverse square root of a positive definite matrix.
CMatrix psd_sqrt(const CMatrix& h);
CMatrix psd_inv_sqrt(const CMatrix& h);

// Pseudo-inverse of a PSD matrix restricted to its numerical support.
CMatrix psd_pinv(const CMatrix& h, const ToleranceConfig& tol = {});

}  // namespace qdistill
