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

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qdistill {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Side { A, B };

inline Side other(Side s) { return s == Side::A ? Side::B : Side::A; }

// All thresholds are relative to a scale chosen by the caller
// (operator norm of the state, norm of a basis, ...).
struct ToleranceConfig {
  double rank_tol_factor = 100.0;
  double psd_tol = 1e-10;
  double residual_tol = 1e-9;
};

// Searches draw from this engine only; a fixed seed gives a fixed run.
using Rng = std::mt19937_64;

// Shared knobs for every randomized routine. `budget` scales the default
// number of samples and restarts.
struct Options {
  ToleranceConfig tol;
  std::uint64_t seed = 20261019;
  int budget = 1;
};

// Derived seed for a named sub-search, so that sub-searches stay
// independent of each other's consumption of random numbers.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a stated invariant (not Hermitian, not PSD, bad dims).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Input is valid but outside the domain of the requested routine.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A search that is guaranteed to succeed in exact arithmetic ran out of
// budget. Signals a tolerance or conditioning problem, never a verdict.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace qdistill
