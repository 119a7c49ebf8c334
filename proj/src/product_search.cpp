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

#include "qdistill/product_search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"

namespace qdistill {

// Generated at configure time from data/hypersurface_2x4.json.
extern const char* const kQuartic2x4Json;

namespace {

constexpr std::uint64_t kQuarticChecksum = 0xa1bbfb231732b5cdULL;

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void combinations(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> c(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<size_t>(i)] = i;
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++c[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
  }
}

// Index of an increasing 0-based tuple in lexicographic order.
size_t tuple_rank(const std::vector<int>& t, int n) {
  auto binom = [](int a, int b) -> size_t {
    if (b < 0 || a < b) return 0;
    size_t r = 1;
    for (int i = 1; i <= b; ++i) r = r * static_cast<size_t>(a - b + i) / static_cast<size_t>(i);
    return r;
  };
  const int k = static_cast<int>(t.size());
  size_t rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < t[static_cast<size_t>(i)]; ++v) rank += binom(n - v - 1, k - i - 1);
    prev = t[static_cast<size_t>(i)];
  }
  return rank;
}

}  // namespace

Subspace make_subspace(const CMatrix& rows, Index dim_a, Index dim_b, const ToleranceConfig& tol) {
  if (rows.cols() != dim_a * dim_b) throw ValidationError("make_subspace: basis vectors do not match dims");
  if (rows.rows() == 0) throw ValidationError("make_subspace: empty basis");
  if (rank_of(rows, tol) != rows.rows()) throw ValidationError("make_subspace: basis vectors are linearly dependent");
  return {dim_a, dim_b, rows};
}

Subspace range_subspace(const BipartiteState& s, const ToleranceConfig& tol) {
  Support sup = psd_support(s.rho, tol);
  return {s.dim_a, s.dim_b, sup.basis.transpose()};
}

cplx Pluecker::at(std::initializer_list<int> one_based) const {
  std::vector<int> t;
  for (int v : one_based) t.push_back(v - 1);
  if (static_cast<Index>(t.size()) != k) throw ValidationError("Pluecker::at: wrong number of indices");
  return values[tuple_rank(t, static_cast<int>(n))];
}

double Pluecker::norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s);
}

Pluecker pluecker_coords(const Subspace& v) {
  Pluecker p;
  p.n = v.basis.cols();
  p.k = v.basis.rows();
  if (p.k > p.n) throw PreconditionError("pluecker_coords: more basis vectors than ambient dimension");
  combinations(static_cast<int>(p.n), static_cast<int>(p.k), p.tuples);
  p.values.reserve(p.tuples.size());
  CMatrix sub(p.k, p.k);
  for (const auto& t : p.tuples) {
    for (Index j = 0; j < p.k; ++j) sub.col(j) = v.basis.col(t[static_cast<size_t>(j)]);
    p.values.push_back(sub.determinant());
  }
  return p;
}

cplx cubic_2x3(const Pluecker& p) {
  auto q = [&](int i, int j) { return p.at({i, j}); };
  return 2.0 * q(1, 2) * q(3, 4) * q(5, 6) + q(1, 2) * q(2, 6) * q(4, 6) + q(1, 3) * q(1, 5) * q(5, 6) +
         q(2, 3) * q(2, 4) * q(4, 6) + q(1, 3) * q(3, 5) * q(4, 5) - q(1, 3) * q(2, 5) * q(4, 6) -
         q(1, 3) * q(2, 4) * q(5, 6) - q(1, 2) * q(3, 5) * q(4, 6) - q(1, 2) * q(1, 6) * q(5, 6) -
         q(2, 3) * q(3, 4) * q(4, 5);
}

HypersurfaceValue hypersurface_2x3(const Subspace& v) {
  if (v.dim_a != 2 || v.dim_b != 3 || v.k() != 2)
    throw PreconditionError("hypersurface_2x3: needs a 2-dimensional subspace of 2x3");
  Pluecker p = pluecker_coords(v);
  const cplx val = cubic_2x3(p);
  const double scale = std::pow(p.norm(), 3);
  return {val, scale, std::abs(val) / scale};
}

std::uint64_t quartic_table_checksum(const QuarticTable& t) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& m : t.monomials) {
    std::ostringstream os;
    os << m.coefficient << ':';
    for (size_t f = 0; f < 4; ++f) {
      if (f) os << ';';
      os << m.indices[f][0] << ',' << m.indices[f][1] << ',' << m.indices[f][2];
    }
    os << '|';
    h = fnv1a(os.str(), h);
  }
  return h;
}

const QuarticTable& quartic_2x4_table() {
  static const QuarticTable table = [] {
    QuarticTable t;
    auto j = nlohmann::json::parse(kQuartic2x4Json);
    t.degree = j.at("degree").get<int>();
    t.dim_a = j.at("shape").at("dim_a").get<int>();
    t.dim_b = j.at("shape").at("dim_b").get<int>();
    t.k = j.at("shape").at("k").get<int>();
    for (const auto& m : j.at("monomials")) {
      QuarticMonomial q{};
      q.coefficient = m.at("coefficient").get<int>();
      const auto& idx = m.at("indices");
      if (idx.size() != 4) throw Error("quartic table: monomial without four factors");
      for (size_t f = 0; f < 4; ++f)
        for (size_t c = 0; c < 3; ++c) q.indices[f][c] = idx[f][c].get<int>();
      t.monomials.push_back(q);
    }
    t.checksum = quartic_table_checksum(t);
    if (t.checksum != kQuarticChecksum) throw Error("quartic table: checksum mismatch");
    return t;
  }();
  return table;
}

cplx quartic_2x4(const Pluecker& p) {
  const auto& t = quartic_2x4_table();
  cplx total = 0.0;
  for (const auto& m : t.monomials) {
    cplx term = static_cast<double>(m.coefficient);
    for (const auto& f : m.indices) term *= p.at({f[0], f[1], f[2]});
    total += term;
  }
  return total;
}

HypersurfaceValue hypersurface_2x4(const Subspace& v) {
  if (v.dim_a != 2 || v.dim_b != 4 || v.k() != 3)
    throw PreconditionError("hypersurface_2x4: needs a 3-dimensional subspace of 2x4");
  Pluecker p = pluecker_coords(v);
  const cplx val = quartic_2x4(p);
  const double scale = std::pow(p.norm(), quartic_2x4_table().degree);
  return {val, scale, std::abs(val) / scale};
}

namespace {

struct MinorSystem {
  const std::vector<CMatrix>& mats;
  Index rows, cols;
  std::vector<std::array<Index, 4>> pairs;  // (a, b, c, d): rows a<b, cols c<d

  explicit MinorSystem(const std::vector<CMatrix>& m) : mats(m), rows(m[0].rows()), cols(m[0].cols()) {
    for (Index a = 0; a < rows; ++a)
      for (Index b = a + 1; b < rows; ++b)
        for (Index c = 0; c < cols; ++c)
          for (Index d = c + 1; d < cols; ++d) pairs.push_back({a, b, c, d});
  }

  CMatrix element(const CVector& z) const {
    CMatrix e = CMatrix::Zero(rows, cols);
    for (size_t i = 0; i < mats.size(); ++i) e += z(static_cast<Index>(i)) * mats[i];
    return e;
  }

  // Residual and Jacobian with respect to the free coefficients.
  void evaluate(const CVector& z, const std::vector<Index>& free, CVector& r, CMatrix& jac) const {
    CMatrix e = element(z);
    const Index m = static_cast<Index>(pairs.size());
    r.resize(m);
    jac.resize(m, static_cast<Index>(free.size()));
    for (Index p = 0; p < m; ++p) {
      const auto [a, b, c, d] = pairs[static_cast<size_t>(p)];
      r(p) = e(a, c) * e(b, d) - e(a, d) * e(b, c);
      for (size_t f = 0; f < free.size(); ++f) {
        const CMatrix& g = mats[static_cast<size_t>(free[f])];
        jac(p, static_cast<Index>(f)) = g(a, c) * e(b, d) + e(a, c) * g(b, d) - g(a, d) * e(b, c) - e(a, d) * g(b, c);
      }
    }
  }
};

// Relative distance of e to the rank-one matrices, plus the best factors.
double rank_one_defect(const CMatrix& e, CVector& a, CVector& b) {
  Eigen::JacobiSVD<CMatrix> svd(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return std::numeric_limits<double>::infinity();
  a = s(0) * svd.matrixU().col(0);
  b = svd.matrixV().col(0).conjugate();
  const double tail = std::sqrt(std::max(0.0, s.squaredNorm() - s(0) * s(0)));
  return tail / s(0);
}

struct Attempt {
  bool ok = false;
  CVector z;
  CVector a, b;
  double residual = std::numeric_limits<double>::infinity();
};

Attempt levenberg_marquardt(const MinorSystem& sys, Index pinned, CVector z, const SearchOptions& opts) {
  const Index k = static_cast<Index>(sys.mats.size());
  std::vector<Index> free;
  for (Index i = 0; i < k; ++i)
    if (i != pinned) free.push_back(i);
  z(pinned) = 1.0;
  CVector r;
  CMatrix jac;
  sys.evaluate(z, free, r, jac);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  Attempt out;
  for (int it = 0; it < opts.max_iterations && !free.empty(); ++it) {
    CMatrix jtj = jac.adjoint() * jac;
    CVector g = jac.adjoint() * r;
    const double diag = std::max(jtj.diagonal().real().maxCoeff(), 1e-300);
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      CMatrix lhs = jtj;
      lhs.diagonal().array() += mu * diag;
      CVector step = -lhs.ldlt().solve(g);
      CVector trial = z;
      for (size_t f = 0; f < free.size(); ++f) trial(free[f]) += step(static_cast<Index>(f));
      CVector rt;
      CMatrix jt;
      sys.evaluate(trial, free, rt, jt);
      const double ct = rt.squaredNorm();
      if (ct < cost) {
        const double gain = cost - ct;
        z = trial;
        r = rt;
        jac = jt;
        cost = ct;
        mu = std::max(mu / 3.0, 1e-12);
        improved = true;
        if (gain <= 1e-30 * std::max(1.0, cost)) tries = 100;
        break;
      }
      mu *= 4.0;
    }
    const double scale = sys.element(z).squaredNorm();
    if (cost <= 1e-30 * scale * scale || !improved) break;
  }
  out.z = z;
  out.residual = rank_one_defect(sys.element(z), out.a, out.b);
  out.ok = out.residual <= opts.tol.residual_tol;
  return out;
}

std::vector<Attempt> run_search(const std::vector<CMatrix>& mats, const SearchOptions& opts, bool stop_first,
                                int& used) {
  if (mats.empty()) throw PreconditionError("rank-one search: empty span");
  const Index k = static_cast<Index>(mats.size());
  MinorSystem sys(mats);
  Rng rng(opts.seed);
  std::vector<Attempt> hits;
  used = 0;
  // A single matrix is its own span.
  if (k == 1) {
    Attempt a;
    a.z = CVector::Ones(1);
    a.residual = rank_one_defect(mats[0], a.a, a.b);
    a.ok = a.residual <= opts.tol.residual_tol;
    used = 1;
    if (a.ok) hits.push_back(a);
    return hits;
  }
  for (int rep = 0; rep < opts.restarts; ++rep) {
    for (Index pinned = 0; pinned < k; ++pinned) {
      CVector z = random_gaussian_vector(k, rng);
      ++used;
      Attempt a = levenberg_marquardt(sys, pinned, z, opts);
      if (!a.ok) continue;
      hits.push_back(a);
      if (stop_first) return hits;
    }
  }
  return hits;
}

}  // namespace

RankOneResult find_rank_one_in_span(const std::vector<CMatrix>& mats, const SearchOptions& opts) {
  int used = 0;
  auto hits = run_search(mats, opts, true, used);
  RankOneResult res;
  res.restarts_used = used;
  if (hits.empty()) return res;
  res.found = true;
  res.coefficients = hits[0].z;
  res.a = hits[0].a;
  res.b = hits[0].b;
  res.residual = hits[0].residual;
  return res;
}

namespace {

std::vector<CMatrix> reshape_basis(const Subspace& v) {
  std::vector<CMatrix> mats;
  for (Index i = 0; i < v.k(); ++i) mats.push_back(coefficient_matrix(v.basis.row(i).transpose(), v.dim_a, v.dim_b));
  return mats;
}

ProductVector to_product(const Attempt& a, int used) {
  ProductVector p;
  p.found = true;
  p.a = a.a;
  p.b = a.b;
  p.coefficients = a.z;
  p.residual = a.residual;
  p.restarts_used = used;
  return p;
}

}  // namespace

ProductVector find_product_vector(const Subspace& v, const SearchOptions& opts) {
  int used = 0;
  auto hits = run_search(reshape_basis(v), opts, true, used);
  if (hits.empty()) {
    ProductVector p;
    p.restarts_used = used;
    return p;
  }
  return to_product(hits[0], used);
}

std::vector<ProductVector> enumerate_product_vectors(const Subspace& v, const SearchOptions& opts) {
  int used = 0;
  auto hits = run_search(reshape_basis(v), opts, false, used);
  std::vector<ProductVector> out;
  for (const auto& h : hits) {
    CVector w = kron(h.a, h.b);
    w.normalize();
    bool dup = false;
    for (const auto& o : out) {
      CVector u = kron(o.a, o.b).normalized();
      if (std::abs(u.dot(w)) > 1.0 - 1e-8) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(to_product(h, used));
  }
  return out;
}

}  // namespace qdistill
