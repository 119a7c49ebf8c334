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

#include "qdistill/rank4.hpp"

#include <algorithm>
#include <sstream>

#include "qdistill/decomposition.hpp"
#include "qdistill/product_search.hpp"
#include "qdistill/structure.hpp"

namespace qdistill {

Certificate unswap_certificate(const Certificate& c) {
  Certificate out = c;
  for (auto& t : out.products) std::swap(t.a, t.b);
  if (out.witness) {
    Witness& w = *out.witness;
    const Index da = w.map.in_dim_a(), db = w.map.in_dim_b();
    // w is expressed on the swapped state of dims (da, db).
    w.map = compose(LocalMap{CMatrix::Identity(da, da), CMatrix::Identity(db, db), true}, w.map);
    w.psi = swap_vector(w.psi, da, db).conjugate();
    if (w.kind == WitnessKind::ReductionViolation) {
      w.side = other(w.side);
      w.eigenvector = swap_vector(w.eigenvector, da, db);
    }
  }
  return out;
}

namespace {

Certificate classify_components(const BipartiteState& s, const BDirectDecomposition& d, const Options& opts) {
  std::vector<Certificate> parts;
  for (size_t k = 0; k < d.size(); ++k) {
    Options sub = opts;
    sub.seed = sub_seed(opts.seed, 200 + k);
    parts.push_back(classify_state(d.components[k], sub));
  }
  Certificate agg = aggregate(s, d, parts, opts.tol);
  for (size_t k = 0; k < parts.size(); ++k)
    for (const auto& t : parts[k].trail) agg.trail.push_back("component_" + std::to_string(k) + ":" + t);
  return agg;
}

Certificate with_trail(Certificate c, const std::vector<std::string>& head) {
  std::vector<std::string> t = head;
  t.insert(t.end(), c.trail.begin(), c.trail.end());
  c.trail = std::move(t);
  return c;
}

Certificate separable_or_throw(const BipartiteState& s, const Options& opts, std::vector<std::string> trail,
                               double min_eig) {
  Certificate cert;
  cert.trail = std::move(trail);
  cert.products = separable_decomposition(s, opts);
  cert.verdict = Verdict::Separable;
  cert.min_eig_gamma = min_eig;
  return cert;
}

Certificate witness_or_throw(const BipartiteState& s, const Options& opts, std::vector<std::string> trail) {
  Certificate cert;
  cert.trail = std::move(trail);
  if (auto w = find_witness(s, opts, &cert.trail)) {
    cert.verdict = Verdict::Distillable;
    cert.witness = *w;
    return cert;
  }
  throw SearchExhausted("no witness found for an NPT state that must be distillable");
}

}  // namespace

Certificate decide_rank4(const BipartiteState& s, const Options& opts) {
  const ToleranceConfig& tol = opts.tol;
  Compressed c = compress(s, tol);
  const Index r = state_rank(c.state, tol);
  if (r != 4) {
    std::ostringstream os;
    os << "decide_rank4: state has rank " << r;
    throw PreconditionError(os.str());
  }
  const Index m = c.state.dim_a, n = c.state.dim_b;
  if (std::max(m, n) >= 4) return with_trail(classify_rank_le_max(s, opts), {"max_local_rank_ge_4"});

  const PptResult ppt = is_ppt(s, tol);
  if (m * n <= 6) {
    if (ppt.ppt) return separable_or_throw(s, opts, {"local_dims_at_most_6", "ppt"}, ppt.min_eigenvalue);
    return witness_or_throw(s, opts, {"local_dims_at_most_6", "npt"});
  }

  // Both local ranks equal three.
  std::vector<std::string> trail{"local_ranks_3x3"};
  BDirectDecomposition d = decompose_b_direct(s, opts);
  if (d.size() > 1) {
    trail.push_back("reducible");
    return with_trail(classify_components(s, d, opts), trail);
  }
  trail.push_back("irreducible");

  SearchOptions so;
  so.tol = tol;
  so.restarts = 40 * std::max(1, opts.budget);
  so.seed = sub_seed(opts.seed, 301);
  BlockForm f = block_form(c.state, tol);
  RankOneResult sector1 = find_rank_one_in_span(f.blocks, so);
  if (sector1.found) {
    trail.push_back("sector_rank_one");
    const BipartiteState sw = swap_sides(s);
    BDirectDecomposition ds = decompose_b_direct(sw, opts);
    if (ds.size() > 1) {
      trail.push_back("reducible_after_swap");
      return with_trail(unswap_certificate(classify_components(sw, ds, opts)), trail);
    }
    if (!ppt.ppt) return witness_or_throw(s, opts, trail);
    trail.push_back("swap_irreducible");
  }

  so.seed = sub_seed(opts.seed, 302);
  ProductVector pv = find_product_vector(range_subspace(c.state, tol), so);
  if (pv.found) {
    trail.push_back("product_in_range");
    if (ppt.ppt) {
      trail.push_back("ppt");
      return separable_or_throw(s, opts, trail, ppt.min_eigenvalue);
    }
    trail.push_back("npt");
    Certificate cert;
    cert.trail = trail;
    cert.min_eig_gamma = ppt.min_eigenvalue;
    // Projection of B onto the complement of the product's B-vector.
    const CVector fb = pv.b.normalized();
    CMatrix qb = complete_unitary(fb);
    CMatrix pb = qb.rightCols(n - 1).adjoint();
    const LocalMap proj_map = compose(c.to_compressed(), LocalMap{CMatrix::Identity(m, m), pb, false});
    BipartiteState proj = apply_local(s, proj_map);
    PptResult pp = is_ppt(proj, tol);
    if (!pp.ppt) {
      Witness w = witness_from_vector(s, proj_map, pp.eigenvector, WitnessKind::SchmidtRank2);
      if (w.value < -ppt.threshold) {
        cert.trail.push_back("b_complement_projection_npt");
        cert.verdict = Verdict::Distillable;
        cert.witness = w;
        return cert;
      }
    }
    // Gauge the product vector to |1>|1> and scan for the trivial pattern.
    CMatrix qa = complete_unitary(pv.a.normalized());
    const LocalMap gauge = compose(c.to_compressed(), LocalMap{CMatrix(qa.adjoint()), CMatrix(qb.adjoint()), false});
    if (auto w = trivially_distillable(s, gauge, tol)) {
      cert.trail.push_back("trivially_distillable");
      cert.verdict = Verdict::Distillable;
      cert.witness = *w;
      return cert;
    }
    return witness_or_throw(s, opts, cert.trail);
  }
  trail.push_back("no_product_in_range");
  Certificate cert;
  cert.trail = trail;
  cert.min_eig_gamma = ppt.min_eigenvalue;
  if (ppt.ppt) {
    cert.verdict = Verdict::PPTEntangled;
    std::ostringstream os;
    os << "product search exhausted after " << pv.restarts_used << " restarts";
    cert.note = os.str();
    return cert;
  }
  if (auto w = schmidt2_witness(s, opts)) {
    cert.trail.push_back("schmidt2_search");
    cert.verdict = Verdict::Distillable;
    cert.witness = *w;
    return cert;
  }
  if (auto ck = common_kernel_distill(s, opts)) return with_trail(*ck, cert.trail);
  cert.verdict = Verdict::Undecided;
  std::ostringstream os;
  os << "NPT, no product vector in range after " << pv.restarts_used
     << " restarts, Schmidt-rank-2 search exhausted";
  cert.note = os.str();
  return cert;
}

Certificate classify_state(const BipartiteState& s, const Options& opts) {
  const ToleranceConfig& tol = opts.tol;
  Compressed c = compress(s, tol);
  const Index r = state_rank(c.state, tol);
  const Index m = c.state.dim_a, n = c.state.dim_b;
  if (r <= std::max(m, n)) return with_trail(classify_rank_le_max(s, opts), {"rank_le_max_local_rank"});
  if (r == 4) return with_trail(decide_rank4(s, opts), {"rank_4"});
  const PptResult ppt = is_ppt(s, tol);
  std::vector<std::string> trail{"general"};
  if (ppt.ppt && m * n <= 6) {
    trail.push_back("local_dims_at_most_6");
    return separable_or_throw(s, opts, trail, ppt.min_eigenvalue);
  }
  BDirectDecomposition d = decompose_b_direct(s, opts);
  if (d.size() > 1) {
    trail.push_back("reducible");
    return with_trail(classify_components(s, d, opts), trail);
  }
  Certificate cert;
  cert.min_eig_gamma = ppt.min_eigenvalue;
  if (ppt.ppt) {
    try {
      return separable_or_throw(s, opts, trail, ppt.min_eigenvalue);
    } catch (const SearchExhausted& e) {
      trail.push_back("separability_undetermined");
      cert.trail = trail;
      cert.verdict = Verdict::PPT;
      cert.note = e.what();
      return cert;
    }
  }
  cert.trail = trail;
  if (auto w = find_witness(s, opts, &cert.trail)) {
    cert.verdict = Verdict::Distillable;
    cert.witness = *w;
    return cert;
  }
  if (auto ck = common_kernel_distill(s, opts)) return with_trail(*ck, cert.trail);
  cert.verdict = Verdict::Undecided;
  cert.note = "NPT; trivial, reduction, Schmidt-rank-2 and common-kernel searches exhausted";
  return cert;
}

}  // namespace qdistill
