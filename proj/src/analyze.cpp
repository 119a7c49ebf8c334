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

#include "qdistill/analyze.hpp"

#include <chrono>
#include <sstream>

#include "qdistill/rank4.hpp"
#include "qdistill/structure.hpp"

namespace qdistill {

Mode parse_mode(const std::string& s) {
  if (s == "auto") return Mode::Auto;
  if (s == "ppt") return Mode::Ppt;
  if (s == "full-rank") return Mode::FullRank;
  if (s == "rank4") return Mode::Rank4;
  if (s == "reduce") return Mode::Reduce;
  if (s == "tripartite") return Mode::Tripartite;
  throw ValidationError("unknown mode '" + s + "'");
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Auto: return "auto";
    case Mode::Ppt: return "ppt";
    case Mode::FullRank: return "full-rank";
    case Mode::Rank4: return "rank4";
    case Mode::Reduce: return "reduce";
    case Mode::Tripartite: return "tripartite";
  }
  return "?";
}

namespace {

ojson map_json(const LocalMap& m) {
  ojson out;
  out["a"] = to_json(m.a);
  out["b"] = to_json(m.b);
  out["swap"] = m.swap;
  return out;
}

ojson witness_json(const Witness& w) {
  ojson out;
  out["kind"] = to_string(w.kind);
  out["value"] = w.value;
  out["psi"] = to_json(w.psi);
  out["map"] = map_json(w.map);
  switch (w.kind) {
    case WitnessKind::TrivialSubmatrix:
      out["row"] = w.row;
      out["col"] = w.col;
      break;
    case WitnessKind::TwoByNProjection:
      out["x"] = to_json(w.x);
      break;
    case WitnessKind::ReductionViolation:
      out["side"] = w.side == Side::A ? "A" : "B";
      out["eigenvalue"] = w.eigenvalue;
      out["eigenvector"] = to_json(w.eigenvector);
      break;
    case WitnessKind::SchmidtRank2:
      break;
  }
  return out;
}

ojson full_rank_json(const FullRankResult& r) {
  ojson out;
  out["side"] = r.side == Side::B ? "right" : "left";
  out["status"] = to_string(r.status);
  out["rank"] = r.rank;
  out["target"] = r.target;
  out["samples"] = r.samples;
  out["degree"] = r.degree;
  out["best_ratio"] = r.best_ratio;
  if (r.status == FullRankStatus::Violated) out["log10_failure_bound"] = r.log10_failure_bound;
  if (r.witness.size() > 0) out["witness"] = to_json(CVector(r.support * r.witness));
  return out;
}

ojson canonical_json(const CanonicalForm& cf) {
  ojson out;
  ojson a = ojson::array();
  for (const CVector& v : cf.a_vectors) a.push_back(to_json(v));
  out["a_vectors"] = a;
  out["ub"] = to_json(cf.ub);
  out["uc"] = to_json(cf.uc);
  out["residual"] = cf.residual;
  return out;
}

ojson dims_json(const StateFile& f) {
  return std::visit(
      [](const auto& p) -> ojson {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BipartiteState>) return {p.dim_a, p.dim_b};
        else if constexpr (std::is_same_v<T, TripartitePure>) return {p.da, p.db, p.dc};
        else if constexpr (std::is_same_v<T, Subspace>) return {p.dim_a, p.dim_b, p.k()};
        else return ojson::array();
      },
      f.payload);
}

ojson header(const StateFile& f, const Options& opts, const char* mode) {
  ojson out;
  ojson input;
  input["kind"] = to_string(f.kind);
  if (!f.family.empty()) input["family"] = f.family;
  input["dims"] = dims_json(f);
  input["digest"] = hex64(input_digest(f));
  out["input"] = input;
  out["mode"] = mode;
  out["seed"] = opts.seed;
  out["budget"] = opts.budget;
  ojson tol;
  tol["rank_tol_factor"] = opts.tol.rank_tol_factor;
  tol["psd_tol"] = opts.tol.psd_tol;
  tol["residual_tol"] = opts.tol.residual_tol;
  out["tolerances"] = tol;
  return out;
}

int exit_for(const Certificate& c) { return c.verdict == Verdict::Undecided ? kUndecided : kDecided; }

Report analyze_tripartite(const StateFile& f, ojson body, const Options& opts) {
  const TripartitePure& psi = std::get<TripartitePure>(f.payload);
  const PairClassification pc = classify_pairs(psi, opts);
  ojson pairs = ojson::array();
  int code = kDecided;
  for (const auto& [pair, ppt, cert] : {std::tuple{Pair::AB, pc.ab_ppt, &pc.ab}, std::tuple{Pair::AC, pc.ac_ppt, &pc.ac}}) {
    ojson p;
    p["pair"] = to_string(pair);
    p["ppt"] = ppt;
    p["certificate"] = certificate_json(reduced_pair(psi, pair), *cert, opts.tol);
    if (cert->verdict == Verdict::Undecided) code = kUndecided;
    pairs.push_back(p);
  }
  body["pairs"] = pairs;
  if (pc.canonical) body["canonical_form"] = canonical_json(*pc.canonical);
  const GhzResult g = ghz_test(psi, opts);
  ojson gj;
  gj["ghz"] = g.ghz;
  gj["route_undistillable"] = g.route_undistillable;
  gj["route_zero_discord"] = g.route_zero_discord;
  if (g.ghz) {
    ojson c = ojson::array();
    for (Index i = 0; i < g.coefficients.size(); ++i) c.push_back(g.coefficients(i));
    gj["coefficients"] = c;
  }
  body["ghz_test"] = gj;
  return {body, code};
}

}  // namespace

ojson certificate_json(const BipartiteState& s, const Certificate& c, const ToleranceConfig& tol) {
  ojson out;
  out["verdict"] = to_string(c.verdict);
  out["trail"] = c.trail;
  if (!c.note.empty()) out["note"] = c.note;
  const PptResult ppt = is_ppt(s, tol);
  ojson reval;
  reval["min_eig_gamma"] = ppt.min_eigenvalue;
  if (c.verdict == Verdict::Separable) {
    ojson prods = ojson::array();
    for (const ProductTerm& t : c.products) {
      ojson p;
      p["a"] = to_json(t.a);
      p["b"] = to_json(t.b);
      prods.push_back(p);
    }
    out["products"] = prods;
    reval["reconstruction_residual"] = reconstruction_residual(s, c.products);
  }
  if (c.witness) {
    out["witness"] = witness_json(*c.witness);
    const WitnessCheck chk = validate_witness(s, *c.witness, tol);
    reval["witness_ok"] = chk.ok;
    reval["witness_value"] = chk.value;
    reval["schmidt_rank"] = chk.schmidt_rank;
  }
  out["revalidation"] = reval;
  return out;
}

Report analyze(const StateFile& file, const AnalyzeOptions& ao) {
  const auto t0 = std::chrono::steady_clock::now();
  const StateFile f = resolve_fixture(file);
  Options opts = ao.opts;
  f.tolerances.apply(opts.tol);
  if (f.kind == FileKind::Subspace) return product_test(f, ao);

  ojson body = header(f, opts, to_string(ao.mode));
  Report rep;
  if (f.kind == FileKind::Tripartite) {
    if (ao.mode != Mode::Auto && ao.mode != Mode::Tripartite)
      throw PreconditionError(std::string("mode '") + to_string(ao.mode) + "' needs a bipartite state");
    rep = analyze_tripartite(f, body, opts);
  } else {
    const BipartiteState& s = std::get<BipartiteState>(f.payload);
    const LocalRanks lr = local_ranks(s, opts.tol);
    ojson summary;
    summary["rank"] = state_rank(s, opts.tol);
    summary["local_ranks"] = {lr.a, lr.b};
    body["state"] = summary;
    switch (ao.mode) {
      case Mode::Auto:
      case Mode::Rank4: {
        const Certificate c = ao.mode == Mode::Auto ? classify_state(s, opts) : decide_rank4(s, opts);
        body["certificate"] = certificate_json(s, c, opts.tol);
        rep = {body, exit_for(c)};
        break;
      }
      case Mode::Ppt: {
        const PptResult p = is_ppt(s, opts.tol);
        ojson r;
        r["ppt"] = p.ppt;
        r["min_eigenvalue"] = p.min_eigenvalue;
        r["threshold"] = p.threshold;
        body["ppt"] = r;
        rep = {body, kDecided};
        break;
      }
      case Mode::FullRank: {
        ojson arr = ojson::array();
        bool violated = false;
        for (Side side : {Side::B, Side::A}) {
          Options sub = opts;
          sub.seed = sub_seed(opts.seed, side == Side::B ? 11 : 12);
          const FullRankResult r = full_rank_property(s, side, sub);
          violated = violated || r.status == FullRankStatus::Violated || r.status == FullRankStatus::ShortcutViolated;
          arr.push_back(full_rank_json(r));
        }
        body["full_rank"] = arr;
        body["distillable_by_full_rank"] = violated;
        rep = {body, kDecided};
        break;
      }
      case Mode::Reduce: {
        const BDirectDecomposition d = decompose_b_direct(s, opts);
        std::vector<Certificate> parts;
        ojson comps = ojson::array();
        for (size_t k = 0; k < d.size(); ++k) {
          Options sub = opts;
          sub.seed = sub_seed(opts.seed, 100 + k);
          parts.push_back(classify_state(d.components[k], sub));
          ojson cj;
          cj["local_ranks"] = {local_ranks(d.components[k], opts.tol).a, local_ranks(d.components[k], opts.tol).b};
          cj["verdict"] = to_string(parts.back().verdict);
          comps.push_back(cj);
        }
        body["components"] = comps;
        const Certificate c = aggregate(s, d, parts, opts.tol);
        body["certificate"] = certificate_json(s, c, opts.tol);
        rep = {body, exit_for(c)};
        break;
      }
      case Mode::Tripartite:
        throw PreconditionError("mode 'tripartite' needs a tripartite state");
    }
  }
  if (ao.timing) {
    const auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep.body["timing_ms"] = dt;
  }
  return rep;
}

Report product_test(const StateFile& file, const AnalyzeOptions& ao) {
  const auto t0 = std::chrono::steady_clock::now();
  const StateFile f = resolve_fixture(file);
  if (f.kind != FileKind::Subspace) throw PreconditionError("product-test needs a subspace file");
  Options opts = ao.opts;
  f.tolerances.apply(opts.tol);
  ojson body = header(f, opts, "product-test");
  Subspace v = std::get<Subspace>(f.payload);

  // Put the two-dimensional factor first when the polynomial is written for it.
  bool swapped = false;
  if (v.dim_b == 2 && v.dim_a != 2) {
    CMatrix rows(v.k(), v.dim_a * v.dim_b);
    for (Index r = 0; r < v.k(); ++r) rows.row(r) = swap_vector(v.basis.row(r).transpose(), v.dim_a, v.dim_b).transpose();
    v = make_subspace(rows, v.dim_b, v.dim_a, opts.tol);
    swapped = true;
  }
  std::optional<HypersurfaceValue> hv;
  if (v.dim_a == 2 && v.dim_b == 3 && v.k() == 2) hv = hypersurface_2x3(v);
  if (v.dim_a == 2 && v.dim_b == 4 && v.k() == 3) hv = hypersurface_2x4(v);
  constexpr double kZeroRelative = 1e-8;

  SearchOptions so;
  so.tol = opts.tol;
  so.seed = opts.seed;
  so.restarts = 40 * opts.budget;
  const ProductVector pv = find_product_vector(v, so);

  ojson search;
  search["found"] = pv.found;
  search["residual"] = pv.residual;
  search["restarts_used"] = pv.restarts_used;
  if (pv.found) {
    // Factors on the input ordering.
    search["a"] = to_json(swapped ? pv.b : pv.a);
    search["b"] = to_json(swapped ? pv.a : pv.b);
  }
  body["search"] = search;
  int code = pv.found ? kDecided : kUndecided;
  if (hv) {
    ojson poly;
    poly["value"] = to_json(hv->value);
    poly["scale"] = hv->scale;
    poly["relative"] = hv->relative;
    poly["vanishes"] = hv->relative <= kZeroRelative;
    if (swapped) poly["note"] = "evaluated with the parties swapped";
    body["polynomial"] = poly;
    const bool agree = (hv->relative <= kZeroRelative) == pv.found;
    body["agreement"] = agree;
    code = agree ? kDecided : kUndecided;
  } else {
    body["note"] = "no hypersurface polynomial for this shape; numeric search only";
  }
  if (ao.timing) {
    const auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    body["timing_ms"] = dt;
  }
  return {body, code};
}

namespace {

bool is_scalar_array(const ojson& j) {
  for (const auto& e : j)
    if (!e.is_primitive() && !(e.is_array() && e.size() == 2 && e[0].is_number())) return false;
  return true;
}

void render(std::ostringstream& os, const std::string& key, const ojson& j, int indent) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  if (j.is_object()) {
    if (!key.empty()) os << pad << key << ":\n";
    for (auto it = j.begin(); it != j.end(); ++it) render(os, it.key(), it.value(), key.empty() ? indent : indent + 1);
  } else if (j.is_array() && !is_scalar_array(j)) {
    os << pad << key << ":\n";
    size_t i = 0;
    for (const auto& e : j) render(os, "[" + std::to_string(i++) + "]", e, indent + 1);
  } else {
    os << pad << key << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

std::string render_text(const ojson& report) {
  std::ostringstream os;
  render(os, "", report, 0);
  return os.str();
}

}  // namespace qdistill
