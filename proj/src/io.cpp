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

#include "qdistill/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qdistill {

using json = nlohmann::json;

const char* to_string(FileKind k) {
  switch (k) {
    case FileKind::Bipartite: return "bipartite";
    case FileKind::Tripartite: return "tripartite";
    case FileKind::Subspace: return "subspace";
    case FileKind::Fixture: return "fixture";
  }
  return "?";
}

void ToleranceOverrides::apply(ToleranceConfig& tol) const {
  if (rank_tol_factor) tol.rank_tol_factor = *rank_tol_factor;
  if (psd_tol) tol.psd_tol = *psd_tol;
  if (residual_tol) tol.residual_tol = *residual_tol;
}

std::string hex_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex_float(const std::string& s, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ParseError(where, "'" + s + "' is not a finite floating-point literal");
  return v;
}

namespace {

std::string sub(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string sub(const std::string& where, size_t i) { return where + "/" + std::to_string(i); }

const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where, "missing field '" + key + "'");
  return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double real_of(const json& j, const std::string& where) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(where, "non-finite number");
    return v;
  }
  if (j.is_string()) return parse_hex_float(j.get<std::string>(), where);
  throw ParseError(where, "expected a number or a hex-float string");
}

// [re, im] pair; a bare real is accepted as a real entry.
cplx complex_of(const json& j, const std::string& where) {
  if (j.is_array()) {
    if (j.size() != 2) throw ParseError(where, "complex entries are [re, im] pairs");
    return {real_of(j[0], sub(where, size_t{0})), real_of(j[1], sub(where, size_t{1}))};
  }
  return real_of(j, where);
}

Index positive_int(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) throw ParseError(where, "expected a positive integer");
  return static_cast<Index>(j.get<long long>());
}

CVector vector_of(const json& j, const std::string& where, Index expected = -1) {
  if (!j.is_array()) throw ParseError(where, "expected an array of complex entries");
  if (expected >= 0 && static_cast<Index>(j.size()) != expected)
    throw ParseError(where, "expected " + std::to_string(expected) + " entries, found " + std::to_string(j.size()));
  CVector v(static_cast<Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_of(j[i], sub(where, i));
  return v;
}

CMatrix matrix_of(const json& j, Index rows, Index cols, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    throw ParseError(where, "expected " + std::to_string(rows) + " rows");
  CMatrix m(rows, cols);
  for (size_t r = 0; r < j.size(); ++r) m.row(static_cast<Index>(r)) = vector_of(j[r], sub(where, r), cols).transpose();
  return m;
}

ojson hex_entry(cplx z) { return ojson::array({hex_float(z.real()), hex_float(z.imag())}); }

ojson hex_vector(const CVector& v) {
  ojson out = ojson::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(hex_entry(v(i)));
  return out;
}

ojson hex_matrix(const CMatrix& m) {
  ojson out = ojson::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(hex_vector(m.row(r).transpose()));
  return out;
}

template <class F>
auto wrap_validation(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ParseError(where, e.what());
  }
}

ojson payload_json(const StateFile& f) {
  ojson out;
  out["kind"] = to_string(f.kind);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BipartiteState>) {
          out["dims"] = {p.dim_a, p.dim_b};
          out["data"] = hex_matrix(p.rho);
        } else if constexpr (std::is_same_v<T, TripartitePure>) {
          out["dims"] = {p.da, p.db, p.dc};
          out["data"] = hex_vector(p.amplitudes);
        } else if constexpr (std::is_same_v<T, Subspace>) {
          out["dims"] = {p.dim_a, p.dim_b};
          out["data"] = hex_matrix(p.basis);
        } else {
          out["fixture"] = fixture_to_json(p);
        }
      },
      f.payload);
  return out;
}

// A misspelled parameter would otherwise fall back to its default silently.
void reject_unknown_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParseError(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; }))
      throw ParseError(sub(where, it.key()), "unknown key");
}

}  // namespace

ojson to_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

ojson to_json(const CVector& v) {
  ojson out = ojson::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

ojson to_json(const CMatrix& m) {
  ojson out = ojson::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(to_json(CVector(m.row(r).transpose())));
  return out;
}

FixtureSpec fixture_from_json(const json& j, const std::string& where) {
  FixtureSpec spec;
  const json& name = field(j, "name", where);
  if (!name.is_string()) throw ParseError(sub(where, "name"), "expected a string");
  spec.name = name.get<std::string>();
  reject_unknown_keys(j, where, {"name", "params"});
  static const json kEmpty = json::object();
  const json* pp = optional_field(j, "params");
  const json& params = pp ? *pp : kEmpty;
  const std::string pw = sub(where, "params");
  if (!params.is_object()) throw ParseError(pw, "expected an object");
  reject_unknown_keys(params, pw, {"n", "phi", "p", "cut", "angles", "basis", "coefficients", "label", "checkerboard"});

  if (auto* v = optional_field(params, "n")) spec.n = positive_int(*v, sub(pw, "n"));
  if (auto* v = optional_field(params, "phi")) spec.phi = real_of(*v, sub(pw, "phi"));
  if (auto* v = optional_field(params, "p")) spec.p = real_of(*v, sub(pw, "p"));
  if (auto* v = optional_field(params, "cut")) {
    if (!v->is_number_integer() || v->get<int>() < 0 || v->get<int>() > 2)
      throw ParseError(sub(pw, "cut"), "expected 0, 1 or 2");
    spec.cut = v->get<int>();
  }
  if (auto* v = optional_field(params, "angles")) {
    const std::string w = sub(pw, "angles");
    if (!v->is_array() || v->size() != 3) throw ParseError(w, "expected three angles");
    spec.shifts = ShiftsBasis::from_angles(real_of((*v)[0], sub(w, size_t{0})), real_of((*v)[1], sub(w, size_t{1})),
                                           real_of((*v)[2], sub(w, size_t{2})));
  }
  if (auto* v = optional_field(params, "basis")) {
    const std::string w = sub(pw, "basis");
    auto q = [&](const char* key) { return vector_of(field(*v, key, w), sub(w, key), 2); };
    spec.shifts = {q("a"), q("a_perp"), q("b"), q("b_perp"), q("c"), q("c_perp")};
  }
  if (auto* v = optional_field(params, "coefficients")) spec.ghz = vector_of(*v, sub(pw, "coefficients"));
  if (auto* v = optional_field(params, "label")) {
    const std::string w = sub(pw, "label");
    reject_unknown_keys(*v, w, {"dim_a", "dim_b", "probabilities", "components", "label_on_b"});
    spec.label.dim_a = positive_int(field(*v, "dim_a", w), sub(w, "dim_a"));
    spec.label.dim_b = positive_int(field(*v, "dim_b", w), sub(w, "dim_b"));
    const json& probs = field(*v, "probabilities", w);
    if (!probs.is_array()) throw ParseError(sub(w, "probabilities"), "expected an array");
    for (size_t i = 0; i < probs.size(); ++i)
      spec.label.probabilities.push_back(real_of(probs[i], sub(sub(w, "probabilities"), i)));
    const json& comps = field(*v, "components", w);
    if (!comps.is_array()) throw ParseError(sub(w, "components"), "expected an array");
    for (size_t i = 0; i < comps.size(); ++i)
      spec.label.components.push_back(
          vector_of(comps[i], sub(sub(w, "components"), i), spec.label.dim_a * spec.label.dim_b));
    if (auto* lb = optional_field(*v, "label_on_b")) {
      if (!lb->is_boolean()) throw ParseError(sub(w, "label_on_b"), "expected a boolean");
      spec.label.label_on_b = lb->get<bool>();
    }
  }
  if (auto* v = optional_field(params, "checkerboard")) {
    const std::string w = sub(pw, "checkerboard");
    if (!v->is_object()) throw ParseError(w, "expected an object of letter -> [re, im]");
    for (auto it = v->begin(); it != v->end(); ++it) {
      if (it.key().size() != 1) throw ParseError(sub(w, it.key()), "unknown parameter");
      wrap_validation(sub(w, it.key()), [&] {
        spec.checkerboard[it.key()[0]] = complex_of(it.value(), sub(w, it.key()));
        return 0;
      });
    }
  }
  return spec;
}

ojson fixture_to_json(const FixtureSpec& spec) {
  ojson out;
  out["name"] = spec.name;
  ojson params = ojson::object();
  const std::string& n = spec.name;
  auto real = [](double v) { return hex_float(v); };
  if (n == "antisymmetric" || n == "werner") params["n"] = spec.n;
  if (n == "werner") params["phi"] = real(spec.phi);
  if (n == "two_term_2x2") params["p"] = real(spec.p);
  if (n == "upb_shifts_2x2x2") {
    params["cut"] = spec.cut;
    ojson b;
    b["a"] = hex_vector(spec.shifts.a);
    b["a_perp"] = hex_vector(spec.shifts.a_perp);
    b["b"] = hex_vector(spec.shifts.b);
    b["b_perp"] = hex_vector(spec.shifts.b_perp);
    b["c"] = hex_vector(spec.shifts.c);
    b["c_perp"] = hex_vector(spec.shifts.c_perp);
    params["basis"] = b;
  }
  if (n == "generalized_ghz") params["coefficients"] = hex_vector(spec.ghz);
  if (n == "label_state") {
    ojson l;
    l["dim_a"] = spec.label.dim_a;
    l["dim_b"] = spec.label.dim_b;
    ojson probs = ojson::array();
    for (double p : spec.label.probabilities) probs.push_back(real(p));
    l["probabilities"] = probs;
    ojson comps = ojson::array();
    for (const CVector& c : spec.label.components) comps.push_back(hex_vector(c));
    l["components"] = comps;
    l["label_on_b"] = spec.label.label_on_b;
    params["label"] = l;
  }
  if (n == "checkerboard") {
    ojson c;
    for (const char* p = CheckerboardParams::kLetters; *p; ++p) c[std::string(1, *p)] = hex_entry(spec.checkerboard[*p]);
    params["checkerboard"] = c;
  }
  out["params"] = params;
  return out;
}

StateFile parse_state_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
  StateFile f;
  const json& version = field(j, "version", "");
  if (!version.is_number_integer()) throw ParseError("/version", "expected an integer");
  f.version = version.get<int>();
  if (f.version != kStateFileVersion)
    throw ParseError("/version", "unsupported version " + std::to_string(f.version));
  const json& kind = field(j, "kind", "");
  if (!kind.is_string()) throw ParseError("/kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (auto* fam = optional_field(j, "family"); fam && fam->is_string()) f.family = fam->get<std::string>();

  if (auto* t = optional_field(j, "tolerances")) {
    if (!t->is_object()) throw ParseError("/tolerances", "expected an object");
    for (auto it = t->begin(); it != t->end(); ++it) {
      const std::string w = "/tolerances/" + it.key();
      const double v = real_of(it.value(), w);
      if (!(v > 0.0)) throw ParseError(w, "tolerances must be positive");
      if (it.key() == "rank_tol_factor") f.tolerances.rank_tol_factor = v;
      else if (it.key() == "psd_tol") f.tolerances.psd_tol = v;
      else if (it.key() == "residual_tol") f.tolerances.residual_tol = v;
      else throw ParseError(w, "unknown tolerance");
    }
  }
  ToleranceConfig tol;
  f.tolerances.apply(tol);

  auto dims = [&](size_t count) {
    const json& d = field(j, "dims", "");
    if (!d.is_array() || d.size() != count)
      throw ParseError("/dims", "expected " + std::to_string(count) + " dimensions");
    std::vector<Index> out;
    for (size_t i = 0; i < count; ++i) out.push_back(positive_int(d[i], sub("/dims", i)));
    return out;
  };

  if (k == "bipartite") {
    f.kind = FileKind::Bipartite;
    const auto d = dims(2);
    const CMatrix rho = matrix_of(field(j, "data", ""), d[0] * d[1], d[0] * d[1], "/data");
    f.payload = wrap_validation("/data", [&] { return make_state(rho, d[0], d[1], tol); });
  } else if (k == "tripartite") {
    f.kind = FileKind::Tripartite;
    const auto d = dims(3);
    const CVector amp = vector_of(field(j, "data", ""), "/data", d[0] * d[1] * d[2]);
    f.payload = wrap_validation("/data", [&] { return make_tripartite(amp, d[0], d[1], d[2]); });
  } else if (k == "subspace") {
    f.kind = FileKind::Subspace;
    const auto d = dims(2);
    const json& data = field(j, "data", "");
    if (!data.is_array() || data.empty()) throw ParseError("/data", "expected a non-empty array of rows");
    const CMatrix rows = matrix_of(data, static_cast<Index>(data.size()), d[0] * d[1], "/data");
    f.payload = wrap_validation("/data", [&] { return make_subspace(rows, d[0], d[1], tol); });
  } else if (k == "fixture") {
    f.kind = FileKind::Fixture;
    f.payload = fixture_from_json(field(j, "fixture", ""), "/fixture");
  } else {
    throw ParseError("/kind", "unknown kind '" + k + "'");
  }
  return f;
}

StateFile read_state_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_state_file(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

std::string dump_state_file(const StateFile& f) {
  ojson out;
  out["version"] = f.version;
  ojson payload = payload_json(f);
  out["kind"] = payload["kind"];
  if (!f.family.empty()) out["family"] = f.family;
  for (auto it = payload.begin(); it != payload.end(); ++it)
    if (it.key() != "kind") out[it.key()] = it.value();
  ojson tol = ojson::object();
  if (f.tolerances.rank_tol_factor) tol["rank_tol_factor"] = hex_float(*f.tolerances.rank_tol_factor);
  if (f.tolerances.psd_tol) tol["psd_tol"] = hex_float(*f.tolerances.psd_tol);
  if (f.tolerances.residual_tol) tol["residual_tol"] = hex_float(*f.tolerances.residual_tol);
  if (!tol.empty()) out["tolerances"] = tol;
  return out.dump(1) + "\n";
}

void write_text_atomically(const std::string& path, const std::string& text) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out.flush()) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

StateFile resolve_fixture(const StateFile& f) {
  if (f.kind != FileKind::Fixture) return f;
  const FixtureSpec& spec = std::get<FixtureSpec>(f.payload);
  StateFile out;
  out.version = f.version;
  out.tolerances = f.tolerances;
  out.family = spec.name;
  Fixture fx = wrap_validation("/fixture", [&] { return make_fixture(spec); });
  if (std::holds_alternative<BipartiteState>(fx)) {
    out.kind = FileKind::Bipartite;
    out.payload = std::get<BipartiteState>(fx);
  } else {
    out.kind = FileKind::Tripartite;
    out.payload = std::get<TripartitePure>(fx);
  }
  return out;
}

std::uint64_t input_digest(const StateFile& f) {
  const std::string s = payload_json(f).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace qdistill
