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

#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "qdistill/analyze.hpp"
#include "support.hpp"

using namespace qdistill;
using namespace qdistill::testing;

namespace {

std::string bipartite_text(const std::string& data, const std::string& dims = "[1,2]") {
  return R"({"version":1,"kind":"bipartite","dims":)" + dims + R"(,"data":)" + data + "}";
}

StateFile fixture(const std::string& name) {
  StateFile f;
  f.kind = FileKind::Fixture;
  FixtureSpec spec;
  spec.name = name;
  f.payload = spec;
  return resolve_fixture(f);
}

}  // namespace

TEST_CASE("hex floats round-trip exactly") {
  Rng rng(1);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 1000; ++t) {
    const double v = nd(rng) * std::pow(10.0, t % 40 - 20);
    CHECK(parse_hex_float(hex_float(v), "") == v);
  }
  CHECK(parse_hex_float("0.25", "") == 0.25);
  CHECK_THROWS_AS(parse_hex_float("nan", "/x"), ParseError);
  CHECK_THROWS_AS(parse_hex_float("1.0junk", "/x"), ParseError);
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_state_file(R"({"version":1, "kind": )");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.where().rfind("byte ", 0) == 0);
  }
  try {
    parse_state_file(bipartite_text(R"([[[1,0],[0,0]],[[0,0],"x"]])"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.where() == "/data/1/1");
  }
  try {
    parse_state_file(bipartite_text(R"([[[-1,0],[0,0]],[[0,0],[0,0]]])"));
    FAIL("expected a validation error");
  } catch (const ParseError& e) {
    CHECK(e.where() == "/data");
  }
  CHECK_THROWS_AS(parse_state_file(R"({"kind":"bipartite"})"), ParseError);
  CHECK_THROWS_AS(parse_state_file(R"({"version":7,"kind":"bipartite"})"), ParseError);
  CHECK_THROWS_AS(parse_state_file(R"({"version":1,"kind":"mixed"})"), ParseError);
}

TEST_CASE("state files round-trip exactly and digests are stable") {
  Rng rng(2);
  StateFile f;
  f.payload = random_rank_state(2, 3, 3, rng);
  f.tolerances.psd_tol = 1e-11;
  const StateFile back = parse_state_file(dump_state_file(f));
  CHECK(std::get<BipartiteState>(back.payload).rho == std::get<BipartiteState>(f.payload).rho);
  CHECK(*back.tolerances.psd_tol == 1e-11);
  CHECK(input_digest(back) == input_digest(f));
  CHECK(dump_state_file(back) == dump_state_file(f));

  StateFile t;
  t.kind = FileKind::Tripartite;
  t.payload = random_tripartite(2, 2, 3, rng);
  CHECK(std::get<TripartitePure>(parse_state_file(dump_state_file(t)).payload).amplitudes ==
        std::get<TripartitePure>(t.payload).amplitudes);
}

TEST_CASE("atomic write replaces the target") {
  const std::string path = "qdistill_io_test.json";
  write_text_atomically(path, "one");
  write_text_atomically(path, "two");
  std::ifstream in(path);
  std::string s;
  in >> s;
  CHECK(s == "two");
  std::remove(path.c_str());
}

TEST_CASE("analyze: Bell state reports a witness of value -1") {
  const Report r = analyze(fixture("bell"), AnalyzeOptions{});
  CHECK(r.exit_code == kDecided);
  CHECK(r.body["certificate"]["verdict"] == "Distillable");
  CHECK(r.body["certificate"]["witness"]["value"].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r.body["certificate"]["revalidation"]["witness_ok"].get<bool>());
}

TEST_CASE("analyze: tiles UPB complement is PPT entangled") {
  const Report r = analyze(fixture("upb_tiles_3x3"), AnalyzeOptions{});
  CHECK(r.exit_code == kDecided);
  CHECK(r.body["certificate"]["verdict"] == "PPTEntangled");
}

TEST_CASE("analyze: modes and determinism") {
  AnalyzeOptions ao;
  ao.mode = Mode::Ppt;
  CHECK(analyze(fixture("bell"), ao).body["ppt"]["ppt"] == false);
  ao.mode = Mode::FullRank;
  CHECK(analyze(fixture("antisymmetric"), ao).body["distillable_by_full_rank"] == true);
  ao.mode = Mode::Reduce;
  const Report red = analyze(fixture("reducible_4x4_example"), ao);
  CHECK(red.body["components"].size() == 2);
  CHECK(red.body["certificate"]["verdict"] == "Distillable");
  ao.mode = Mode::Tripartite;
  CHECK_THROWS_AS(analyze(fixture("bell"), ao), PreconditionError);

  AnalyzeOptions a1;
  a1.opts.seed = 99;
  const StateFile f = fixture("two_term_2x2");
  CHECK(analyze(f, a1).body.dump() == analyze(f, a1).body.dump());
  a1.timing = true;
  CHECK(analyze(f, a1).body.contains("timing_ms"));
}

TEST_CASE("analyze: tripartite files") {
  StateFile f;
  f.kind = FileKind::Fixture;
  FixtureSpec spec;
  spec.name = "generalized_ghz";
  spec.ghz = CVector::Ones(2);
  f.payload = spec;
  const Report r = analyze(f, AnalyzeOptions{});
  CHECK(r.exit_code == kDecided);
  CHECK(r.body["ghz_test"]["ghz"] == true);
  CHECK(r.body["pairs"][0]["certificate"]["verdict"] == "Separable");
}

TEST_CASE("product-test dispatch") {
  CMatrix p = CMatrix::Zero(2, 6);
  p(0, 0) = p(0, 4) = 1.0;
  p(1, 1) = p(1, 5) = 1.0;
  StateFile f;
  f.kind = FileKind::Subspace;
  f.payload = make_subspace(p, 2, 3);
  const Report r = product_test(f, AnalyzeOptions{});
  CHECK(r.body["polynomial"]["value"][0].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r.body["search"]["found"] == false);
  CHECK(r.body["agreement"] == true);

  Rng rng(3);
  f.payload = product_subspace(2, 4, 3, rng);
  const Report q = product_test(f, AnalyzeOptions{});
  CHECK(q.body["polynomial"]["vanishes"] == true);
  CHECK(q.body["search"]["found"] == true);
  CHECK(q.exit_code == kDecided);

  f.payload = product_subspace(4, 2, 3, rng);
  CHECK(product_test(f, AnalyzeOptions{}).body["polynomial"]["vanishes"] == true);

  f.payload = generic_subspace(3, 3, 4, rng);
  const Report n = product_test(f, AnalyzeOptions{});
  CHECK_FALSE(n.body.contains("polynomial"));
  CHECK(n.body.contains("note"));
}

TEST_CASE("fixture specs round-trip through JSON") {
  FixtureSpec spec;
  spec.name = "checkerboard";
  Rng rng(4);
  spec.checkerboard = CheckerboardParams::random(rng);
  const FixtureSpec back = fixture_from_json(nlohmann::json::parse(fixture_to_json(spec).dump()));
  CHECK(back.checkerboard.values == spec.checkerboard.values);
  CHECK_THROWS_AS(fixture_from_json(nlohmann::json::parse(R"({"name":"checkerboard","params":{"checkerboard":{"o":1}}})")),
                  ParseError);
}

TEST_CASE("fixture keys outside the schema are rejected with their path") {
  auto where = [](const char* text) {
    try {
      fixture_from_json(nlohmann::json::parse(text));
    } catch (const ParseError& e) {
      return e.where();
    }
    return std::string("accepted");
  };
  // Parameters belong under "params"; at top level they used to be dropped.
  CHECK(where(R"({"name":"werner","n":3,"phi":0.6})") == "/fixture/n");
  CHECK(where(R"({"name":"werner","params":{"n":3,"ph":0.6}})") == "/fixture/params/ph");
  CHECK(where(R"({"name":"werner","params":{"n":3,"phi":0.6}})") == "accepted");
}
