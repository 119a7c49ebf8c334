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

// Command-line front end: analyze, generate, product-test.
// Exit codes: 0 decided, 2 undecided, 1 error.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qdistill/analyze.hpp"

namespace {

using namespace qdistill;

struct CommonFlags {
  double tol = 0.0;  // 0 keeps the defaults
  std::uint64_t seed = Options{}.seed;
  int budget = 1;
  std::string mode = "auto";
  bool text = false;
  bool timing = false;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_mode) {
  cmd->add_option("--tol", f.tol, "residual tolerance; the PSD tolerance is set to a tenth of it")
      ->envname("QDISTILL_TOL")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "seed for every randomized search")->envname("QDISTILL_SEED");
  cmd->add_option("--budget", f.budget, "multiplier on the default search budgets")
      ->envname("QDISTILL_BUDGET")
      ->check(CLI::PositiveNumber);
  if (with_mode)
    cmd->add_option("--mode", f.mode, "auto|ppt|full-rank|rank4|reduce|tripartite")
        ->envname("QDISTILL_MODE")
        ->check(CLI::IsMember({"auto", "ppt", "full-rank", "rank4", "reduce", "tripartite"}));
  cmd->add_flag("--text", f.text, "human-readable report")->envname("QDISTILL_TEXT");
  cmd->add_flag("--timing", f.timing, "include wall-clock time in the report")->envname("QDISTILL_TIMING");
  cmd->add_option("-o,--output", f.out, "write the report here instead of stdout");
}

AnalyzeOptions to_options(const CommonFlags& f) {
  AnalyzeOptions ao;
  ao.opts.seed = f.seed;
  ao.opts.budget = f.budget;
  if (f.tol > 0.0) {
    ao.opts.tol.residual_tol = f.tol;
    ao.opts.tol.psd_tol = f.tol / 10.0;
  }
  ao.mode = parse_mode(f.mode);
  ao.timing = f.timing;
  return ao;
}

void emit(const Report& rep, const CommonFlags& f) {
  const std::string text = f.text ? render_text(rep.body) : rep.body.dump(2) + "\n";
  if (f.out.empty())
    std::cout << text;
  else
    write_text_atomically(f.out, text);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_hex_float(item, "list entry"));
  return out;
}

// Positional conveniences; --params accepts the full fixture parameter map.
FixtureSpec fixture_for(const std::string& family_in, const std::vector<std::string>& args, const std::string& params,
                        bool random, std::uint64_t seed) {
  std::string family = family_in;
  for (char& c : family)
    if (c == '-') c = '_';
  if (family == "ghz") family = "generalized_ghz";
  if (family == "upb_tiles") family = "upb_tiles_3x3";
  if (family == "upb_shifts") family = "upb_shifts_2x2x2";
  if (family == "reducible_4x4") family = "reducible_4x4_example";
  nlohmann::json j;
  j["name"] = family;
  j["params"] = params.empty() ? nlohmann::json::object() : nlohmann::json::parse(params);
  FixtureSpec spec = fixture_from_json(j);
  auto need = [&](size_t n) {
    if (args.size() < n) throw ValidationError("generate " + family_in + ": expected " + std::to_string(n) + " argument(s)");
  };
  if ((family == "antisymmetric" || family == "werner") && !args.empty()) spec.n = std::stoll(args[0]);
  if (family == "werner") {
    need(2);
    spec.phi = parse_hex_float(args[1], "phi");
  }
  if (family == "two_term_2x2" && !args.empty()) spec.p = parse_hex_float(args[0], "p");
  if (family == "upb_shifts_2x2x2" && !args.empty()) spec.cut = std::stoi(args[0]);
  if (family == "generalized_ghz" && !args.empty()) {
    const std::vector<double> c = parse_list(args[0]);
    spec.ghz = Eigen::Map<const RVector>(c.data(), static_cast<Index>(c.size())).cast<cplx>();
  }
  if (family == "checkerboard" && random) {
    Rng rng(seed);
    spec.checkerboard = CheckerboardParams::random(rng);
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distillability, PPT and separability analysis of low-rank quantum states"};
  app.require_subcommand(1);

  CommonFlags af;
  std::string analyze_path;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "analyze a state file and print a report");
  analyze_cmd->add_option("path", analyze_path, "state file")->required();
  add_common(analyze_cmd, af, true);

  CommonFlags pf;
  std::string product_path;
  CLI::App* product_cmd = app.add_subcommand("product-test", "look for product vectors in a subspace");
  product_cmd->add_option("path", product_path, "subspace file")->required();
  add_common(product_cmd, pf, false);

  std::string family, params, gen_out;
  std::vector<std::string> gen_args;
  bool random = false, as_fixture = false;
  std::uint64_t gen_seed = Options{}.seed;
  CLI::App* gen_cmd = app.add_subcommand("generate", "write a state file for a named family");
  gen_cmd->add_option("family", family,
                      "antisymmetric, werner, upb-tiles, upb-shifts, ghz, label-state, reducible-4x4, "
                      "checkerboard, two-term-2x2, rfrp-violator-2x3, bell")
      ->required();
  gen_cmd->add_option("args", gen_args, "family arguments, e.g. 'antisymmetric 3' or 'ghz 1,1'");
  gen_cmd->add_option("--params", params, "fixture parameters as a JSON object");
  gen_cmd->add_flag("--random", random, "random parameters (checkerboard)");
  gen_cmd->add_option("--seed", gen_seed, "seed for --random")->envname("QDISTILL_SEED");
  gen_cmd->add_flag("--as-fixture", as_fixture, "write the fixture spec instead of the generated state");
  gen_cmd->add_option("-o,--output", gen_out, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*analyze_cmd) {
      const Report rep = analyze(read_state_file(analyze_path), to_options(af));
      emit(rep, af);
      return rep.exit_code;
    }
    if (*product_cmd) {
      const Report rep = product_test(read_state_file(product_path), to_options(pf));
      emit(rep, pf);
      return rep.exit_code;
    }
    if (*gen_cmd) {
      StateFile f;
      f.kind = FileKind::Fixture;
      f.payload = fixture_for(family, gen_args, params, random, gen_seed);
      if (!as_fixture) f = resolve_fixture(f);
      const std::string text = dump_state_file(f);
      if (gen_out.empty())
        std::cout << text;
      else
        write_text_atomically(gen_out, text);
      return kDecided;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
