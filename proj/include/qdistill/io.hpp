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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"
#include "qdistill/families.hpp"
#include "qdistill/product_search.hpp"

namespace qdistill {

using ojson = nlohmann::ordered_json;

// Malformed input. `where` is a JSON pointer or "byte N".
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& where, const std::string& what)
      : ValidationError(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class FileKind { Bipartite, Tripartite, Subspace, Fixture };

const char* to_string(FileKind k);

struct ToleranceOverrides {
  std::optional<double> rank_tol_factor;
  std::optional<double> psd_tol;
  std::optional<double> residual_tol;

  void apply(ToleranceConfig& tol) const;
};

struct StateFile {
  int version = 1;
  FileKind kind = FileKind::Bipartite;
  std::variant<BipartiteState, TripartitePure, Subspace, FixtureSpec> payload;
  ToleranceOverrides tolerances;
  std::string family;  // generator name, informational
};

constexpr int kStateFileVersion = 1;

StateFile parse_state_file(const std::string& text);
StateFile read_state_file(const std::string& path);
// Doubles are written as hex-float strings, so reading back is exact.
std::string dump_state_file(const StateFile& f);
// Writes to a sibling temporary and renames over `path`.
void write_text_atomically(const std::string& path, const std::string& text);

// Fixture files resolve to the generated state; other kinds pass through.
StateFile resolve_fixture(const StateFile& f);

// FNV-1a 64 over the canonical serialization of the payload.
std::uint64_t input_digest(const StateFile& f);
std::string hex64(std::uint64_t v);

std::string hex_float(double v);
double parse_hex_float(const std::string& s, const std::string& where);

// Report-side encodings (plain JSON numbers).
ojson to_json(cplx z);
ojson to_json(const CVector& v);
ojson to_json(const CMatrix& m);

FixtureSpec fixture_from_json(const nlohmann::json& j, const std::string& where = "/fixture");
ojson fixture_to_json(const FixtureSpec& spec);

}  // namespace qdistill
