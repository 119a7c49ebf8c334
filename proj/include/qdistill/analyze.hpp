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

#include <string>

#include "qdistill/io.hpp"

namespace qdistill {

enum class Mode { Auto, Ppt, FullRank, Rank4, Reduce, Tripartite };

Mode parse_mode(const std::string& s);
const char* to_string(Mode m);

struct AnalyzeOptions {
  Options opts;
  Mode mode = Mode::Auto;
  bool timing = false;
};

enum ExitCode : int { kDecided = 0, kError = 1, kUndecided = 2 };

struct Report {
  ojson body;
  int exit_code = kDecided;
};

// Tolerance overrides in the file are applied on top of `ao.opts.tol`.
Report analyze(const StateFile& file, const AnalyzeOptions& ao);
// Hypersurface value where the shape has one, plus the numeric search.
Report product_test(const StateFile& file, const AnalyzeOptions& ao);

// Certificate payload with re-validation numbers computed against `s`.
ojson certificate_json(const BipartiteState& s, const Certificate& c, const ToleranceConfig& tol);

std::string render_text(const ojson& report);

}  // namespace qdistill
