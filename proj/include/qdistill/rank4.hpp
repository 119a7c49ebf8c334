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

#include "qdistill/criteria.hpp"

namespace qdistill {

// Decision for rank-4 states. The certificate trail records each step of
// the decision tree that was taken.
Certificate decide_rank4(const BipartiteState& s, const Options& opts = {});

// General dispatcher: rank <= max local rank, rank four, small dimensions,
// reducibility, then the witness searches. Never throws SearchExhausted for
// inputs outside the regimes where a verdict is guaranteed; those come back
// as PPT or Undecided.
Certificate classify_state(const BipartiteState& s, const Options& opts = {});

// Certificate for swap_sides(s) re-expressed on s.
Certificate unswap_certificate(const Certificate& c);

}  // namespace qdistill
