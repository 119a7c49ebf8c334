# Copyright 2026 The qdistill Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Certified entanglement verdicts for low-rank states."""

import json

import numpy as np

from ._qdistill import Error, ParseError, antisymmetric, upb_tiles_3x3, werner
from ._qdistill import analyze_json as _analyze_json
from ._qdistill import classify_json as _classify_json
from ._qdistill import is_ppt as _is_ppt

__all__ = ["Error", "ParseError", "analyze", "antisymmetric", "classify", "is_ppt", "upb_tiles_3x3", "werner"]


def _as_rho(rho):
    return np.ascontiguousarray(rho, dtype=np.complex128)


def is_ppt(rho, dim_a, dim_b):
    """Returns (ppt, least eigenvalue of the partial transpose)."""
    return _is_ppt(_as_rho(rho), dim_a, dim_b)


def classify(rho, dim_a, dim_b, seed=20261019, budget=1):
    """Certificate for rho on C^dim_a (x) C^dim_b, as a dict."""
    return json.loads(_classify_json(_as_rho(rho), dim_a, dim_b, seed, budget))


def analyze(text, mode="auto", seed=20261019, budget=1):
    """Runs the CLI analysis on a state file given as text. Returns (report, exit_code)."""
    body, code = _analyze_json(text, mode, seed, budget)
    return json.loads(body), code
