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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdistill/analyze.hpp"
#include "qdistill/criteria.hpp"
#include "qdistill/families.hpp"
#include "qdistill/io.hpp"
#include "qdistill/rank4.hpp"

namespace py = pybind11;
using namespace qdistill;

namespace {

Options make_options(std::uint64_t seed, int budget) {
  Options o;
  o.seed = seed;
  o.budget = budget;
  return o;
}

// Reports cross the boundary as JSON text; the Python side decodes them.
std::string classify_json(const CMatrix& rho, Index dim_a, Index dim_b, std::uint64_t seed, int budget) {
  const Options opts = make_options(seed, budget);
  const BipartiteState s = make_state(rho, dim_a, dim_b, opts.tol);
  return certificate_json(s, classify_state(s, opts), opts.tol).dump();
}

std::pair<std::string, int> analyze_json(const std::string& text, const std::string& mode, std::uint64_t seed,
                                         int budget) {
  AnalyzeOptions ao;
  ao.opts = make_options(seed, budget);
  ao.mode = parse_mode(mode);
  const Report r = analyze(parse_state_file(text), ao);
  return {r.body.dump(), r.exit_code};
}

}  // namespace

PYBIND11_MODULE(_qdistill, m) {
  // Translators run newest first, so the derived ParseError is registered last.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("is_ppt", [](const CMatrix& rho, Index dim_a, Index dim_b) {
    const PptResult r = is_ppt(make_state(rho, dim_a, dim_b));
    return py::make_tuple(r.ppt, r.min_eigenvalue);
  }, py::arg("rho"), py::arg("dim_a"), py::arg("dim_b"));
  m.def("classify_json", &classify_json, py::arg("rho"), py::arg("dim_a"), py::arg("dim_b"),
        py::arg("seed") = Options{}.seed, py::arg("budget") = 1);
  m.def("analyze_json", &analyze_json, py::arg("text"), py::arg("mode") = "auto",
        py::arg("seed") = Options{}.seed, py::arg("budget") = 1);
  m.def("werner", [](Index n, double phi) { return werner(n, phi).rho; }, py::arg("n"), py::arg("phi"));
  m.def("antisymmetric", [](Index n) { return antisymmetric(n).rho; }, py::arg("n"));
  m.def("upb_tiles_3x3", [] { return upb_tiles_3x3().rho; });
}
