#pragma once

#include <string>

#include "ell2/ck.hpp"
#include "ell2/dbar.hpp"
#include "ell2/polynomial.hpp"
#include "ell2/surface.hpp"
#include "json.hpp"

// JSON shapes used by the command line tool.
//
//   poly:    [{"x": [[i, e], ...], "c": 1.5}, ...]
//   cpoly:   [{"z": [[j, p, q], ...], "re": 1, "im": 0}, ...]
//   form:    {"s": 0, "t": 1, "components": [{"I": [], "J": [1], "terms": cpoly}]}
//   series:  [{"t": 0, "x": [[i, e], ...], "c": 1}, ...]
//   problem: {"A0": series, "A": [{"i": 1, "series": series}], "Phi": series}
namespace ell2::io {

using nlohmann::json;

std::string read_file(const std::string& path);

RealPoly poly_from_json(const json& j);
json to_json(const RealPoly& p);

CPoly cpoly_from_json(const json& j);
json to_json(const CPoly& p);

Form form_from_json(const json& j);
json to_json(const Form& f);

MonomialSeries<double> series_from_json(const json& j, int cap);
json to_json(const MonomialSeries<double>& s);
LinearCauchyProblem<double> problem_from_json(const json& j, int cap);

// {"kind": "half-space"|"ball", "dims", "k", "center", "radius"}
GaussGreenDomain domain_from_json(const json& j);
// {"base", "comp", "offset", "slope"}
GraphSurface graph_from_json(const json& j);
// [{"index", "lo", "hi"}]
ChartRegion region_from_json(const json& j);

}  // namespace ell2::io
