#pragma once

#include "cgeom/gauss.hpp"
#include "cgeom/geom_core.hpp"
#include "cgeom/measures.hpp"

#include <json.hpp>

#include <string>
#include <variant>

namespace cgeom {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON document ("-" reads stdin).  Throws ParseError
/// with a file:line:column prefix.
Json read_json_file(const std::string& path);
Json parse_json_text(const std::string& text, const std::string& source = "<input>");

/// Serializes with every floating-point number printed to 17 significant
/// digits.  indent < 0 gives a single line.
std::string dump_json(const Json& value, int indent = 2);

/// {"dim": n, "even": bool, "atoms": [{"u": [..], "c": w}, ...]}
DiscreteSphericalMeasure measure_from_json(const Json& j);
Json measure_to_json(const DiscreteSphericalMeasure& m);

/// {"ambient_dim": n, "basis": [[..], ...]}
Subspace subspace_from_json(const Json& j);
Json subspace_to_json(const Subspace& H);

/// {"kind": "vpolytope", "dim": n, "vertices": [[..]]},
/// {"kind": "hpolytope", "dim": n, "normals": [[..]], "offsets": [..]} or
/// {"kind": "reference", "body": "cube", "dim": k}.
using Body = std::variant<VPolytope, HPolytope, ReferenceBody>;
Body body_from_json(const Json& j);
Json body_to_json(const Body& b);

Json vec_to_json(const Vec& v);
Json mat_to_json(const Mat& m);

}  // namespace cgeom
