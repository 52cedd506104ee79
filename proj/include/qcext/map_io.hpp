#pragma once

#include <string>

#include <json.hpp>

#include "qcext/decompose.hpp"
#include "qcext/douady_earle.hpp"
#include "qcext/realmap.hpp"

namespace qcext::io {

using Json = nlohmann::json;

/// Map descriptions (one JSON object, `kind` selects the variant):
///
///   {"kind": "identity"}
///   {"kind": "affine", "slope": 2, "offset": 1}
///   {"kind": "bump", "bumps": [{"center": 0, "halfwidth": 1, "amplitude": 0.3}]}
///   {"kind": "power_integral", "base": MAP, "exponent": 0.5, "inner_exponent": 0}
///   {"kind": "compose", "outer": MAP, "inner": MAP}
///   {"kind": "compose", "maps": [MAP, ...]}          outermost first
///   {"kind": "taper", "base": MAP, "T": 5}
///   {"kind": "sampled", "x": [...], "y": [...]}
///   {"kind": "monomial", "degree": 3}
///
/// Malformed input throws DomainError.
RealMap map_from_json(const Json& j);
Json map_to_json(const RealMap& f);

///   {"kind": "circle_trig", "shift": 0, "cos": [...], "sin": [...]}
///   {"kind": "mobius", "phi": 0, "c": [re, im]}
///   {"kind": "circle_compose", "outer": CIRCLE, "inner": CIRCLE}
CircleMap circle_map_from_json(const Json& j);
Mobius mobius_from_json(const Json& j);

/// {"eps0", "rounds", "recomposition_error", "factors": [MAP, ...]}
Json factorization_to_json(const Factorization& fac);
Factorization factorization_from_json(const Json& j);

/// Reads and parses a JSON file; DomainError on I/O or syntax errors.
Json read_json_file(const std::string& path);

}  // namespace qcext::io
