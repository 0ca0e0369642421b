#pragma once

// JSON family specifications:
//   {"kind":"joined_uniform","a":1,"b":4,"theta_T":0.5}
//   {"kind":"translation","base":"evd"|"normal"|{"gapped":a}}
//   {"kind":"abs_x","of":<spec>}
//   {"kind":"reciprocal","of":<spec>}
//   {"kind":"composite_reduced","of":<abs_x spec>}

#include "fiducial/families.hpp"

#include <json.hpp>

#include <string>

namespace fiducial {

/// Builds a family from a parsed spec. Errors name the offending field path.
ParametricFamily family_from_json(const nlohmann::json& spec);

/// Parses text; syntax errors report line and column.
ParametricFamily family_from_text(const std::string& text);

ParametricFamily family_from_file(const std::string& path);

}  // namespace fiducial
