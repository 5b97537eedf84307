#pragma once

#include <string>

#include <json.hpp>

#include "ncym/fields.hpp"

namespace ncym {

using json = nlohmann::ordered_json;

/// Row-major nested arrays of [re, im].
json to_json(const CMatrix& m);
/// Object keyed by index string ("" for grade 0), zero coefficients omitted.
json to_json(const CForm& f);
json to_json(const CConfig& cfg);
json to_json(const FieldReport& r);

/// Throws DomainError naming `where` on malformed input.
CMatrix matrix_from_json(const json& j, int n, const std::string& where);
CForm form_from_json(const json& j, int n, const std::string& where);

/// Doubles are written in shortest round-trip form; output ends with a newline.
std::string dump(const json& j);

}  // namespace ncym
