#pragma once

#include <array>
#include <optional>
#include <string>

#include "json.hpp"
#include "orthotile/odmap.hpp"

namespace orthotile {

using Json = nlohmann::ordered_json;

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json parse_json(const std::string& text, const std::string& what);
// Compact form plus a trailing newline; doubles use shortest round-trip digits.
std::string dump_json(const Json& j);
// 12 significant digits, the format used for all console numbers.
std::string fmt12(double x);

Json map_to_json(const OrthodiagonalMap& m, const std::array<VertexId, 4>* marked = nullptr);
OrthodiagonalMap map_from_json(const Json& j);
std::optional<std::array<VertexId, 4>> marked_from_json(const Json& j);

Json marked_map_to_json(const MarkedRectangleMap& m);
MarkedRectangleMap marked_map_from_json(const Json& j);

}  // namespace orthotile
