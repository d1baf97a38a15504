#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "psdrank/conic_nesting.hpp"
#include "psdrank/nested_geometry.hpp"
#include "psdrank/rational_matrix.hpp"
#include "psdrank/spectrahedra.hpp"

namespace psdrank {

using Json = nlohmann::ordered_json;

/// Row-major CSV of rational literals; blank lines and '#' comments are skipped.
RationalMatrix parse_matrix_csv(const std::string& text);
/// {rows, cols, entries: [["num/den", ...], ...]}; numbers are accepted too.
RationalMatrix parse_matrix_json(const Json& j);
/// JSON when the file starts with '{', CSV otherwise. Throws ParseError.
RationalMatrix read_matrix_file(const std::filesystem::path& path);

std::string rational_literal(const Rational& r);
Json matrix_to_json(const RationalMatrix& m);
std::string matrix_to_csv(const RationalMatrix& m);

Json polytope_to_json(const VPolytope& p);
Json polyhedron_to_json(const HPolyhedron& q);
VPolytope polytope_from_json(const Json& j);
HPolyhedron polyhedron_from_json(const Json& j);
Json pair_to_json(const NestedPair& pair);

Json pencil_to_json(const Pencil& p);
Pencil pencil_from_json(const Json& j);

Json nest_report_to_json(const NestReport& rep);

std::string read_text_file(const std::filesystem::path& path);
Json read_json_file(const std::filesystem::path& path);

}  // namespace psdrank
