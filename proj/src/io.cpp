#include "psdrank/io.hpp"

#include <fstream>
#include <sstream>

#include "psdrank/errors.hpp"

namespace psdrank {

namespace {

Rational literal(const Json& v) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number()) return parse_rational(v.dump());
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  throw Error(ErrorCode::ParseError, "expected a rational literal, got " + v.dump());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RationalMatrix parse_matrix_csv(const std::string& text) {
  std::vector<std::vector<Rational>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<Rational> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(parse_rational(trim(cell)));
    if (!rows.empty() && row.size() != rows.front().size())
      throw Error(ErrorCode::ParseError, "ragged CSV row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, "empty matrix");
  return RationalMatrix::from_rows(rows);
}

RationalMatrix parse_matrix_json(const Json& j) {
  if (!j.is_object() || !j.contains("entries")) throw Error(ErrorCode::ParseError, "matrix JSON needs entries");
  std::vector<std::vector<Rational>> rows;
  for (const auto& r : j.at("entries")) {
    std::vector<Rational> row;
    for (const auto& v : r) row.push_back(literal(v));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::ParseError, "empty matrix");
  for (const auto& r : rows)
    if (r.size() != rows.front().size()) throw Error(ErrorCode::ParseError, "ragged JSON matrix");
  if (j.contains("rows") && j.at("rows").get<std::size_t>() != rows.size())
    throw Error(ErrorCode::ParseError, "rows field disagrees with entries");
  if (j.contains("cols") && j.at("cols").get<std::size_t>() != rows.front().size())
    throw Error(ErrorCode::ParseError, "cols field disagrees with entries");
  return RationalMatrix::from_rows(rows);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

RationalMatrix read_matrix_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      return parse_matrix_json(Json::parse(text));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
  }
  return parse_matrix_csv(text);
}

std::string rational_literal(const Rational& r) { return r.get_str(); }

Json matrix_to_json(const RationalMatrix& m) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rational_literal(m(i, j)));
    entries.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

std::string matrix_to_csv(const RationalMatrix& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << rational_literal(m(i, j));
    os << '\n';
  }
  return os.str();
}

Json polytope_to_json(const VPolytope& p) {
  Json verts = Json::array();
  for (const auto& v : p.vertices) {
    Json row = Json::array();
    for (const auto& x : v) row.push_back(rational_literal(x));
    verts.push_back(std::move(row));
  }
  return Json{{"dim", p.dim}, {"vertices", std::move(verts)}};
}

Json polyhedron_to_json(const HPolyhedron& q) {
  Json hs = Json::array();
  for (const auto& h : q.halfspaces) {
    Json normal = Json::array();
    for (const auto& x : h.h) normal.push_back(rational_literal(x));
    hs.push_back(Json{{"h", std::move(normal)}, {"z", rational_literal(h.z)}});
  }
  return Json{{"dim", q.dim}, {"halfspaces", std::move(hs)}};
}

VPolytope polytope_from_json(const Json& j) {
  try {
    VPolytope p{j.at("dim").get<std::size_t>(), {}};
    for (const auto& v : j.at("vertices")) {
      RationalVector pt;
      for (const auto& x : v) pt.push_back(literal(x));
      p.vertices.push_back(std::move(pt));
    }
    p.validate();
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

HPolyhedron polyhedron_from_json(const Json& j) {
  try {
    HPolyhedron q{j.at("dim").get<std::size_t>(), {}};
    for (const auto& h : j.at("halfspaces")) {
      Halfspace hs;
      for (const auto& x : h.at("h")) hs.h.push_back(literal(x));
      hs.z = literal(h.at("z"));
      q.halfspaces.push_back(std::move(hs));
    }
    q.validate();
    return q;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Json pair_to_json(const NestedPair& pair) {
  return Json{{"inner", polytope_to_json(pair.inner())}, {"outer", polyhedron_to_json(pair.outer())}};
}

Json pencil_to_json(const Pencil& p) {
  Json mats = Json::array();
  for (const auto& m : p.mats) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    mats.push_back(std::move(rows));
  }
  return Json{{"k", p.k}, {"dim", p.dim}, {"mats", std::move(mats)}};
}

Pencil pencil_from_json(const Json& j) {
  try {
    Pencil p;
    p.k = j.at("k").get<std::size_t>();
    p.dim = j.at("dim").get<std::size_t>();
    for (const auto& m : j.at("mats")) {
      Eigen::MatrixXd mat(static_cast<Eigen::Index>(p.k), static_cast<Eigen::Index>(p.k));
      if (m.size() == p.k * p.k && !m.front().is_array()) {
        for (std::size_t t = 0; t < p.k * p.k; ++t) mat.data()[t] = literal(m[t]).get_d();
        mat.transposeInPlace();  // row-major input into column-major storage
      } else {
        if (m.size() != p.k) throw Error(ErrorCode::ParseError, "pencil matrix has wrong row count");
        for (std::size_t r = 0; r < p.k; ++r) {
          if (m[r].size() != p.k) throw Error(ErrorCode::ParseError, "pencil matrix has wrong column count");
          for (std::size_t c = 0; c < p.k; ++c)
            mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = literal(m[r][c]).get_d();
        }
      }
      p.mats.push_back(std::move(mat));
    }
    p.validate();
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

Json nest_report_to_json(const NestReport& rep) {
  Json j{{"verdict", to_string(rep.verdict)}, {"feasible", rep.feasible}};
  if (rep.conic) {
    Json q = Json::array();
    for (int r = 0; r < 3; ++r) q.push_back(Json{rep.conic->q_matrix()(r, 0), rep.conic->q_matrix()(r, 1), rep.conic->q_matrix()(r, 2)});
    j["conic"] = std::move(q);
  } else {
    j["conic"] = nullptr;
  }
  j["touched_vertices"] = rep.touched_vertices;
  j["tangent_edges"] = rep.tangent_edges;
  j["strict"] = rep.strict;
  j["margin"] = rep.margin;
  j["gap"] = rep.gap;
  j["iterations"] = rep.iterations;
  return j;
}

}  // namespace psdrank
