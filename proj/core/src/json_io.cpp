#include "projray/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace projray::jsonio {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

double number_at(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

void render(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
  switch (j.type()) {
    case Json::value_t::null:
      out += "null";
      return;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case Json::value_t::number_float: {
      const double d = j.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      if (d == 0.0) {
        out += "0";  // collapse negative zero
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
      return;
    }
    case Json::value_t::string:
      out += Json(j.get<std::string>()).dump();
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad_in;
        render(j[i], out, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [key, value] : j.items()) {
        out += pad_in + Json(key).dump() + ": ";
        render(value, out, depth + 1);
        if (++i < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    default:
      out += "null";
      return;
  }
}

}  // namespace

Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) {
    fail(where, "expected [re, im] or a bare number");
  }
  return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(complex_to_json(v(i)));
  }
  return out;
}

Vector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    fail(where, "expected a non-empty array of complex numbers");
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(complex_to_json(m(r, c)));
    }
    out.push_back(std::move(row));
  }
  return out;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    fail(where, "expected a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    fail(where + "[0]", "expected a non-empty row");
  }
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) {
      fail(row_where, "rows must all have the same length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(j[r][c],
                            row_where + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

Json rational_to_json(const Rational& r) { return Json(r.str()); }

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
  if (!j.is_string()) fail(where, "expected an integer or a \"p/q\" string");
  try {
    return Rational(j.get<std::string>());
  } catch (const std::exception&) {
    fail(where, "cannot parse rational \"" + j.get<std::string>() + "\"");
  }
}

Json quad_to_json(const QuadElement& q) {
  Json out = Json::object();
  out["a"] = rational_to_json(q.a);
  out["b"] = rational_to_json(q.b);
  return out;
}

QuadElement quad_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b")) {
    fail(where, "expected {\"a\": rational, \"b\": rational}");
  }
  return {rational_from_json(j["a"], where + ".a"),
          rational_from_json(j["b"], where + ".b")};
}

std::string dump_deterministic(const Json& j) {
  std::string out;
  render(j, out, 0);
  out += "\n";
  return out;
}

Json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << dump_deterministic(j);
  if (!out) throw ParseError("failed writing output file: " + path);
}

}  // namespace projray::jsonio
