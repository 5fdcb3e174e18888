#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "projray/continuity.hpp"
#include "projray/linalg.hpp"

namespace projray::jsonio {

using Json = nlohmann::ordered_json;

// Parse or file-access failure; callers translate this into the I/O error
// exit path, as opposed to PreconditionError which signals bad math inputs.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conventions: a complex number is [re, im] (a bare number is accepted on
// input as a real), a vector is an array of complex numbers, a matrix is a
// row-major array of arrays, rationals are strings "p/q" (plain integers
// are accepted), and a quadratic element is {"a": rational, "b": rational}.

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j, const std::string& where);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& where);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& where);

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& where);

Json quad_to_json(const QuadElement& q);
QuadElement quad_from_json(const Json& j, const std::string& where);

// Renders with 2-space indentation, keys in insertion order, and every
// floating point number printed via "%.17g".  Identical documents therefore
// serialize to identical bytes, which is what makes report files
// reproducible across runs.
std::string dump_deterministic(const Json& j);

Json parse_file(const std::string& path);
Json parse_text(const std::string& text);
void write_file(const std::string& path, const Json& j);

}  // namespace projray::jsonio
