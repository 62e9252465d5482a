#pragma once

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "orthoseries/direct_integral.hpp"

namespace orthoseries {

/// Malformed input. Line and column are 1-based; 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

inline constexpr int kSystemSchemaVersion = 1;

/// Shortest decimal text that parses back to the same binary64 value.
std::string format_double(double x);

// System CSV:
//   # orthoseries system v1
//   # field: real|complex
//   element,atom,weight,dim,v0,v1,...
//   0,0,0.25,1,1
// One row per (element, atom); complex entries take two adjacent columns (re, im).
// A single element is written as a one-element system.
template <typename T>
void write_system_csv(std::ostream& os, const SystemModel<T>& model);
AnyModel read_system_csv(std::istream& is);

// System JSON: {"schema_version", "field", "weights", "dims", "elements"}; elements[n][atom]
// is the fiber vector, complex entries as [re, im].
template <typename T>
nlohmann::json system_to_json(const SystemModel<T>& model);
AnyModel system_from_json(const nlohmann::json& j);

/// Parses JSON text, converting parse errors to ParseError with line/column.
nlohmann::json parse_json_text(const std::string& text);

/// Reads a system from a file; ".csv" selects CSV, anything else JSON.
AnyModel read_system_file(const std::string& path);

/// Coefficient list: one value per line ("re" or "re,im"), '#' comments, blank lines skipped.
std::vector<Complex> read_coefficients_csv(std::istream& is);
std::vector<Complex> read_coefficients_file(const std::string& path);

std::string read_text_file(const std::string& path);

extern template void write_system_csv<double>(std::ostream&, const SystemModel<double>&);
extern template void write_system_csv<Complex>(std::ostream&, const SystemModel<Complex>&);
extern template nlohmann::json system_to_json<double>(const SystemModel<double>&);
extern template nlohmann::json system_to_json<Complex>(const SystemModel<Complex>&);

}  // namespace orthoseries
