#include "orthoseries/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace orthoseries {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(line == 0 ? what
                                   : "line " + std::to_string(line) + ", column " + std::to_string(column) +
                                         ": " + what),
      line_(line),
      column_(column) {}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

struct Cell {
  std::string text;
  std::size_t column = 0;  // 1-based
};

std::vector<Cell> split_cells(const std::string& line) {
  std::vector<Cell> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::size_t end = comma == std::string::npos ? line.size() : comma;
    std::string text = line.substr(start, end - start);
    const auto first = text.find_first_not_of(" \t\r");
    const auto last = text.find_last_not_of(" \t\r");
    std::size_t column = start + 1;
    if (first == std::string::npos) {
      text.clear();
    } else {
      column += first;
      text = text.substr(first, last - first + 1);
    }
    cells.push_back({std::move(text), column});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_double(const Cell& cell, std::size_t line) {
  double value = 0.0;
  const char* begin = cell.text.data();
  const char* end = begin + cell.text.size();
  if (!cell.text.empty() && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, value);
  if (cell.text.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ParseError("expected a number, found '" + cell.text + "'", line, cell.column);
  }
  return value;
}

std::size_t parse_index(const Cell& cell, std::size_t line) {
  std::size_t value = 0;
  const char* begin = cell.text.data();
  const char* end = begin + cell.text.size();
  const auto res = std::from_chars(begin, end, value);
  if (cell.text.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ParseError("expected a nonnegative integer, found '" + cell.text + "'", line, cell.column);
  }
  return value;
}

bool blank_or_comment(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

template <typename T>
T read_scalar(const nlohmann::json& j) {
  if constexpr (is_complex_v<T>) {
    if (j.is_array() && j.size() == 2) return T(j[0].get<double>(), j[1].get<double>());
    return T(j.get<double>(), 0.0);
  } else {
    return j.get<double>();
  }
}

template <typename T>
nlohmann::json scalar_json(const T& v) {
  if constexpr (is_complex_v<T>) {
    return nlohmann::json::array({v.real(), v.imag()});
  } else {
    return v;
  }
}

template <typename T>
SystemModel<T> model_from_json(const nlohmann::json& j, FiberedSpace space) {
  const auto& elements = j.at("elements");
  const std::size_t n = elements.size();
  Matrix<T> columns(static_cast<Eigen::Index>(space.total_dim()), static_cast<Eigen::Index>(n));
  for (std::size_t e = 0; e < n; ++e) {
    const auto& blocks = elements[e];
    if (blocks.size() != space.atoms()) {
      throw StructuralError("element " + std::to_string(e) + " has " + std::to_string(blocks.size()) +
                                " blocks for " + std::to_string(space.atoms()) + " atoms",
                            std::min(blocks.size(), space.atoms()));
    }
    for (std::size_t i = 0; i < space.atoms(); ++i) {
      if (blocks[i].size() != space.dim(i)) {
        throw StructuralError("element " + std::to_string(e) + " block of atom " + std::to_string(i) +
                                  " has the wrong length",
                              i);
      }
      for (std::size_t c = 0; c < space.dim(i); ++c) {
        columns(static_cast<Eigen::Index>(space.offset(i) + c), static_cast<Eigen::Index>(e)) =
            read_scalar<T>(blocks[i][c]);
      }
    }
  }
  return {std::move(space), OrthonormalSystem<T>(std::move(columns))};
}

}  // namespace

template <typename T>
void write_system_csv(std::ostream& os, const SystemModel<T>& model) {
  const FiberedSpace& space = model.space;
  std::size_t max_dim = 0;
  for (std::size_t i = 0; i < space.atoms(); ++i) max_dim = std::max(max_dim, space.dim(i));
  os << "# orthoseries system v" << kSystemSchemaVersion << '\n';
  os << "# field: " << to_string(space.field()) << '\n';
  os << "element,atom,weight,dim";
  for (std::size_t c = 0; c < max_dim; ++c) {
    if constexpr (is_complex_v<T>) {
      os << ",v" << c << "_re,v" << c << "_im";
    } else {
      os << ",v" << c;
    }
  }
  os << '\n';
  for (std::size_t n = 0; n < model.system.size(); ++n) {
    const T* column = model.system.column(n);
    for (std::size_t i = 0; i < space.atoms(); ++i) {
      os << n << ',' << i << ',' << format_double(space.weight(i)) << ',' << space.dim(i);
      for (std::size_t c = 0; c < space.dim(i); ++c) {
        const T v = column[space.offset(i) + c];
        if constexpr (is_complex_v<T>) {
          os << ',' << format_double(v.real()) << ',' << format_double(v.imag());
        } else {
          os << ',' << format_double(v);
        }
      }
      os << '\n';
    }
  }
}

AnyModel read_system_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<Field> field;
  bool header_seen = false;

  struct Row {
    std::size_t element, atom, line;
    std::vector<double> numbers;
  };
  std::vector<Row> rows;
  std::vector<double> weights;
  std::vector<std::size_t> dims;

  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const auto pos = line.find("field:");
      if (pos != std::string::npos) {
        std::string name = line.substr(pos + 6);
        name.erase(0, name.find_first_not_of(" \t"));
        name.erase(name.find_last_not_of(" \t\r") + 1);
        try {
          field = field_from_string(name);
        } catch (const StructuralError&) {
          throw ParseError("unknown field '" + name + "'", line_no, pos + 7);
        }
      }
      continue;
    }
    if (!header_seen) {
      if (line.compare(first, 7, "element") != 0) {
        throw ParseError("expected header 'element,atom,weight,dim,...'", line_no, first + 1);
      }
      header_seen = true;
      continue;
    }
    const auto cells = split_cells(line);
    if (cells.size() < 5) {
      throw ParseError("row needs element, atom, weight, dim and at least one entry", line_no,
                       cells.back().column);
    }
    if (!field) throw ParseError("missing '# field:' line before data", line_no, 1);
    Row row{parse_index(cells[0], line_no), parse_index(cells[1], line_no), line_no, {}};
    const double weight = parse_double(cells[2], line_no);
    const std::size_t dim = parse_index(cells[3], line_no);
    const std::size_t per_entry = *field == Field::Complex ? 2 : 1;
    if (cells.size() - 4 != dim * per_entry) {
      throw ParseError("expected " + std::to_string(dim * per_entry) + " entries for fiber dimension " +
                           std::to_string(dim),
                       line_no, cells[3].column);
    }
    for (std::size_t c = 4; c < cells.size(); ++c) row.numbers.push_back(parse_double(cells[c], line_no));

    if (row.element == 0) {
      if (row.atom != weights.size()) {
        throw ParseError("atoms of element 0 must be listed in order 0, 1, ...", line_no, cells[1].column);
      }
      weights.push_back(weight);
      dims.push_back(dim);
    } else {
      if (row.atom >= weights.size() || weights[row.atom] != weight || dims[row.atom] != dim) {
        throw ParseError("atom " + std::to_string(row.atom) + " disagrees with element 0's weight/dim", line_no,
                         cells[1].column);
      }
    }
    rows.push_back(std::move(row));
  }
  if (!header_seen || rows.empty()) throw ParseError("system CSV has no data rows", line_no, 0);

  const std::size_t atoms = weights.size();
  if (rows.size() % atoms != 0) throw ParseError("incomplete element at end of file", line_no, 0);
  const std::size_t n = rows.size() / atoms;
  FiberedSpace space(MeasureSpace(weights), HilbertCollection(dims, *field));

  auto fill = [&](auto tag) -> AnyModel {
    using T = decltype(tag);
    Matrix<T> columns(static_cast<Eigen::Index>(space.total_dim()), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Row& row = rows[r];
      if (row.element != r / atoms || row.atom != r % atoms) {
        throw ParseError("rows must be ordered by element, then atom", row.line, 1);
      }
      for (std::size_t c = 0; c < dims[row.atom]; ++c) {
        T v;
        if constexpr (is_complex_v<T>) {
          v = T(row.numbers[2 * c], row.numbers[2 * c + 1]);
        } else {
          v = row.numbers[c];
        }
        columns(static_cast<Eigen::Index>(space.offset(row.atom) + c), static_cast<Eigen::Index>(row.element)) = v;
      }
    }
    return SystemModel<T>{space, OrthonormalSystem<T>(std::move(columns))};
  };
  if (*field == Field::Complex) return fill(Complex{});
  return fill(double{});
}

template <typename T>
nlohmann::json system_to_json(const SystemModel<T>& model) {
  const FiberedSpace& space = model.space;
  nlohmann::json elements = nlohmann::json::array();
  for (std::size_t n = 0; n < model.system.size(); ++n) {
    const T* column = model.system.column(n);
    nlohmann::json blocks = nlohmann::json::array();
    for (std::size_t i = 0; i < space.atoms(); ++i) {
      nlohmann::json block = nlohmann::json::array();
      for (std::size_t c = 0; c < space.dim(i); ++c) block.push_back(scalar_json(column[space.offset(i) + c]));
      blocks.push_back(std::move(block));
    }
    elements.push_back(std::move(blocks));
  }
  return {{"schema_version", kSystemSchemaVersion},
          {"field", to_string(space.field())},
          {"weights", space.measure().weights()},
          {"dims", space.fibers().dims()},
          {"elements", std::move(elements)}};
}

AnyModel system_from_json(const nlohmann::json& j) {
  try {
    const int version = j.value("schema_version", kSystemSchemaVersion);
    if (version != kSystemSchemaVersion) {
      throw ParseError("unsupported system schema_version " + std::to_string(version), 0, 0);
    }
    const Field field = field_from_string(j.at("field").get<std::string>());
    FiberedSpace space(MeasureSpace(j.at("weights").get<std::vector<double>>()),
                       HilbertCollection(j.at("dims").get<std::vector<std::size_t>>(), field));
    if (field == Field::Complex) return model_from_json<Complex>(j, std::move(space));
    return model_from_json<double>(j, std::move(space));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed system JSON: ") + e.what(), 0, 0);
  }
}

nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("invalid JSON", line, column);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AnyModel read_system_file(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
    return read_system_csv(in);
  }
  return system_from_json(parse_json_text(read_text_file(path)));
}

std::vector<Complex> read_coefficients_csv(std::istream& is) {
  std::vector<Complex> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (blank_or_comment(line)) continue;
    const auto cells = split_cells(line);
    if (cells.size() > 2) throw ParseError("expected 're' or 're,im'", line_no, cells[2].column);
    const double re = parse_double(cells[0], line_no);
    const double im = cells.size() == 2 ? parse_double(cells[1], line_no) : 0.0;
    out.emplace_back(re, im);
  }
  if (out.empty()) throw ParseError("coefficient file has no values", line_no, 0);
  return out;
}

std::vector<Complex> read_coefficients_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  return read_coefficients_csv(in);
}

template void write_system_csv<double>(std::ostream&, const SystemModel<double>&);
template void write_system_csv<Complex>(std::ostream&, const SystemModel<Complex>&);
template nlohmann::json system_to_json<double>(const SystemModel<double>&);
template nlohmann::json system_to_json<Complex>(const SystemModel<Complex>&);

}  // namespace orthoseries
