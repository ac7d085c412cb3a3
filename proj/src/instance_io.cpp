#include "hybridk/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <vector>

namespace hybridk::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_coordinate(const std::string& text, std::size_t line) {
  const std::string field = trim(text);
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, "'" + field + "' is not a decimal number");
  }
  if (!std::isfinite(value)) throw ParseError(line, "coordinate is not finite");
  return value;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : InvalidInput(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

PointSet parse_points(std::istream& in) {
  std::string text;
  if (!std::getline(in, text)) throw ParseError(1, "missing header");
  static const std::regex header(R"(\s*d\s*=\s*(\d+)\s+n\s*=\s*(\d+)\s*)");
  std::smatch match;
  const std::string head = trim(text);
  if (!std::regex_match(head, match, header)) {
    throw ParseError(1, "header must read 'd=<int> n=<int>'");
  }
  const std::size_t d = std::stoull(match[1].str());
  const std::size_t n = std::stoull(match[2].str());
  if (d == 0) throw ParseError(1, "dimension must be at least 1");

  PointSet points(d);
  points.reserve(n);
  std::vector<double> row(d);
  std::size_t line = 1;
  while (points.size() < n) {
    ++line;
    if (!std::getline(in, text)) {
      throw ParseError(line, "expected " + std::to_string(n) + " rows, found " +
                                 std::to_string(points.size()));
    }
    std::size_t j = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      const std::string field = text.substr(start, comma == std::string::npos ? comma : comma - start);
      if (j == d) throw ParseError(line, "more than " + std::to_string(d) + " coordinates");
      row[j++] = parse_coordinate(field, line);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (j != d) {
      throw ParseError(line, "expected " + std::to_string(d) + " coordinates, found " + std::to_string(j));
    }
    points.push_back(row);
  }
  while (std::getline(in, text)) {
    ++line;
    if (!trim(text).empty()) throw ParseError(line, "more rows than the header declares");
  }
  return points;
}

PointSet read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_points(in);
}

void write_points(std::ostream& out, const PointSet& points) {
  out << "d=" << points.dim() << " n=" << points.size() << '\n';
  char buffer[40];
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.dim(); ++j) {
      std::snprintf(buffer, sizeof buffer, "%.17g", points[i][j]);
      if (j > 0) out << ',';
      out << buffer;
    }
    out << '\n';
  }
}

void write_points(const std::string& path, const PointSet& points) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  write_points(out, points);
}

}  // namespace hybridk::io
