#pragma once

// Plain-text point files: a "d=<int> n=<int>" header followed by n rows of d
// comma-separated decimals.

#include <cstddef>
#include <iosfwd>
#include <string>

#include "hybridk/types.hpp"

namespace hybridk::io {

/// Malformed file. `line()` is 1-based; 0 when the file could not be opened.
class ParseError : public InvalidInput {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

PointSet parse_points(std::istream& in);
PointSet read_points(const std::string& path);

/// Coordinates are written with 17 significant digits so they read back exactly.
void write_points(std::ostream& out, const PointSet& points);
void write_points(const std::string& path, const PointSet& points);

}  // namespace hybridk::io
