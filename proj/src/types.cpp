#include "hybridk/types.hpp"

#include <cmath>
#include <sstream>

namespace hybridk {

Power power_from_int(int z) {
  if (z == 1) return Power::kLinear;
  if (z == 2) return Power::kSquared;
  throw InvalidInput("power z must be 1 or 2, got " + std::to_string(z));
}

PointSet::PointSet(std::initializer_list<Point> points) {
  if (points.size() == 0) return;
  dim_ = points.begin()->dim();
  for (const Point& p : points) push_back(p.coords());
}

PointSet::PointSet(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (dim_ == 0 || data_.size() % dim_ != 0) {
    throw InvalidInput("row-major buffer does not hold whole points of dimension " +
                       std::to_string(dim_));
  }
}

void PointSet::push_back(std::span<const double> p) {
  if (dim_ == 0 && data_.empty()) dim_ = p.size();
  if (p.size() != dim_ || dim_ == 0) {
    throw InvalidInput("point of dimension " + std::to_string(p.size()) +
                       " added to a set of dimension " + std::to_string(dim_));
  }
  data_.insert(data_.end(), p.begin(), p.end());
}

PointSet PointSet::select(std::span<const std::size_t> indices) const {
  PointSet out(dim_);
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back((*this)[i]);
  return out;
}

void Instance::validate() const {
  if (k < 1) throw InvalidInput("k must be at least 1");
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("r must be a finite non-negative real");
  if (points.empty()) throw InvalidInput("instance has no points");
  for (double c : points.row_major()) {
    if (!std::isfinite(c)) throw InvalidInput("instance contains a non-finite coordinate");
  }
}

std::string to_string(std::span<const double> p) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (std::size_t j = 0; j < p.size(); ++j) out << (j ? ", " : "") << p[j];
  out << ')';
  return out.str();
}

}  // namespace hybridk
