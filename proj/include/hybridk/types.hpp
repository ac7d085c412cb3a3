#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybridk {

// Error taxonomy shared by every module. The CLI maps these onto its exit codes.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed its configured budget. Never silently truncated.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No allocation of centers can serve the instance (e.g. fewer centers than components).
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A regime-specific step was called outside the regime it is valid for.
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Distance power of the objective: 1 is the hybrid k-median objective,
/// 2 thresholds then squares every per-point term.
enum class Power : int { kLinear = 1, kSquared = 2 };

Power power_from_int(int z);
inline int to_int(Power z) { return static_cast<int>(z); }

/// An owning coordinate vector in R^d.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : coords_(coords) {}
  explicit Point(std::span<const double> coords) : coords_(coords.begin(), coords.end()) {}

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t j) const { return coords_[j]; }
  double& operator[](std::size_t j) { return coords_[j]; }
  std::span<const double> coords() const { return coords_; }
  operator std::span<const double>() const { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

/// Ordered multiset of points of one dimension, stored row-major.
/// Duplicates are separate entries.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::initializer_list<Point> points);
  PointSet(std::size_t dim, std::vector<double> row_major);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  Point point(std::size_t i) const { return Point((*this)[i]); }

  void push_back(std::span<const double> p);
  void reserve(std::size_t n) { data_.reserve(n * dim_); }
  void clear() { data_.clear(); }
  std::span<const double> row_major() const { return data_; }

  /// Subset in the order given by `indices`.
  PointSet select(std::span<const std::size_t> indices) const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// One problem instance (P, k, r, z).
struct Instance {
  PointSet points;
  int k = 1;
  double r = 0.0;
  Power z = Power::kLinear;

  // Throws InvalidInput on k < 1, r < 0, empty or non-finite points.
  void validate() const;
};

/// A center set together with the radius factor it was evaluated at.
/// `cost` is cost_{radius_factor * r}(P, centers).
struct Solution {
  PointSet centers;
  double radius_factor = 1.0;
  double cost = 0.0;
};

/// Per-point nearest-center owner (ties to the lowest index) and d_r value.
struct Assignment {
  std::vector<std::size_t> owner;
  std::vector<double> per_point_cost;
};

std::string to_string(std::span<const double> p);

}  // namespace hybridk
