#include "hybridk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hybridk {

namespace {

void check_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw InvalidInput("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

double sq_dist(std::span<const double> p, std::span<const double> q) {
  double acc = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double diff = p[j] - q[j];
    acc = acc + diff * diff;
  }
  return acc;
}

double thresholded(double d, double r, Power z) {
  const double t = std::max(d - r, 0.0);
  return z == Power::kSquared ? t * t : t;
}

void check_radius(double r) {
  if (!(r >= 0.0)) throw InvalidInput("radius must be non-negative");
}

}  // namespace

double dist(std::span<const double> p, std::span<const double> q) {
  check_same_dim(p.size(), q.size());
  return std::sqrt(sq_dist(p, q));
}

double dist_r(std::span<const double> p, std::span<const double> q, double r, Power z) {
  check_radius(r);
  return thresholded(dist(p, q), r, z);
}

double cost(const PointSet& points, const PointSet& centers, double r, Power z) {
  if (centers.empty()) throw InvalidInput("cost of an empty center set is undefined");
  check_radius(r);
  if (points.empty()) return 0.0;
  check_same_dim(points.dim(), centers.dim());
  return CostEvaluator(points).cost(centers, r, z);
}

Assignment assign_clusters(const PointSet& points, const PointSet& centers, double r, Power z) {
  if (centers.empty()) throw InvalidInput("cannot assign points to an empty center set");
  check_radius(r);
  Assignment out;
  out.owner.resize(points.size());
  out.per_point_cost.resize(points.size());
  if (points.empty()) return out;
  check_same_dim(points.dim(), centers.dim());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t owner = 0;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d2 = sq_dist(points[i], centers[c]);
      if (d2 < best) {
        best = d2;
        owner = c;
      }
    }
    out.owner[i] = owner;
    out.per_point_cost[i] = thresholded(std::sqrt(best), r, z);
  }
  return out;
}

PointSet grid_points(std::span<const double> p, double lambda, double tau, GridAnchor anchor) {
  if (!(tau > 0.0) || !(tau <= lambda) || !std::isfinite(lambda)) {
    throw InvalidInput("grid requires 0 < tau <= lambda");
  }
  const std::size_t d = p.size();
  if (d == 0) throw InvalidInput("grid around a zero-dimensional point");
  const double side = tau / std::sqrt(static_cast<double>(d));

  std::vector<double> origin(d, 0.0);
  if (anchor == GridAnchor::kPoint) origin.assign(p.begin(), p.end());

  std::vector<long long> lo(d), hi(d);
  for (std::size_t j = 0; j < d; ++j) {
    lo[j] = static_cast<long long>(std::floor((p[j] - lambda - origin[j]) / side));
    hi[j] = static_cast<long long>(std::floor((p[j] + lambda - origin[j]) / side));
  }

  const double lambda2 = lambda * lambda;
  PointSet out(d);
  std::vector<long long> idx(lo);
  std::vector<double> center(d);
  while (true) {
    // Infimum of |q - p|^2 over the half-open cell; the infimum is attained
    // unless the closest face is an open (upper) one.
    double gap2 = 0.0;
    bool attained = true;
    for (std::size_t j = 0; j < d; ++j) {
      const double cell_lo = origin[j] + static_cast<double>(idx[j]) * side;
      const double cell_hi = origin[j] + static_cast<double>(idx[j] + 1) * side;
      double gap = 0.0;
      if (p[j] < cell_lo) {
        gap = cell_lo - p[j];
      } else if (p[j] >= cell_hi) {
        gap = p[j] - cell_hi;
        attained = false;
      }
      gap2 += gap * gap;
      center[j] = origin[j] + (static_cast<double>(idx[j]) + 0.5) * side;
    }
    if (gap2 < lambda2 || (gap2 == lambda2 && attained)) out.push_back(center);

    std::size_t j = 0;
    while (j < d && idx[j] == hi[j]) {
      idx[j] = lo[j];
      ++j;
    }
    if (j == d) break;
    ++idx[j];
  }
  return out;
}

double grid_cardinality_bound(std::size_t dim, double lambda, double tau) {
  const double per_axis = std::ceil(2.0 * lambda * std::sqrt(static_cast<double>(dim)) / tau) + 1.0;
  return std::pow(per_axis, static_cast<double>(dim));
}

double grid_spacing_for_budget(std::size_t dim, double lambda, double tau, double max_points) {
  double spacing = tau;
  while (spacing < lambda && grid_cardinality_bound(dim, lambda, spacing) > max_points) {
    spacing *= 1.1;
  }
  return std::min(spacing, lambda);
}

double max_pairwise_distance(const PointSet& points) {
  if (points.empty()) throw InvalidInput("max pairwise distance of an empty set");
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::max(best, sq_dist(points[i], points[j]));
    }
  }
  return std::sqrt(best);
}

double min_nonzero_pairwise_distance(const PointSet& points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d2 = sq_dist(points[i], points[j]);
      if (d2 > 0.0) best = std::min(best, d2);
    }
  }
  return std::isinf(best) ? 0.0 : std::sqrt(best);
}

CostEvaluator::CostEvaluator(const PointSet& points, const kernels::KernelTable& table)
    : block_(points.dim(), points.row_major()), table_(&table), scratch_(points.size()) {}

std::vector<double> CostEvaluator::empty_distances() const {
  return std::vector<double>(block_.size(), std::numeric_limits<double>::infinity());
}

void CostEvaluator::add_center(std::span<const double> center, std::span<double> best) const {
  table_->min_sq_dist(block_, center.data(), best.data());
}

double CostEvaluator::total(std::span<const double> best, double r, Power z) const {
  table_->thresholded_power(best.data(), best.size(), r, to_int(z), scratch_.data());
  double sum = 0.0;
  for (std::size_t i = 0; i < best.size(); ++i) sum += scratch_[i];
  return sum;
}

double CostEvaluator::cost(const PointSet& centers, double r, Power z) const {
  if (centers.empty()) return std::numeric_limits<double>::infinity();
  std::vector<double> best = empty_distances();
  for (std::size_t c = 0; c < centers.size(); ++c) add_center(centers[c], best);
  return total(best, r, z);
}

}  // namespace hybridk
