#pragma once

// Exact, deterministic primitives: distances, the hybrid objective, cluster
// assignment and grid candidate generation. All functions are pure.

#include <cstddef>
#include <span>
#include <vector>

#include "hybridk/kernels.hpp"
#include "hybridk/types.hpp"

namespace hybridk {

/// Euclidean distance. Throws InvalidInput on dimension mismatch.
double dist(std::span<const double> p, std::span<const double> q);

/// max(dist(p, q) - r, 0)^z. Throws InvalidInput on r < 0.
double dist_r(std::span<const double> p, std::span<const double> q, double r, Power z);

/// Sum over p of dist_r(p, nearest center), accumulated in point-index order.
/// Throws InvalidInput on empty `centers`, negative r or dimension mismatch.
double cost(const PointSet& points, const PointSet& centers, double r, Power z);

/// Nearest-center partition of `points`; ties go to the lowest center index.
Assignment assign_clusters(const PointSet& points, const PointSet& centers, double r = 0.0,
                           Power z = Power::kLinear);

enum class GridAnchor {
  kOrigin,  // cells [i*s, (i+1)*s) on every axis
  kPoint,   // cells [p_j + i*s, p_j + (i+1)*s)
};

/// Grid(p, lambda, tau): the center of every half-open cell of side tau/sqrt(d)
/// that contains a point of the closed ball B(p, lambda). Every point of the
/// ball is within tau/2 of the output. Requires 0 < tau <= lambda.
PointSet grid_points(std::span<const double> p, double lambda, double tau,
                     GridAnchor anchor = GridAnchor::kOrigin);

/// (ceil(2 lambda sqrt(d) / tau) + 1)^d, saturating.
double grid_cardinality_bound(std::size_t dim, double lambda, double tau);

/// Smallest spacing >= tau whose cardinality bound fits in `max_points`,
/// clamped to lambda.
double grid_spacing_for_budget(std::size_t dim, double lambda, double tau, double max_points);

/// Largest pairwise distance; 0 for a singleton. Throws on empty input.
double max_pairwise_distance(const PointSet& points);

/// Smallest nonzero pairwise distance, or 0 when all points coincide.
double min_nonzero_pairwise_distance(const PointSet& points);

/// Repeated cost evaluation against a fixed point set. Keeps an axis-major
/// copy of the points and runs the dispatched kernels; results are identical
/// to `cost`.
class CostEvaluator {
 public:
  explicit CostEvaluator(const PointSet& points,
                         const kernels::KernelTable& table = kernels::active());

  std::size_t size() const { return block_.size(); }
  std::size_t dim() const { return block_.dim(); }

  /// Per-point squared distance to the empty center set (+inf).
  std::vector<double> empty_distances() const;

  /// best[i] = min(best[i], |p_i - center|^2).
  void add_center(std::span<const double> center, std::span<double> best) const;

  /// Sum of max(sqrt(best[i]) - r, 0)^z in index order.
  double total(std::span<const double> best, double r, Power z) const;

  double cost(const PointSet& centers, double r, Power z) const;

 private:
  kernels::ColumnBlock block_;
  const kernels::KernelTable* table_;
  mutable std::vector<double> scratch_;
};

}  // namespace hybridk
