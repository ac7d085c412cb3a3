#pragma once

// Brute-force ground truth. Nothing here calls into preprocess or solver.

#include <cstddef>
#include <cstdint>
#include <utility>

#include "hybridk/types.hpp"

namespace hybridk::oracle {

inline constexpr std::uint64_t kDefaultBudget = 50'000'000;

struct OracleResult {
  PointSet centers;
  double cost = 0.0;
  // Number of candidate centers (discrete) or evaluated box tuples (refinement).
  std::size_t candidate_count = 0;
  // Coverage radius of the candidate grid; 0 for a caller-supplied candidate set.
  double grid_resolution = 0.0;
};

/// Exact minimum of cost(P, F, r, z) over every subset F of `candidates` with
/// |F| <= k. Ties resolve to the lexicographically smallest index tuple.
/// Throws BudgetExceeded when C(|candidates|, min(k, |candidates|)) > budget.
OracleResult brute_force_discrete(const PointSet& points, int k, double r, Power z,
                                  const PointSet& candidates,
                                  std::uint64_t budget = kDefaultBudget);

/// Approximates the continuous optimum over R^d, searching the bounding box
/// of P inflated by r (which holds an optimal center set). When the grid of
/// coverage radius `resolution` over that box is small it is enumerated
/// directly. Otherwise a certified branch-and-bound runs over tuples of
/// dyadic sub-boxes: points whose nearest box is settled form convex
/// per-box problems with exact lower bounds, and a tuple is dropped once it
/// cannot beat the incumbent by more than |P| * resolution. Either way the
/// returned cost is at most OPT + |P| * resolution. Throws BudgetExceeded
/// when the evaluation count would exceed `budget`.
OracleResult brute_force_continuous(const PointSet& points, int k, double r, Power z,
                                    double resolution, std::uint64_t budget = kDefaultBudget);

/// 1-median (z = 1) or 1-means (z = 2) of X with additive error <= |X| * resolution.
std::pair<Point, double> one_median_exact(const PointSet& points, double resolution,
                                          Power z = Power::kLinear,
                                          std::uint64_t budget = kDefaultBudget);

/// Radius of the smallest enclosing ball (exact, Welzl).
double min_enclosing_radius(const PointSet& points);

/// Optimal continuous k-center radius by enumerating all partitions of P.
/// Requires |P| <= 16.
double kcenter_radius_exact(const PointSet& points, int k);

}  // namespace hybridk::oracle
