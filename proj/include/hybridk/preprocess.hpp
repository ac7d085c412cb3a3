#pragma once

// Regime detection and aspect-ratio reduction run before the main search:
// k-center-like instances (r above the optimum) are solved on a grid around a
// 2-approximate k-center, k-median-like instances (r tiny next to the
// optimum) reuse a plain k-median solution, and everything in between is
// snapped to a grid and split into far-apart components.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hybridk/types.hpp"

namespace hybridk::preprocess {

/// One rung of the geometric ladder of optimum-cost estimates.
struct OptGuess {
  double value = 0.0;
  int index = 0;
};

/// Guesses lo * 2^i covering [eps * d_min / (2n), n * d_max], where d_min is
/// the smallest nonzero pairwise distance. A single zero guess when all points
/// coincide (or n < 2).
std::vector<OptGuess> opt_guess_ladder(const PointSet& points, int k, double r, double eps);

struct KCenterResult {
  PointSet centers;
  std::vector<std::size_t> indices;
  double radius = 0.0;
};

/// Farthest-first traversal seeded at point 0 (a 2-approximation).
KCenterResult gonzalez_kcenter(const PointSet& points, int k);

struct CenterLikeOptions {
  // Upper bound on the number of center subsets enumerated.
  std::uint64_t subset_budget = 2'000'000;
  // When false the eps*r grid is used as is and an oversized enumeration
  // throws BudgetExceeded; when true the grid is coarsened to fit.
  bool coarsen = true;
};

struct CenterLikeResult {
  Solution solution;          // evaluated at radius factor 1 + eps
  double grid_spacing = 0.0;  // achieved coverage radius of the candidate grid
  std::size_t candidate_count = 0;
};

/// k-center-like regime. Returns nullopt when P does not fit in k balls of
/// radius 4r around the farthest-first centers.
std::optional<CenterLikeResult> solve_center_like(const PointSet& points, int k, double r,
                                                  double eps, Power z,
                                                  const CenterLikeOptions& options = {});

/// Returns a k-median center set (r = 0) for the given points and budget.
using KMedianSolver = std::function<PointSet(const PointSet& points, int k)>;

/// k-median-like regime: the k-median solution re-evaluated at radius r.
Solution reduce_to_kmedian(const PointSet& points, int k, double r, double eps, Power z,
                           const KMedianSolver& kmedian_solver);

struct ComponentDecomposition {
  std::vector<PointSet> components;              // original points per component
  std::vector<std::vector<std::size_t>> members;  // indices into P per component
  PointSet snapped;                              // P' in the order of P
  double snap_cell = 0.0;

  PointSet snapped_component(std::size_t c) const { return snapped.select(members[c]); }
};

/// Splits P into components of the graph joining points within
/// 2 (opt_guess + r) and snaps every point to the center of its grid cell of
/// side eps * opt_guess / (sqrt(d) n). Throws RegimeError unless
/// eps * opt_guess / (2n) <= r <= opt_guess.
ComponentDecomposition discretize(const PointSet& points, int k, double r, double eps,
                                  double opt_guess);

struct BudgetAllocation {
  std::vector<int> budgets;
  double total = 0.0;
};

/// Splits at most k centers across components. table[c][b] is the best cost
/// of component c with b centers (b = 0..k; b = 0 is +inf for a non-empty
/// component). Throws Infeasible when no split has finite cost.
BudgetAllocation combine_components(const std::vector<std::vector<double>>& table, int k);

}  // namespace hybridk::preprocess
