#pragma once

// Recursive candidate search for hybrid k-clustering and the pipeline that
// combines it with the regime-specific preprocessing.

#include <cstddef>
#include <cstdint>
#include <string>

#include "hybridk/random.hpp"
#include "hybridk/types.hpp"

namespace hybridk::solver {

enum class Mode {
  kTheory,     // the analysis' parameter formulas; refuses oversized work
  kPractical,  // capped grids, samples and branching
};

Mode mode_from_string(const std::string& name);
std::string to_string(Mode mode);

/// Knobs of the search. Zero for delta, delta_prime or beta_prime selects the
/// default derived from eps and k.
struct AlgoConfig {
  double eps = 0.5;
  std::uint64_t seed = 0;
  double delta = 0.0;        // default eps / (10 k)
  double delta_prime = 0.0;  // default delta / 3
  int beta = 4;              // size of the subsets handed to the 1-median routine
  int beta_prime = 0;        // sample size; default 30 k beta (capped by |P_q|)
  std::size_t branch_cap = 24;
  std::size_t subset_cap = 8;
  std::size_t grid_cap = 9;  // practical mode: points per grid
  int repetitions = 10;
  Mode mode = Mode::kPractical;
  // Theory mode refuses when a grid, a subset family or a candidate set
  // would exceed this many elements.
  std::uint64_t theory_budget = 5'000'000;
  // Subset enumeration budget of the k-center-like step.
  std::uint64_t center_like_budget = 200'000;
};

/// AlgoConfig with every derived value filled in for a given k.
struct ResolvedConfig {
  AlgoConfig base;
  int k = 1;
  double delta = 0.0;
  double delta_prime = 0.0;
  std::size_t beta = 1;
  std::size_t beta_prime = 1;

  bool practical() const { return base.mode == Mode::kPractical; }
};

/// Validates (0 < eps < 1, 0 < delta < 1/2, beta <= beta_prime, caps >= 1)
/// and fills defaults. Throws InvalidInput.
ResolvedConfig resolve(const AlgoConfig& config, int k);

/// Partial solution of the recursion: `chosen` has at most k - remaining centers.
struct SearchState {
  PointSet chosen;
  int remaining = 0;
  RandomStream rng{0};
};

/// Candidate 1-median (z = 1) or 1-means (z = 2) center from a sample S: the
/// best of S itself, the means of all subsets of S up to size ceil(1/delta),
/// and 30 Weiszfeld steps (z = 1) or the centroid (z = 2), judged by cost over S.
Point approx_solution_on_sample(const PointSet& sample, double delta, Power z);

/// Candidate centers for the next pick: grids around chosen centers, and per
/// distance scale q a sample of the points farther than q from every chosen
/// center, grids around the sampled points and 1-median candidates of
/// beta-subsets of the sample. Deduplicated; never contains a chosen center.
PointSet build_candidate_set(const SearchState& state, const PointSet& points, double r,
                             const ResolvedConfig& config, Power z = Power::kLinear);

/// Best center set over the recursion tree rooted at `state`, judged by cost
/// at radius (1 + delta') r. The result has at most k centers and its
/// radius_factor is 1 + delta'. Deterministic given the state's stream.
Solution hybrid_clustering(const SearchState& state, const PointSet& points, int k, double r,
                           const ResolvedConfig& config, Power z = Power::kLinear);

/// Which route produced the pipeline's answer.
enum class Route { kCenterLike, kKMedian, kSearch, kDiscretized };
std::string to_string(Route route);

struct PipelineResult {
  Solution solution;  // evaluated at radius factor 1 + eps on the original points
  Route route = Route::kSearch;
  std::size_t candidates_considered = 0;
};

/// Collects candidates from the k-center-like step, the k-median reduction,
/// the search on P, and the search on each discretized instance of every
/// cost guess; returns the cheapest at radius (1 + eps) r.
PipelineResult full_pipeline(const Instance& instance, const AlgoConfig& config);

/// Strict total order on (cost, centers) so that reductions never depend on
/// evaluation order.
bool better(double cost_a, const PointSet& a, double cost_b, const PointSet& b);

}  // namespace hybridk::solver
