#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hybridk/geometry.hpp"
#include "hybridk/preprocess.hpp"
#include "hybridk/solver.hpp"

namespace hybridk::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream salts inside one repetition.
constexpr std::uint64_t kSaltKMedian = 0;
constexpr std::uint64_t kSaltSearch = 1;
constexpr std::uint64_t kSaltDiscretized = 2;

class Selection {
 public:
  Selection(const PointSet& points, double radius, Power z) : eval_(points), radius_(radius), z_(z) {}

  void consider(const PointSet& centers, Route route) {
    ++considered_;
    if (centers.empty()) return;
    const double value = eval_.cost(centers, radius_, z_);
    if (better(value, centers, cost_, centers_)) {
      cost_ = value;
      centers_ = centers;
      route_ = route;
    }
  }

  double cost() const { return cost_; }
  bool empty() const { return centers_.empty(); }
  PipelineResult result(double radius_factor) const {
    return PipelineResult{Solution{centers_, radius_factor, cost_}, route_, considered_};
  }

 private:
  CostEvaluator eval_;
  double radius_;
  Power z_;
  double cost_ = kInf;
  PointSet centers_;
  Route route_ = Route::kSearch;
  std::size_t considered_ = 0;
};

Solution search_from_scratch(const PointSet& points, int k, double r, const ResolvedConfig& config,
                             Power z, const RandomStream& rng) {
  SearchState state{PointSet(points.dim()), k, rng};
  return hybrid_clustering(state, points, k, r, config, z);
}

// One candidate per guess whose decomposition splits P. Each component is
// searched on its snapped points with every budget it could use, and the DP
// picks the split; the union of the picked center sets is the candidate.
void run_discretized(const Instance& instance, const ResolvedConfig& config, const RandomStream& rng,
                     Selection& selection) {
  const PointSet& points = instance.points;
  const double r = instance.r;
  const double eps = config.base.eps;
  const double n = static_cast<double>(points.size());
  const double radius = (1.0 + eps) * r;

  std::vector<std::vector<std::size_t>> previous;
  const auto ladder = preprocess::opt_guess_ladder(points, instance.k, r, eps);
  for (const auto& guess : ladder) {
    // A guess above a cost already achieved cannot be within a factor 2 of
    // the optimum from above.
    if (guess.value < r || guess.value > 2.0 * n * r / eps || guess.value > selection.cost()) {
      continue;
    }
    preprocess::ComponentDecomposition parts;
    try {
      parts = preprocess::discretize(points, instance.k, r, eps, guess.value);
    } catch (const RegimeError&) {
      continue;
    }
    const std::size_t comps = parts.components.size();
    if (comps > static_cast<std::size_t>(instance.k)) continue;
    // A single component is P up to snapping, which the search on P already
    // covers; practical mode also skips a partition seen at a smaller guess.
    if (config.practical() && (comps == 1 || parts.members == previous)) continue;
    previous = parts.members;

    const RandomStream guess_rng = rng.split(static_cast<std::uint64_t>(guess.index));
    std::vector<std::vector<double>> table(comps, std::vector<double>(instance.k + 1, kInf));
    std::vector<std::vector<PointSet>> picked(comps, std::vector<PointSet>(instance.k + 1));
    for (std::size_t c = 0; c < comps; ++c) {
      const PointSet snapped = parts.snapped_component(c);
      const CostEvaluator original(parts.components[c]);
      const int most = comps == 1 ? instance.k
                                  : std::min(instance.k, static_cast<int>(snapped.size()));
      const int least = comps == 1 ? instance.k : 1;
      for (int b = least; b <= most; ++b) {
        const RandomStream cell_rng =
            guess_rng.split(c * static_cast<std::uint64_t>(instance.k + 1) + static_cast<std::uint64_t>(b));
        try {
          const ResolvedConfig local = resolve(config.base, b);
          const Solution found = search_from_scratch(snapped, b, r, local, instance.z, cell_rng);
          table[c][b] = original.cost(found.centers, radius, instance.z);
          picked[c][b] = found.centers;
        } catch (const Infeasible&) {
        }
      }
    }

    preprocess::BudgetAllocation allocation;
    try {
      allocation = preprocess::combine_components(table, instance.k);
    } catch (const Infeasible&) {
      continue;
    }
    PointSet merged(points.dim());
    for (std::size_t c = 0; c < comps; ++c) {
      const PointSet& part = picked[c][allocation.budgets[c]];
      for (std::size_t i = 0; i < part.size(); ++i) merged.push_back(part[i]);
    }
    selection.consider(merged, Route::kDiscretized);
  }
}

}  // namespace

PipelineResult full_pipeline(const Instance& instance, const AlgoConfig& config) {
  instance.validate();
  const ResolvedConfig resolved = resolve(config, instance.k);
  const PointSet& points = instance.points;
  const double r = instance.r;
  const double eps = resolved.base.eps;
  Selection selection(points, (1.0 + eps) * r, instance.z);

  if (r > 0.0) {
    try {
      preprocess::CenterLikeOptions options;
      options.subset_budget = resolved.base.center_like_budget;
      options.coarsen = resolved.practical();
      if (auto found = preprocess::solve_center_like(points, instance.k, r, eps, instance.z, options)) {
        selection.consider(found->solution.centers, Route::kCenterLike);
      }
    } catch (const BudgetExceeded&) {
    }
  }

  for (int rep = 0; rep < resolved.base.repetitions; ++rep) {
    const RandomStream rng(mix_seed(resolved.base.seed, static_cast<std::uint64_t>(rep)));

    const RandomStream kmedian_rng = rng.split(kSaltKMedian);
    const preprocess::KMedianSolver kmedian = [&](const PointSet& p, int k) {
      return search_from_scratch(p, k, 0.0, resolved, instance.z, kmedian_rng).centers;
    };
    selection.consider(
        preprocess::reduce_to_kmedian(points, instance.k, r, eps, instance.z, kmedian).centers,
        Route::kKMedian);

    // With r = 0 the search on P is the k-median run above.
    if (r > 0.0) {
      selection.consider(
          search_from_scratch(points, instance.k, r, resolved, instance.z, rng.split(kSaltSearch)).centers,
          Route::kSearch);
      run_discretized(instance, resolved, rng.split(kSaltDiscretized), selection);
    }
  }

  if (selection.empty()) throw Infeasible("no candidate solution was produced");
  return selection.result(1.0 + eps);
}

}  // namespace hybridk::solver
