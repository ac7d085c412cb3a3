#include "hybridk/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hybridk/geometry.hpp"

namespace hybridk::preprocess {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t binomial_capped(std::uint64_t m, std::uint64_t t, std::uint64_t cap) {
  if (t > m) return 0;
  t = std::min(t, m - t);
  long double acc = 1.0L;
  for (std::uint64_t i = 1; i <= t; ++i) {
    acc = acc * static_cast<long double>(m - t + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(std::llround(acc));
}

// Union of Grid(c, lambda, tau) over the centers, deduplicated. For z = 1 a
// cell can only matter when it lies within 2r + tau of some input point: in
// this regime every center of a minimal optimum has a point within 2r.
PointSet center_grids(const PointSet& points, const PointSet& centers, double lambda, double tau,
                      double r, Power z) {
  std::vector<std::vector<double>> rows;
  const double reach = 2.0 * r + tau;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const PointSet grid = grid_points(centers[c], lambda, tau);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      bool useful = z != Power::kLinear;
      for (std::size_t i = 0; !useful && i < points.size(); ++i) {
        useful = dist(grid[g], points[i]) <= reach;
      }
      if (useful) rows.emplace_back(grid[g].begin(), grid[g].end());
    }
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  PointSet out(points.dim());
  for (const auto& row : rows) out.push_back(row);
  return out;
}

// Lexicographic search over t-subsets of `candidates` minimizing cost_r.
class SubsetMinimizer {
 public:
  SubsetMinimizer(const CostEvaluator& eval, const PointSet& candidates, double r, Power z,
                  std::size_t t)
      : eval_(eval), candidates_(candidates), r_(r), z_(z), t_(t), chosen_(t) {
    prefix_.push_back(eval.empty_distances());
    for (std::size_t i = 0; i < t; ++i) prefix_.push_back(prefix_.front());
  }

  void run() { descend(0, 0); }
  const std::vector<std::size_t>& best() const { return best_; }

 private:
  void descend(std::size_t depth, std::size_t start) {
    for (std::size_t c = start; c + (t_ - depth) <= candidates_.size(); ++c) {
      std::vector<double>& current = prefix_[depth + 1];
      current = prefix_[depth];
      eval_.add_center(candidates_[c], current);
      chosen_[depth] = c;
      if (depth + 1 == t_) {
        const double value = eval_.total(current, r_, z_);
        if (value < best_cost_) {
          best_cost_ = value;
          best_ = chosen_;
        }
      } else {
        descend(depth + 1, c + 1);
      }
    }
  }

  const CostEvaluator& eval_;
  const PointSet& candidates_;
  double r_;
  Power z_;
  std::size_t t_;
  std::vector<std::vector<double>> prefix_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
  double best_cost_ = kInf;
};

// After a coarsened search: moves one center at a time to the best point of
// the target-spacing grid around it, others fixed, until no move helps.
PointSet refine_centers(const CostEvaluator& eval, PointSet centers, double coarse, double target,
                        double r, Power z) {
  constexpr int kMaxRounds = 8;
  double current = eval.cost(centers, r, z);
  for (int round = 0; round < kMaxRounds; ++round) {
    bool moved = false;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      std::vector<double> others = eval.empty_distances();
      for (std::size_t o = 0; o < centers.size(); ++o) {
        if (o != c) eval.add_center(centers[o], others);
      }
      const PointSet local = grid_points(centers[c], coarse, target);
      std::vector<double> trial;
      std::size_t best = local.size();
      for (std::size_t g = 0; g < local.size(); ++g) {
        trial = others;
        eval.add_center(local[g], trial);
        const double value = eval.total(trial, r, z);
        if (value < current) {
          current = value;
          best = g;
        }
      }
      if (best < local.size()) {
        std::vector<double> rows(centers.row_major().begin(), centers.row_major().end());
        std::copy(local[best].begin(), local[best].end(), rows.begin() + c * centers.dim());
        centers = PointSet(centers.dim(), std::move(rows));
        moved = true;
      }
    }
    if (!moved) break;
  }
  return centers;
}

}  // namespace

std::vector<OptGuess> opt_guess_ladder(const PointSet& points, int /*k*/, double /*r*/,
                                       double eps) {
  if (points.empty()) throw InvalidInput("guess ladder of an empty set");
  const double d_min = min_nonzero_pairwise_distance(points);
  if (points.size() < 2 || d_min == 0.0) return {OptGuess{0.0, 0}};
  const double n = static_cast<double>(points.size());
  const double lo = eps * d_min / (2.0 * n);
  const double hi = n * max_pairwise_distance(points);
  std::vector<OptGuess> ladder;
  for (int i = 0;; ++i) {
    const double value = std::ldexp(lo, i);
    if (value > hi * (1.0 + 1e-12)) break;
    ladder.push_back(OptGuess{value, i});
  }
  return ladder;
}

KCenterResult gonzalez_kcenter(const PointSet& points, int k) {
  if (points.empty()) throw InvalidInput("k-center of an empty set");
  if (k < 1) throw InvalidInput("k must be at least 1");
  KCenterResult out;
  out.centers = PointSet(points.dim());
  std::vector<double> nearest(points.size(), kInf);
  std::size_t next = 0;
  while (true) {
    const std::size_t added = next;
    out.indices.push_back(added);
    out.centers.push_back(points[added]);
    double farthest = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      nearest[i] = std::min(nearest[i], dist(points[i], points[added]));
      if (nearest[i] > farthest) {
        farthest = nearest[i];
        next = i;
      }
    }
    out.radius = farthest;
    if (out.centers.size() == static_cast<std::size_t>(k) || farthest == 0.0) break;
  }
  return out;
}

std::optional<CenterLikeResult> solve_center_like(const PointSet& points, int k, double r,
                                                  double eps, Power z,
                                                  const CenterLikeOptions& options) {
  if (!(r > 0.0)) throw InvalidInput("the k-center-like regime needs r > 0");
  if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
  const KCenterResult seeds = gonzalez_kcenter(points, k);
  if (seeds.radius > 4.0 * r) return std::nullopt;

  const double lambda = 6.0 * r;
  double tau = std::min(eps * r, lambda);
  PointSet candidates = center_grids(points, seeds.centers, lambda, tau, r, z);
  auto t_of = [&] { return std::min<std::size_t>(static_cast<std::size_t>(k), candidates.size()); };
  while (binomial_capped(candidates.size(), t_of(), options.subset_budget) > options.subset_budget) {
    if (!options.coarsen || tau >= lambda) {
      throw BudgetExceeded("k-center-like grid has " + std::to_string(candidates.size()) +
                           " candidates; subset enumeration exceeds the budget of " +
                           std::to_string(options.subset_budget));
    }
    tau = std::min(lambda, tau * 1.15);
    candidates = center_grids(points, seeds.centers, lambda, tau, r, z);
  }

  const CostEvaluator eval(points);
  SubsetMinimizer search(eval, candidates, r, z, t_of());
  search.run();

  CenterLikeResult out;
  out.solution.centers = candidates.select(search.best());
  const double target = std::min(eps * r, lambda);
  if (tau > target) {
    out.solution.centers = refine_centers(eval, out.solution.centers, tau, target, r, z);
  }
  out.solution.radius_factor = 1.0 + eps;
  out.solution.cost = eval.cost(out.solution.centers, (1.0 + eps) * r, z);
  out.grid_spacing = tau;
  out.candidate_count = candidates.size();
  return out;
}

Solution reduce_to_kmedian(const PointSet& points, int k, double r, double /*eps*/, Power z,
                           const KMedianSolver& kmedian_solver) {
  Solution out;
  out.centers = kmedian_solver(points, k);
  if (out.centers.empty()) throw InvalidInput("k-median solver returned no centers");
  if (out.centers.size() > static_cast<std::size_t>(k)) {
    throw InvalidInput("k-median solver returned more than k centers");
  }
  out.radius_factor = 1.0;
  out.cost = cost(points, out.centers, r, z);
  return out;
}

ComponentDecomposition discretize(const PointSet& points, int /*k*/, double r, double eps,
                                  double opt_guess) {
  if (points.empty()) throw InvalidInput("discretize of an empty set");
  const double n = static_cast<double>(points.size());
  if (!(opt_guess > 0.0)) throw RegimeError("discretization needs a positive cost estimate");
  if (r > opt_guess || r < eps * opt_guess / (2.0 * n)) {
    throw RegimeError("r is outside [eps * guess / 2n, guess] for guess " +
                      std::to_string(opt_guess));
  }

  const std::size_t count = points.size();
  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const double threshold = 2.0 * (opt_guess + r);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      if (dist(points[i], points[j]) <= threshold) {
        const std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  ComponentDecomposition out;
  std::vector<std::size_t> slot(count, count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t root = find(i);
    if (slot[root] == count) {
      slot[root] = out.members.size();
      out.members.emplace_back();
    }
    out.members[slot[root]].push_back(i);
  }
  for (const auto& member : out.members) out.components.push_back(points.select(member));

  out.snap_cell = eps * opt_guess / (std::sqrt(static_cast<double>(points.dim())) * n);
  out.snapped = PointSet(points.dim());
  std::vector<double> cell(points.dim());
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < points.dim(); ++j) {
      cell[j] = (std::floor(points[i][j] / out.snap_cell) + 0.5) * out.snap_cell;
    }
    out.snapped.push_back(cell);
  }
  return out;
}

BudgetAllocation combine_components(const std::vector<std::vector<double>>& table, int k) {
  if (k < 0) throw InvalidInput("negative center budget");
  const std::size_t comps = table.size();
  const auto budget = static_cast<std::size_t>(k);
  // best[c][b]: minimum total over the first c components using at most b centers.
  std::vector<std::vector<double>> best(comps + 1, std::vector<double>(budget + 1, kInf));
  std::vector<std::vector<int>> choice(comps + 1, std::vector<int>(budget + 1, -1));
  std::fill(best[0].begin(), best[0].end(), 0.0);
  for (std::size_t c = 0; c < comps; ++c) {
    for (std::size_t b = 0; b <= budget; ++b) {
      for (std::size_t give = 0; give <= b && give < table[c].size(); ++give) {
        const double value = best[c][b - give] + table[c][give];
        if (value < best[c + 1][b]) {
          best[c + 1][b] = value;
          choice[c + 1][b] = static_cast<int>(give);
        }
      }
    }
  }
  if (!std::isfinite(best[comps][budget])) {
    throw Infeasible(std::to_string(comps) + " components cannot share " + std::to_string(k) +
                     " centers at finite cost");
  }
  BudgetAllocation out;
  out.total = best[comps][budget];
  out.budgets.assign(comps, 0);
  std::size_t b = budget;
  for (std::size_t c = comps; c > 0; --c) {
    out.budgets[c - 1] = choice[c][b];
    b -= static_cast<std::size_t>(choice[c][b]);
  }
  return out;
}

}  // namespace hybridk::preprocess
