#include "hybridk/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hybridk/geometry.hpp"

namespace hybridk::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Random-stream salts for the parts of one search node.
constexpr std::uint64_t kSaltCandidates = 0;
constexpr std::uint64_t kSaltEmptyBranch = 1;
constexpr std::uint64_t kSaltChildBase = 2;

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

struct SearchContext {
  const PointSet& points;
  CostEvaluator eval;
  double r;
  double r_eval;  // (1 + delta') r
  Power z;
  const ResolvedConfig& config;
  double d_max;
  double q_floor;  // smallest distance scale of the q ladder

  SearchContext(const PointSet& p, double radius, Power power, const ResolvedConfig& cfg)
      : points(p), eval(p), r(radius), r_eval((1.0 + cfg.delta_prime) * radius), z(power),
        config(cfg), d_max(max_pairwise_distance(p)) {
    // With r = 0 the ladder [8r, d_max] has no bottom; start it at half the
    // closest pair instead.
    q_floor = r > 0.0 ? 8.0 * r : 0.5 * min_nonzero_pairwise_distance(p);
  }
};

void add_grid(const SearchContext& ctx, std::span<const double> center, double lambda, double tau,
              std::vector<std::vector<double>>& rows) {
  const std::size_t d = ctx.points.dim();
  if (ctx.config.practical()) {
    tau = grid_spacing_for_budget(d, lambda, tau, static_cast<double>(ctx.config.base.grid_cap));
  } else if (grid_cardinality_bound(d, lambda, tau) >
             static_cast<double>(ctx.config.base.theory_budget)) {
    throw BudgetExceeded("grid of radius " + std::to_string(lambda) + " and spacing " +
                         std::to_string(tau) + " exceeds the theory-mode budget");
  }
  const PointSet grid = grid_points(center, lambda, tau);
  for (std::size_t g = 0; g < grid.size(); ++g) rows.emplace_back(grid[g].begin(), grid[g].end());
}

// beta-subsets of {0..m-1}: all of them lexicographically when they fit the
// cap, otherwise `cap` seeded random ones.
std::vector<std::vector<std::size_t>> choose_subsets(std::size_t m, std::size_t beta,
                                                     std::size_t cap, RandomStream& rng) {
  std::vector<std::vector<std::size_t>> out;
  if (m <= beta) {
    std::vector<std::size_t> all(m);
    for (std::size_t i = 0; i < m; ++i) all[i] = i;
    out.push_back(std::move(all));
    return out;
  }
  if (binomial_capped(m, beta, cap) <= cap) {
    std::vector<std::size_t> idx(beta);
    for (std::size_t i = 0; i < beta; ++i) idx[i] = i;
    while (true) {
      out.push_back(idx);
      std::size_t pos = beta;
      while (pos > 0 && idx[pos - 1] == m - beta + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < beta; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
  }
  for (std::size_t s = 0; s < cap; ++s) {
    auto pick = rng.sample_without_replacement(m, beta);
    std::sort(pick.begin(), pick.end());
    out.push_back(std::move(pick));
  }
  return out;
}

PointSet build_candidates(const SearchContext& ctx, const PointSet& chosen, RandomStream rng) {
  const ResolvedConfig& cfg = ctx.config;
  const PointSet& points = ctx.points;
  const double r = ctx.r;
  const double delta = cfg.delta;
  std::vector<std::vector<double>> rows;

  if (r > 0.0) {
    for (std::size_t c = 0; c < chosen.size(); ++c) add_grid(ctx, chosen[c], 16.0 * r, delta * r, rows);
  }

  // Distance scales q = 2^j in [q_floor, d_max]. With nothing chosen every
  // scale sees all of P, so a single pass is made.
  std::vector<double> scales;
  if (chosen.empty()) {
    scales.push_back(-1.0);
  } else if (ctx.q_floor > 0.0 && ctx.q_floor <= ctx.d_max) {
    for (double q = std::exp2(std::ceil(std::log2(ctx.q_floor))); q <= ctx.d_max; q *= 2.0) {
      scales.push_back(q);
    }
  }

  std::vector<double> nearest(points.size(), kInf);
  for (std::size_t c = 0; c < chosen.size(); ++c) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      nearest[i] = std::min(nearest[i], dist(points[i], chosen[c]));
    }
  }

  std::vector<std::size_t> previous;
  for (std::size_t s = 0; s < scales.size(); ++s) {
    std::vector<std::size_t> faraway;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (nearest[i] > scales[s]) faraway.push_back(i);
    }
    if (faraway.empty()) continue;
    // Practical mode: a scale that removes exactly the same points as the
    // previous one would only redraw the same distribution.
    if (cfg.practical() && faraway == previous) continue;
    previous = faraway;

    RandomStream scale_rng = rng.split(s);
    const std::size_t sample_size = std::min(cfg.beta_prime, faraway.size());
    std::vector<std::size_t> picks = scale_rng.sample_without_replacement(faraway.size(), sample_size);
    PointSet sample(points.dim());
    for (std::size_t p : picks) sample.push_back(points[faraway[p]]);

    for (std::size_t i = 0; i < sample.size(); ++i) {
      // With r = 0 the grids degenerate and the sample points stand in for
      // them. Practical mode also keeps each sample point as the
      // representative of its own cell.
      if (r == 0.0 || cfg.practical()) rows.emplace_back(sample[i].begin(), sample[i].end());
      if (r > 0.0) add_grid(ctx, sample[i], 8.0 * r / delta, delta * r, rows);
    }

    if (!cfg.practical() &&
        binomial_capped(sample.size(), cfg.beta, cfg.base.theory_budget) > cfg.base.theory_budget) {
      throw BudgetExceeded("theory-mode sample has too many beta-subsets to enumerate");
    }
    const std::size_t cap =
        cfg.practical() ? cfg.base.subset_cap : static_cast<std::size_t>(cfg.base.theory_budget);
    for (const auto& subset : choose_subsets(sample.size(), cfg.beta, cap, scale_rng)) {
      const Point center = approx_solution_on_sample(sample.select(subset), delta / 8.0, ctx.z);
      rows.emplace_back(center.coords().begin(), center.coords().end());
    }
  }

  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::vector<std::vector<double>> chosen_rows;
  for (std::size_t c = 0; c < chosen.size(); ++c) chosen_rows.emplace_back(chosen[c].begin(), chosen[c].end());
  std::sort(chosen_rows.begin(), chosen_rows.end());
  std::erase_if(rows, [&](const std::vector<double>& row) {
    return std::binary_search(chosen_rows.begin(), chosen_rows.end(), row);
  });

  if (cfg.practical() && rows.size() > cfg.base.branch_cap) {
    RandomStream trim = rng.split(scales.size() + 1);
    auto keep = trim.sample_without_replacement(rows.size(), cfg.base.branch_cap);
    std::sort(keep.begin(), keep.end());
    std::vector<std::vector<double>> kept;
    for (std::size_t i : keep) kept.push_back(std::move(rows[i]));
    rows = std::move(kept);
  } else if (!cfg.practical() && rows.size() > cfg.base.theory_budget) {
    throw BudgetExceeded("theory-mode candidate set exceeds the budget");
  }

  PointSet out(points.dim());
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row);
  return out;
}

struct Outcome {
  double cost = kInf;
  PointSet centers;
};

void offer(Outcome& best, double cost, const PointSet& centers) {
  if (better(cost, centers, best.cost, best.centers)) {
    best.cost = cost;
    best.centers = centers;
  }
}

PointSet with_center(const PointSet& chosen, std::span<const double> center) {
  PointSet out = chosen;
  out.push_back(center);
  return out;
}

Outcome search(const SearchContext& ctx, const PointSet& chosen, const std::vector<double>& nearest_sq,
               int remaining, const RandomStream& rng) {
  Outcome best;
  if (remaining == 0) {
    if (!chosen.empty()) best = {ctx.eval.total(nearest_sq, ctx.r_eval, ctx.z), chosen};
    return best;
  }

  const PointSet candidates = build_candidates(ctx, chosen, rng.split(kSaltCandidates));
  std::vector<double> child_sq(nearest_sq.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    std::copy(nearest_sq.begin(), nearest_sq.end(), child_sq.begin());
    ctx.eval.add_center(candidates[c], child_sq);
    if (remaining == 1) {
      // Children are leaves: price them without materializing the center set
      // unless it wins.
      const double value = ctx.eval.total(child_sq, ctx.r_eval, ctx.z);
      if (value <= best.cost) offer(best, value, with_center(chosen, candidates[c]));
    } else {
      const Outcome child = search(ctx, with_center(chosen, candidates[c]), child_sq, remaining - 1,
                                   rng.split(kSaltChildBase + c));
      offer(best, child.cost, child.centers);
    }
  }
  const Outcome skip = search(ctx, chosen, nearest_sq, remaining - 1, rng.split(kSaltEmptyBranch));
  offer(best, skip.cost, skip.centers);
  return best;
}

}  // namespace

Mode mode_from_string(const std::string& name) {
  if (name == "theory") return Mode::kTheory;
  if (name == "practical") return Mode::kPractical;
  throw InvalidInput("mode must be 'theory' or 'practical', got '" + name + "'");
}

std::string to_string(Mode mode) { return mode == Mode::kTheory ? "theory" : "practical"; }

std::string to_string(Route route) {
  switch (route) {
    case Route::kCenterLike: return "center_like";
    case Route::kKMedian: return "kmedian_reduce";
    case Route::kSearch: return "search";
    case Route::kDiscretized: return "discretized";
  }
  return "search";
}

ResolvedConfig resolve(const AlgoConfig& config, int k) {
  if (k < 1) throw InvalidInput("k must be at least 1");
  if (!(config.eps > 0.0 && config.eps < 1.0)) throw InvalidInput("eps must lie in (0, 1)");
  ResolvedConfig out;
  out.base = config;
  out.k = k;
  out.delta = config.delta > 0.0 ? config.delta : config.eps / (10.0 * k);
  if (!(out.delta < 0.5)) throw InvalidInput("delta must lie in (0, 1/2)");
  out.delta_prime = config.delta_prime > 0.0 ? config.delta_prime : out.delta / 3.0;
  if (config.repetitions < 1) throw InvalidInput("repetitions must be at least 1");

  if (config.mode == Mode::kTheory) {
    // Sample-core size 1/delta^c' with the unspecified exponent taken as 1.
    out.beta = static_cast<std::size_t>(std::ceil(1.0 / out.delta));
    const double sample = static_cast<double>(out.beta) * 150.0 * k / std::pow(out.delta, 3);
    if (sample > static_cast<double>(config.theory_budget)) {
      throw BudgetExceeded("theory-mode sample size " + std::to_string(sample) +
                           " exceeds the budget");
    }
    out.beta_prime = static_cast<std::size_t>(std::ceil(sample));
    return out;
  }

  if (config.beta < 1) throw InvalidInput("beta must be at least 1");
  if (config.branch_cap < 1 || config.subset_cap < 1 || config.grid_cap < 1) {
    throw InvalidInput("caps must be at least 1");
  }
  out.beta = static_cast<std::size_t>(config.beta);
  out.beta_prime = config.beta_prime > 0 ? static_cast<std::size_t>(config.beta_prime)
                                         : 30 * static_cast<std::size_t>(k) * out.beta;
  if (out.beta > out.beta_prime) throw InvalidInput("beta must not exceed beta_prime");
  return out;
}

bool better(double cost_a, const PointSet& a, double cost_b, const PointSet& b) {
  if (cost_a != cost_b) return cost_a < cost_b;
  if (a.size() != b.size()) return a.size() < b.size();
  const auto ra = a.row_major();
  const auto rb = b.row_major();
  return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
}

PointSet build_candidate_set(const SearchState& state, const PointSet& points, double r,
                             const ResolvedConfig& config, Power z) {
  if (state.remaining < 1) throw InvalidInput("candidate set requested with no centers left");
  if (points.empty()) throw InvalidInput("candidate set of an empty point set");
  if (!(r >= 0.0)) throw InvalidInput("radius must be non-negative");
  const SearchContext ctx(points, r, z, config);
  return build_candidates(ctx, state.chosen, state.rng.split(kSaltCandidates));
}

Solution hybrid_clustering(const SearchState& state, const PointSet& points, int k, double r,
                           const ResolvedConfig& config, Power z) {
  if (points.empty()) throw InvalidInput("hybrid clustering of an empty point set");
  if (!(r >= 0.0)) throw InvalidInput("radius must be non-negative");
  if (state.remaining < 0 || state.chosen.size() + static_cast<std::size_t>(state.remaining) >
                                  static_cast<std::size_t>(k)) {
    throw InvalidInput("chosen centers plus remaining budget exceed k");
  }
  const SearchContext ctx(points, r, z, config);
  std::vector<double> nearest_sq = ctx.eval.empty_distances();
  for (std::size_t c = 0; c < state.chosen.size(); ++c) ctx.eval.add_center(state.chosen[c], nearest_sq);

  const Outcome best = search(ctx, state.chosen, nearest_sq, state.remaining, state.rng);
  if (best.centers.empty()) throw Infeasible("the search generated no candidate centers");
  return Solution{best.centers, 1.0 + config.delta_prime, best.cost};
}

}  // namespace hybridk::solver
