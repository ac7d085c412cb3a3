// Randomized invariants. Each TEST checks one property over many seeded draws.

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "hybridk/commands.hpp"
#include "hybridk/geometry.hpp"
#include "hybridk/instance_io.hpp"
#include "hybridk/kernels.hpp"
#include "hybridk/oracle.hpp"
#include "hybridk/preprocess.hpp"
#include "hybridk/random.hpp"
#include "hybridk/solver.hpp"

namespace hybridk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;

PointSet random_points(RandomStream& rng, std::size_t n, std::size_t d, double box) {
  PointSet out(d);
  std::vector<double> p(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : p) v = box * rng.uniform01();
    out.push_back(p);
  }
  return out;
}

PointSet clustered_points(RandomStream& rng, std::size_t n, int clusters, double box, double spread) {
  PointSet centers = random_points(rng, static_cast<std::size_t>(clusters), 2, box);
  PointSet out(2);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = centers[i % centers.size()];
    out.push_back(std::vector<double>{c[0] + spread * rng.normal(), c[1] + spread * rng.normal()});
  }
  return out;
}

Power power_of(std::size_t trial) { return trial % 2 == 0 ? Power::kLinear : Power::kSquared; }

solver::AlgoConfig quick(std::uint64_t seed, int repetitions = 1) {
  solver::AlgoConfig config;
  config.seed = seed;
  config.repetitions = repetitions;
  return config;
}

// ---------------------------------------------------------------- geometry

TEST(GeometryProperty, CostIsNonIncreasingInRadius) {
  RandomStream rng(101);
  for (std::size_t t = 0; t < 300; ++t) {
    const PointSet p = random_points(rng, 1 + rng.uniform_index(20), 1 + t % 3, 10.0);
    const PointSet f = random_points(rng, 1 + rng.uniform_index(4), p.dim(), 10.0);
    const double r1 = 3.0 * rng.uniform01();
    const double r2 = r1 + 3.0 * rng.uniform01();
    EXPECT_GE(cost(p, f, r1, power_of(t)), cost(p, f, r2, power_of(t)));
  }
}

TEST(GeometryProperty, CostIsNonIncreasingInCenters) {
  RandomStream rng(102);
  for (std::size_t t = 0; t < 300; ++t) {
    const PointSet p = random_points(rng, 1 + rng.uniform_index(20), 2, 10.0);
    const PointSet f = random_points(rng, 1 + rng.uniform_index(3), 2, 10.0);
    PointSet bigger = f;
    const PointSet extra = random_points(rng, 1 + rng.uniform_index(3), 2, 10.0);
    for (std::size_t i = 0; i < extra.size(); ++i) bigger.push_back(extra[i]);
    const double r = 2.0 * rng.uniform01();
    EXPECT_LE(cost(p, bigger, r, power_of(t)), cost(p, f, r, power_of(t)));
  }
}

TEST(GeometryProperty, RadiusSandwich) {
  RandomStream rng(103);
  for (std::size_t t = 0; t < 300; ++t) {
    const PointSet p = random_points(rng, 1 + rng.uniform_index(25), 2, 10.0);
    const PointSet f = random_points(rng, 1 + rng.uniform_index(3), 2, 10.0);
    const double r = 3.0 * rng.uniform01();
    const double zero = cost(p, f, 0.0, Power::kLinear);
    const double at_r = cost(p, f, r, Power::kLinear);
    EXPECT_LE(zero, at_r + static_cast<double>(p.size()) * r + kTol);
    EXPECT_LE(at_r, zero);
  }
}

TEST(GeometryProperty, RelaxedTriangleInequality) {
  RandomStream rng(104);
  for (std::size_t t = 0; t < 2000; ++t) {
    const std::size_t d = 1 + t % 3;
    const PointSet pts = random_points(rng, 3, d, 10.0);
    const double r = 4.0 * rng.uniform01();
    const double lhs = dist_r(pts[0], pts[2], r, Power::kLinear);
    const double rhs = dist_r(pts[0], pts[1], r, Power::kLinear) + dist(pts[1], pts[2]);
    EXPECT_LE(lhs, rhs + kTol);
  }
}

TEST(GeometryProperty, GridCoversTheBall) {
  RandomStream rng(105);
  for (std::size_t t = 0; t < 10'000; ++t) {
    const std::size_t d = 1 + t % 3;
    std::vector<double> p(d), q(d);
    for (double& v : p) v = 20.0 * rng.uniform01() - 10.0;
    const double lambda = 0.1 + 2.0 * rng.uniform01();
    const double tau = lambda * (0.2 + 0.8 * rng.uniform01());
    const GridAnchor anchor = t % 2 == 0 ? GridAnchor::kOrigin : GridAnchor::kPoint;
    const PointSet grid = grid_points(p, lambda, tau, anchor);
    double norm = 0.0;
    for (double& v : q) {
      v = rng.normal();
      norm += v * v;
    }
    const double radius = lambda * std::pow(rng.uniform01(), 1.0 / static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) q[j] = p[j] + radius * q[j] / std::sqrt(norm);
    double best = kInf;
    for (std::size_t g = 0; g < grid.size(); ++g) best = std::min(best, dist(q, grid[g]));
    ASSERT_LE(best, tau) << "d=" << d << " lambda=" << lambda << " tau=" << tau;
  }
}

TEST(GeometryProperty, GridCardinalityBound) {
  RandomStream rng(106);
  for (std::size_t t = 0; t < 3000; ++t) {
    const std::size_t d = 1 + t % 3;
    std::vector<double> p(d);
    for (double& v : p) v = 50.0 * rng.uniform01() - 25.0;
    const double lambda = 0.1 + 3.0 * rng.uniform01();
    const double tau = lambda * (0.15 + 0.85 * rng.uniform01());
    const PointSet grid = grid_points(p, lambda, tau, t % 2 == 0 ? GridAnchor::kOrigin : GridAnchor::kPoint);
    ASSERT_LE(static_cast<double>(grid.size()), grid_cardinality_bound(d, lambda, tau));
  }
}

TEST(GeometryProperty, AssignmentPartitionsByNearestCenter) {
  RandomStream rng(107);
  for (std::size_t t = 0; t < 300; ++t) {
    const PointSet p = random_points(rng, 1 + rng.uniform_index(30), 2, 4.0);
    // Integer coordinates make exact ties common.
    PointSet f(2);
    for (std::size_t c = 0; c < 1 + rng.uniform_index(4); ++c) {
      f.push_back(std::vector<double>{std::floor(4.0 * rng.uniform01()), std::floor(4.0 * rng.uniform01())});
    }
    const double r = rng.uniform01();
    const Assignment a = assign_clusters(p, f, r, Power::kLinear);
    ASSERT_EQ(a.owner.size(), p.size());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      ASSERT_LT(a.owner[i], f.size());
      for (std::size_t c = 0; c < f.size(); ++c) {
        const double dc = dist(p[i], f[c]);
        const double downer = dist(p[i], f[a.owner[i]]);
        EXPECT_LE(downer, dc);
        if (c < a.owner[i]) EXPECT_LT(downer, dc);
      }
      EXPECT_EQ(a.per_point_cost[i], dist_r(p[i], f[a.owner[i]], r, Power::kLinear));
      total += a.per_point_cost[i];
    }
    EXPECT_EQ(total, cost(p, f, r, Power::kLinear));
  }
}

TEST(GeometryProperty, DispatchedKernelsMatchReference) {
  RandomStream rng(108);
  for (std::size_t t = 0; t < 200; ++t) {
    const PointSet p = random_points(rng, 1 + rng.uniform_index(70), 1 + t % 4, 100.0);
    const PointSet f = random_points(rng, 1 + rng.uniform_index(5), p.dim(), 100.0);
    const double r = 10.0 * rng.uniform01();
    const double reference = CostEvaluator(p, kernels::scalar_table()).cost(f, r, power_of(t));
    const double active = CostEvaluator(p).cost(f, r, power_of(t));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(reference), std::bit_cast<std::uint64_t>(active));
    EXPECT_EQ(reference, cost(p, f, r, power_of(t)));
  }
}

// ---------------------------------------------------------------- oracle

TEST(OracleProperty, DiscreteOracleIsExhaustive) {
  RandomStream rng(201);
  for (std::size_t t = 0; t < 40; ++t) {
    const PointSet p = random_points(rng, 4 + rng.uniform_index(8), 2, 5.0);
    const PointSet cands = random_points(rng, 3 + rng.uniform_index(6), 2, 5.0);
    const int k = 1 + static_cast<int>(rng.uniform_index(3));
    const double r = rng.uniform01();
    const auto res = oracle::brute_force_discrete(p, k, r, power_of(t), cands);
    for (int trial = 0; trial < 30; ++trial) {
      const auto pick = rng.sample_without_replacement(cands.size(), 1 + rng.uniform_index(std::min<std::size_t>(k, cands.size())));
      EXPECT_LE(res.cost, cost(p, cands.select(pick), r, power_of(t)));
    }
  }
}

TEST(OracleProperty, ResultCostMatchesItsCentersAndCandidates) {
  RandomStream rng(202);
  for (std::size_t t = 0; t < 20; ++t) {
    const PointSet p = random_points(rng, 5 + rng.uniform_index(6), 2, 5.0);
    const PointSet cands = random_points(rng, 6, 2, 5.0);
    const int k = 1 + static_cast<int>(t % 3);
    const auto discrete = oracle::brute_force_discrete(p, k, 0.4, power_of(t), cands);
    EXPECT_EQ(discrete.cost, cost(p, discrete.centers, 0.4, power_of(t)));
    for (std::size_t c = 0; c < discrete.centers.size(); ++c) {
      bool found = false;
      for (std::size_t i = 0; i < cands.size(); ++i) found = found || Point(cands[i]) == discrete.centers.point(c);
      EXPECT_TRUE(found);
    }
    const auto continuous = oracle::brute_force_continuous(p, k, 0.4, power_of(t), 0.02);
    EXPECT_EQ(continuous.cost, cost(p, continuous.centers, 0.4, power_of(t)));
  }
}

TEST(OracleProperty, RefiningResolutionStaysWithinSlack) {
  RandomStream rng(203);
  for (std::size_t t = 0; t < 12; ++t) {
    const PointSet p = random_points(rng, 5 + rng.uniform_index(5), 2, 4.0);
    const int k = 1 + static_cast<int>(t % 2);
    const double r = 0.5 * rng.uniform01();
    const double coarse = oracle::brute_force_continuous(p, k, r, power_of(t), 0.1).cost;
    const double fine_res = 0.01;
    const double fine = oracle::brute_force_continuous(p, k, r, power_of(t), fine_res).cost;
    EXPECT_LE(fine, coarse + static_cast<double>(p.size()) * fine_res + kTol);
  }
}

TEST(OracleProperty, LargeRadiusCostsZeroWithOneCenter) {
  RandomStream rng(204);
  for (std::size_t t = 0; t < 30; ++t) {
    const PointSet p = random_points(rng, 1 + rng.uniform_index(15), 2, 5.0);
    const double r = max_pairwise_distance(p) + 0.01;
    EXPECT_EQ(oracle::brute_force_continuous(p, 1, r, power_of(t), 0.05).cost, 0.0);
    EXPECT_EQ(oracle::brute_force_discrete(p, 1, r, power_of(t), p).cost, 0.0);
  }
}

// ---------------------------------------------------------------- preprocess

TEST(PreprocessProperty, KMedianRegimeInequality) {
  RandomStream rng(301);
  int checked = 0;
  for (std::size_t t = 0; t < 40 && checked < 6; ++t) {
    const PointSet p = random_points(rng, 5 + rng.uniform_index(4), 2, 6.0);
    const int k = 1 + static_cast<int>(t % 2);
    const double eps = 0.5;
    const double res = 1e-3;
    const double n = static_cast<double>(p.size());
    const auto zero = oracle::brute_force_continuous(p, k, 0.0, Power::kLinear, res);
    const double r = 0.1 * zero.cost * eps / (2.0 * n);
    const auto at_r = oracle::brute_force_continuous(p, k, r, Power::kLinear, res);
    if (at_r.cost - n * res < 2.0 * n * r / eps) continue;
    ++checked;
    EXPECT_LE(zero.cost, (1.0 + eps / 2.0) * at_r.cost + n * res);
  }
  EXPECT_GE(checked, 6);
}

TEST(PreprocessProperty, GonzalezIsATwoApproximation) {
  RandomStream rng(302);
  for (std::size_t t = 0; t < 40; ++t) {
    const PointSet p = random_points(rng, 2 + rng.uniform_index(11), 2, 10.0);
    const int k = 1 + static_cast<int>(rng.uniform_index(3));
    const auto g = preprocess::gonzalez_kcenter(p, k);
    EXPECT_LE(g.radius, 2.0 * oracle::kcenter_radius_exact(p, k) + kTol);
    EXPECT_LE(g.centers.size(), static_cast<std::size_t>(k));
    double covered = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      double best = kInf;
      for (std::size_t c = 0; c < g.centers.size(); ++c) best = std::min(best, dist(p[i], g.centers[c]));
      covered = std::max(covered, best);
    }
    EXPECT_EQ(covered, g.radius);
  }
}

TEST(PreprocessProperty, SnappingPreservesCost) {
  RandomStream rng(303);
  for (std::size_t t = 0; t < 20; ++t) {
    const PointSet p = clustered_points(rng, 20, 3, 20.0, 0.8);
    const double eps = 0.5;
    const double r = 0.3;
    const double guess = r * (1.0 + 20.0 * rng.uniform01());
    const auto parts = preprocess::discretize(p, 3, r, eps, guess);
    const double slack = std::sqrt(2.0) * 20.0 * parts.snap_cell;
    for (int trial = 0; trial < 100; ++trial) {
      const PointSet f = random_points(rng, 3, 2, 20.0);
      const double original = cost(p, f, r, Power::kLinear);
      const double snapped = cost(parts.snapped, f, r, Power::kLinear);
      EXPECT_LE(std::abs(snapped - original), eps * original + slack);
    }
  }
}

TEST(PreprocessProperty, ComponentsFollowTheEdgeRule) {
  RandomStream rng(304);
  for (std::size_t t = 0; t < 40; ++t) {
    const PointSet p = clustered_points(rng, 6 + rng.uniform_index(20), 4, 40.0, 1.0);
    const double r = 0.2 + rng.uniform01();
    const double guess = r * (1.0 + 5.0 * rng.uniform01());
    const auto parts = preprocess::discretize(p, 4, r, 0.5, guess);
    const double edge = 2.0 * (guess + r);
    std::vector<std::size_t> label(p.size(), p.size());
    std::size_t seen = 0;
    for (std::size_t c = 0; c < parts.members.size(); ++c) {
      EXPECT_EQ(parts.components[c], p.select(parts.members[c]));
      for (std::size_t i : parts.members[c]) {
        EXPECT_EQ(label[i], p.size()) << "point in two components";
        label[i] = c;
        ++seen;
      }
      // Each component is connected under the edge rule.
      std::vector<bool> reached(parts.members[c].size(), false);
      std::vector<std::size_t> stack{0};
      reached[0] = true;
      while (!stack.empty()) {
        const std::size_t a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < reached.size(); ++b) {
          if (!reached[b] && dist(p[parts.members[c][a]], p[parts.members[c][b]]) <= edge) {
            reached[b] = true;
            stack.push_back(b);
          }
        }
      }
      EXPECT_TRUE(std::all_of(reached.begin(), reached.end(), [](bool x) { return x; }));
    }
    EXPECT_EQ(seen, p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (label[i] != label[j]) EXPECT_GT(dist(p[i], p[j]), edge);
      }
    }
  }
}

TEST(PreprocessProperty, SnappedPointsAreCellCenters) {
  RandomStream rng(305);
  for (std::size_t t = 0; t < 60; ++t) {
    const std::size_t d = 1 + t % 3;
    const PointSet p = random_points(rng, 3 + rng.uniform_index(15), d, 10.0);
    const double r = 0.5;
    const double guess = r * (1.0 + 4.0 * rng.uniform01());
    const auto parts = preprocess::discretize(p, 2, r, 0.5, guess);
    const double n = static_cast<double>(p.size());
    EXPECT_DOUBLE_EQ(parts.snap_cell, 0.5 * guess / (std::sqrt(static_cast<double>(d)) * n));
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const double s = parts.snap_cell;
        const double v = parts.snapped[i][j];
        EXPECT_NEAR(v / s - 0.5, std::round(v / s - 0.5), 1e-6);
        EXPECT_LE(std::abs(v - p[i][j]), 0.5 * s * (1.0 + 1e-9));
      }
    }
  }
}

TEST(PreprocessProperty, CombineComponentsMatchesExhaustiveSplit) {
  RandomStream rng(306);
  for (std::size_t t = 0; t < 300; ++t) {
    const std::size_t comps = 1 + rng.uniform_index(4);
    const int k = static_cast<int>(comps + rng.uniform_index(6 - comps));  // comps..5
    std::vector<std::vector<double>> table(comps, std::vector<double>(k + 1, kInf));
    for (auto& row : table) {
      double v = 10.0 + 50.0 * rng.uniform01();
      for (int b = 1; b <= k; ++b) {
        v *= rng.uniform01();
        row[b] = std::round(v * 4.0) / 4.0;
      }
    }
    double best = kInf;
    std::vector<int> split(comps, 0);
    while (true) {
      const int used = std::accumulate(split.begin(), split.end(), 0);
      if (used <= k) {
        double total = 0.0;
        for (std::size_t c = 0; c < comps; ++c) total += table[c][split[c]];
        best = std::min(best, total);
      }
      std::size_t c = 0;
      while (c < comps && split[c] == k) split[c++] = 0;
      if (c == comps) break;
      ++split[c];
    }
    const auto alloc = preprocess::combine_components(table, k);
    EXPECT_EQ(alloc.total, best);
    double recomputed = 0.0;
    for (std::size_t c = 0; c < comps; ++c) recomputed += table[c][alloc.budgets[c]];
    EXPECT_EQ(recomputed, alloc.total);
    EXPECT_LE(std::accumulate(alloc.budgets.begin(), alloc.budgets.end(), 0), k);
  }
}

TEST(PreprocessProperty, GuessLadderIsGeometric) {
  RandomStream rng(307);
  for (std::size_t t = 0; t < 200; ++t) {
    const PointSet p = random_points(rng, 2 + rng.uniform_index(30), 1 + t % 3, 10.0);
    const double eps = 0.1 + 0.8 * rng.uniform01();
    const auto ladder = preprocess::opt_guess_ladder(p, 2, 0.5, eps);
    const double n = static_cast<double>(p.size());
    const double lo = eps * min_nonzero_pairwise_distance(p) / (2.0 * n);
    const double hi = n * max_pairwise_distance(p);
    ASSERT_FALSE(ladder.empty());
    EXPECT_EQ(ladder.front().value, lo);
    EXPECT_GE(ladder.back().value * 2.0, hi);
    for (std::size_t i = 1; i < ladder.size(); ++i) {
      EXPECT_EQ(ladder[i].value, 2.0 * ladder[i - 1].value);
      EXPECT_EQ(ladder[i].index, static_cast<int>(i));
    }
  }
}

// ---------------------------------------------------------------- solver

TEST(SolverProperty, ConfigInvariants) {
  RandomStream rng(401);
  for (std::size_t t = 0; t < 200; ++t) {
    solver::AlgoConfig config;
    config.eps = 0.01 + 0.98 * rng.uniform01();
    config.beta = 1 + static_cast<int>(rng.uniform_index(10));
    const int k = 1 + static_cast<int>(rng.uniform_index(5));
    const auto res = solver::resolve(config, k);
    EXPECT_GT(res.delta, 0.0);
    EXPECT_LT(res.delta, 0.5);
    EXPECT_DOUBLE_EQ(res.delta, config.eps / (10.0 * k));
    EXPECT_DOUBLE_EQ(res.delta_prime, res.delta / 3.0);
    EXPECT_LE(res.beta, res.beta_prime);
  }
}

TEST(SolverProperty, BudgetSafety) {
  RandomStream rng(402);
  for (std::size_t t = 0; t < 12; ++t) {
    const PointSet p = clustered_points(rng, 8 + rng.uniform_index(12), 3, 10.0, 0.7);
    const int k = 1 + static_cast<int>(t % 3);
    const double r = t % 4 == 0 ? 0.0 : rng.uniform01();
    const auto res = solver::full_pipeline(Instance{p, k, r, power_of(t)}, quick(t));
    EXPECT_GE(res.solution.centers.size(), 1u);
    EXPECT_LE(res.solution.centers.size(), static_cast<std::size_t>(k));
  }
}

TEST(SolverProperty, SolutionCostMatchesRecomputation) {
  RandomStream rng(403);
  for (std::size_t t = 0; t < 12; ++t) {
    const PointSet p = clustered_points(rng, 10 + rng.uniform_index(10), 2, 10.0, 0.7);
    const double r = rng.uniform01();
    const auto res = solver::full_pipeline(Instance{p, 2, r, power_of(t)}, quick(t));
    EXPECT_EQ(res.solution.cost, cost(p, res.solution.centers, res.solution.radius_factor * r, power_of(t)));
    const auto rc = solver::resolve(quick(t), 2);
    const solver::SearchState state{PointSet(2), 2, RandomStream(t)};
    const Solution sol = solver::hybrid_clustering(state, p, 2, r, rc, power_of(t));
    EXPECT_EQ(sol.cost, cost(p, sol.centers, sol.radius_factor * r, power_of(t)));
  }
}

TEST(SolverProperty, BranchingNeverLosesToTheEmptyBranch) {
  RandomStream rng(404);
  for (std::size_t t = 0; t < 15; ++t) {
    const PointSet p = clustered_points(rng, 8 + rng.uniform_index(10), 3, 10.0, 0.6);
    const int k = 2 + static_cast<int>(t % 2);
    const double r = 0.5 * rng.uniform01();
    const auto rc = solver::resolve(quick(t), k);
    const PointSet chosen{p.point(0)};
    const RandomStream stream(1000 + t);
    const solver::SearchState full{chosen, k - 1, stream};
    // The skip branch of the root uses the root stream's salt-1 child.
    const solver::SearchState skip{chosen, k - 2, stream.split(1)};
    const Solution with_branching = solver::hybrid_clustering(full, p, k, r, rc, power_of(t));
    const Solution empty_branch = solver::hybrid_clustering(skip, p, k, r, rc, power_of(t));
    EXPECT_LE(with_branching.cost, empty_branch.cost);
  }
}

TEST(SolverProperty, ChosenCentersAreKept) {
  RandomStream rng(405);
  for (std::size_t t = 0; t < 15; ++t) {
    const PointSet p = clustered_points(rng, 10, 2, 10.0, 0.5);
    const PointSet chosen{p.point(t % p.size())};
    const auto rc = solver::resolve(quick(t), 2);
    const Solution sol = solver::hybrid_clustering(solver::SearchState{chosen, 1, RandomStream(t)}, p, 2, 0.3, rc);
    EXPECT_EQ(sol.centers.point(0), chosen.point(0));
    EXPECT_LE(sol.centers.size(), 2u);
  }
}

TEST(SolverProperty, SeedDeterminism) {
  RandomStream rng(406);
  for (std::size_t t = 0; t < 8; ++t) {
    const PointSet p = clustered_points(rng, 15, 3, 10.0, 0.6);
    const Instance inst{p, 3, 0.4 * rng.uniform01(), power_of(t)};
    const auto a = solver::full_pipeline(inst, quick(77 + t, 2));
    const auto b = solver::full_pipeline(inst, quick(77 + t, 2));
    EXPECT_EQ(a.solution.centers, b.solution.centers);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a.solution.cost), std::bit_cast<std::uint64_t>(b.solution.cost));
    EXPECT_EQ(a.route, b.route);
  }
}

TEST(SolverProperty, MoreRestartsNeverHurt) {
  RandomStream rng(407);
  for (std::size_t t = 0; t < 6; ++t) {
    const PointSet p = clustered_points(rng, 14, 3, 10.0, 0.8);
    const Instance inst{p, 2, 0.5 * rng.uniform01(), power_of(t)};
    double previous = kInf;
    for (int reps = 1; reps <= 3; ++reps) {
      const double value = solver::full_pipeline(inst, quick(t, reps)).solution.cost;
      EXPECT_LE(value, previous);
      previous = value;
    }
  }
}

TEST(SolverProperty, CoverableInstancesCostZero) {
  RandomStream rng(408);
  for (std::size_t t = 0; t < 10; ++t) {
    const int k = 1 + static_cast<int>(t % 3);
    const PointSet p = clustered_points(rng, 4 * static_cast<std::size_t>(k), k, 30.0, 0.15);
    const double r = 1.05 * oracle::kcenter_radius_exact(p, k);
    const auto res = solver::full_pipeline(Instance{p, k, r, power_of(t)}, quick(t));
    EXPECT_EQ(res.solution.cost, 0.0);
    EXPECT_EQ(res.solution.radius_factor, 1.5);
  }
}

TEST(SolverProperty, SampleMedianContract) {
  int hits = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    RandomStream rng(4090 + t);
    PointSet x(2);
    while (x.size() < 200) {
      const double a = 2.0 * rng.uniform01() - 1.0;
      const double b = 2.0 * rng.uniform01() - 1.0;
      if (a * a + b * b <= 1.0) x.push_back(std::vector<double>{a, b});
    }
    const PointSet sample = x.select(rng.sample_without_replacement(200, 50));
    const double truth = oracle::one_median_exact(x, 1e-4).second;
    const Point c = solver::approx_solution_on_sample(sample, 0.2, Power::kLinear);
    if (cost(x, PointSet{c}, 0.0, Power::kLinear) <= 1.2 * truth) ++hits;
  }
  EXPECT_GE(hits, trials / 2);
}

// ---------------------------------------------------------------- cli_harness

TEST(CliProperty, InstanceFilesRoundTrip) {
  RandomStream rng(501);
  for (std::size_t t = 0; t < 100; ++t) {
    const std::size_t d = 1 + rng.uniform_index(4);
    PointSet p(d);
    std::vector<double> row(d);
    for (std::size_t i = 0; i < rng.uniform_index(20) + 1; ++i) {
      for (double& v : row) v = std::ldexp(rng.normal(), static_cast<int>(rng.uniform_index(80)) - 40);
      p.push_back(row);
    }
    std::stringstream buffer;
    io::write_points(buffer, p);
    EXPECT_EQ(io::parse_points(buffer), p);
  }
}

TEST(CliProperty, SolveThenEvalAgrees) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    cli::GenSpec gen;
    gen.kind = seed % 2 == 0 ? cli::Distribution::kGaussianMixture : cli::Distribution::kTwoScale;
    gen.n = 20;
    gen.seed = seed;
    const PointSet p = cli::generate(gen);
    const Power z = power_of(seed);
    const auto solved = cli::run_solve(p, 2, 0.5, z, quick(seed));
    const auto checked = cli::run_eval(p, solved.centers, 0.5, z, solved.record["radius_factor"].get<double>());
    const double a = solved.record["cost"].get<double>();
    const double b = checked["cost"].get<double>();
    EXPECT_LE(std::abs(a - b), 1e-9 * std::max(1.0, a));
    EXPECT_EQ(solved.record["covered_count"], checked["covered_count"]);
  }
}

TEST(CliProperty, CommandsAreDeterministic) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cli::GenSpec gen;
    gen.kind = cli::Distribution::kGaussianMixture;
    gen.n = 12;
    gen.seed = seed;
    EXPECT_EQ(cli::generate(gen), cli::generate(gen));
    const PointSet p = cli::generate(gen);
    EXPECT_EQ(cli::without_timing(cli::run_solve(p, 2, 0.3, Power::kLinear, quick(seed)).record),
              cli::without_timing(cli::run_solve(p, 2, 0.3, Power::kLinear, quick(seed)).record));
    EXPECT_EQ(cli::without_timing(cli::run_oracle(p, 2, 0.3, Power::kLinear, 0.05)),
              cli::without_timing(cli::run_oracle(p, 2, 0.3, Power::kLinear, 0.05)));
    cli::BenchSpec bench;
    bench.n = {8, 10};
    bench.master_seed = seed;
    bench.config = quick(0);
    bench.oracle_max_n = 8;
    const auto first = cli::run_bench(bench);
    const auto second = cli::run_bench(bench);
    ASSERT_EQ(first.size(), second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      EXPECT_EQ(cli::without_timing(first[i]), cli::without_timing(second[i]));
    }
  }
}

TEST(CliProperty, BenchCostsAreMonotoneInRadiusFactor) {
  cli::BenchSpec bench;
  bench.n = {16};
  bench.k = {2};
  bench.eps = {0.1, 0.5};
  bench.seeds = 3;
  bench.config = quick(0);
  bench.oracle_max_n = 0;
  bench.master_seed = 5;
  for (const auto& row : cli::run_bench(bench)) {
    cli::GenSpec gen;
    gen.kind = bench.kind;
    gen.n = 16;
    gen.clusters = 2;
    gen.seed = row["seed"].get<std::uint64_t>();
    const PointSet p = cli::generate(gen);
    PointSet centers(2);
    for (const auto& c : row["centers"]) centers.push_back(c.get<std::vector<double>>());
    EXPECT_LE(cost(p, centers, 1.5 * 0.5, Power::kLinear), cost(p, centers, 1.1 * 0.5, Power::kLinear));
  }
}

}  // namespace
}  // namespace hybridk
