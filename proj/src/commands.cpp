#include "hybridk/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <thread>

#include "hybridk/geometry.hpp"
#include "hybridk/random.hpp"

namespace hybridk::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Record centers_json(const PointSet& centers) {
  Record out = Record::array();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    out.push_back(std::vector<double>(centers[i].begin(), centers[i].end()));
  }
  return out;
}

std::string algorithm_for(solver::Route route) {
  switch (route) {
    case solver::Route::kCenterLike: return "center_like";
    case solver::Route::kKMedian: return "kmedian_reduce";
    default: return "pipeline";
  }
}

std::vector<double> uniform_point(RandomStream& rng, std::size_t d, double lo, double hi) {
  std::vector<double> p(d);
  for (double& v : p) v = lo + (hi - lo) * rng.uniform01();
  return p;
}

}  // namespace

std::uint64_t default_seed() {
  const char* env = std::getenv("HYBRIDK_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(env, &end, 10);
  if (*end != '\0' || *env == '-') throw InvalidInput("HYBRIDK_SEED must be an unsigned integer");
  return value;
}

Distribution distribution_from_string(const std::string& name) {
  if (name == "uniform") return Distribution::kUniform;
  if (name == "gaussian-mixture") return Distribution::kGaussianMixture;
  if (name == "two-scale") return Distribution::kTwoScale;
  if (name == "figure1") return Distribution::kFigure1;
  throw InvalidInput("unknown distribution '" + name +
                     "' (uniform, gaussian-mixture, two-scale, figure1)");
}

PointSet figure1_uncovered() { return PointSet{{3, 6}, {1, 5}, {5, 1}, {6, 9}}; }

PointSet figure1_centers() { return PointSet{{3, 3}, {6, 6}}; }

PointSet generate(const GenSpec& spec) {
  if (spec.kind == Distribution::kFigure1) {
    PointSet out = figure1_uncovered();
    const PointSet covered{{2, 2},   {2, 3},   {2, 4},   {4, 1.4}, {4, 2},   {4, 3},   {4, 4},
                           {4, 4.2}, {3, 1},   {3, 1.5}, {3, 2},   {3, 3},   {3, 4},   {3, 4.5},
                           {3, 5},   {5, 5},   {5, 6},   {5, 7},   {6, 4},   {6, 5},   {6, 7},
                           {7, 5},   {7, 7},   {8, 6},   {4, 6},   {4.5, 6}, {5.5, 5.5}, {7.3, 6.1},
                           {3.3, 2.5}, {3.4, 2.1}, {1.1, 2.9}, {3.4, 3.5}, {5.9, 6.1}, {6.2, 5.9}};
    for (std::size_t i = 0; i < covered.size(); ++i) out.push_back(covered[i]);
    return out;
  }
  if (spec.n == 0 || spec.d == 0) throw InvalidInput("n and d must be positive");
  if (!(spec.box > 0.0) || !(spec.spread >= 0.0)) throw InvalidInput("box must be positive, spread non-negative");
  if (spec.kind != Distribution::kUniform && spec.clusters < 1) throw InvalidInput("clusters must be positive");

  RandomStream rng(spec.seed);
  PointSet out(spec.d);
  out.reserve(spec.n);
  if (spec.kind == Distribution::kUniform) {
    for (std::size_t i = 0; i < spec.n; ++i) out.push_back(uniform_point(rng, spec.d, 0.0, spec.box));
    return out;
  }

  std::vector<std::vector<double>> centers;
  for (int c = 0; c < spec.clusters; ++c) centers.push_back(uniform_point(rng, spec.d, 0.0, spec.box));
  std::size_t stragglers = 0;
  double spread = spec.spread;
  if (spec.kind == Distribution::kTwoScale) {
    stragglers = std::max<std::size_t>(1, spec.n / 10);
    stragglers = std::min(stragglers, spec.n);
    spread = spec.spread * 0.2;
  }
  std::vector<double> p(spec.d);
  for (std::size_t i = 0; i + stragglers < spec.n; ++i) {
    const auto& c = centers[i % centers.size()];
    for (std::size_t j = 0; j < spec.d; ++j) p[j] = c[j] + spread * rng.normal();
    out.push_back(p);
  }
  for (std::size_t i = 0; i < stragglers; ++i) {
    out.push_back(uniform_point(rng, spec.d, -spec.box, 2.0 * spec.box));
  }
  return out;
}

Record make_record(const PointSet& points, const PointSet& centers, int k, double r, Power z,
                   double eps, double radius_factor, std::uint64_t seed, double wall_time_ms,
                   const std::string& algorithm) {
  const double radius = radius_factor * r;
  std::size_t covered = 0;
  double total = 0.0;
  if (!centers.empty()) {
    total = cost(points, centers, radius, z);
    for (std::size_t i = 0; i < points.size(); ++i) {
      double nearest = dist(points[i], centers[0]);
      for (std::size_t c = 1; c < centers.size(); ++c) nearest = std::min(nearest, dist(points[i], centers[c]));
      if (nearest <= radius) ++covered;
    }
  }
  Record out;
  out["centers"] = centers_json(centers);
  out["k"] = k;
  out["r"] = r;
  out["z"] = to_int(z);
  out["eps"] = eps < 0.0 ? Record(nullptr) : Record(eps);
  out["radius_factor"] = radius_factor;
  out["cost"] = total;
  out["covered_count"] = covered;
  out["seed"] = seed;
  out["wall_time_ms"] = wall_time_ms;
  out["algorithm"] = algorithm;
  return out;
}

ExitCode exit_code_for(const std::exception& error) {
  if (dynamic_cast<const InvalidInput*>(&error) != nullptr) return kExitParse;
  if (dynamic_cast<const Infeasible*>(&error) != nullptr) return kExitInfeasible;
  if (dynamic_cast<const RegimeError*>(&error) != nullptr) return kExitInfeasible;
  if (dynamic_cast<const BudgetExceeded*>(&error) != nullptr) return kExitBudget;
  return kExitFailure;
}

Record without_timing(Record record) {
  record.erase("wall_time_ms");
  return record;
}

SolveOutcome run_solve(const PointSet& points, int k, double r, Power z,
                       const solver::AlgoConfig& config) {
  const auto start = Clock::now();
  const solver::PipelineResult result = solver::full_pipeline(Instance{points, k, r, z}, config);
  const double ms = elapsed_ms(start);
  Record record = make_record(points, result.solution.centers, k, r, z, config.eps,
                              result.solution.radius_factor, config.seed, ms,
                              algorithm_for(result.route));
  return {std::move(record), result.solution.centers};
}

Record run_oracle(const PointSet& points, int k, double r, Power z, double resolution,
                  std::uint64_t budget) {
  Instance{points, k, r, z}.validate();
  const auto start = Clock::now();
  const oracle::OracleResult result = oracle::brute_force_continuous(points, k, r, z, resolution, budget);
  const double ms = elapsed_ms(start);
  Record record = make_record(points, result.centers, k, r, z, -1.0, 1.0, 0, ms, "oracle");
  record["resolution"] = result.grid_resolution;
  record["additive_slack"] = static_cast<double>(points.size()) * result.grid_resolution;
  return record;
}

Record run_eval(const PointSet& points, const PointSet& centers, double r, Power z,
                double radius_factor) {
  if (centers.empty()) throw InvalidInput("centers file has no points");
  if (centers.dim() != points.dim()) {
    throw InvalidInput("centers have dimension " + std::to_string(centers.dim()) +
                       ", instance has " + std::to_string(points.dim()));
  }
  if (!(radius_factor >= 1.0)) throw InvalidInput("radius factor must be at least 1");
  const auto start = Clock::now();
  const Assignment assignment = assign_clusters(points, centers, radius_factor * r, z);
  std::vector<std::size_t> sizes(centers.size(), 0);
  for (std::size_t owner : assignment.owner) ++sizes[owner];
  Record record = make_record(points, centers, static_cast<int>(centers.size()), r, z, -1.0,
                              radius_factor, 0, elapsed_ms(start), "eval");
  record["cluster_sizes"] = sizes;
  return record;
}

std::vector<Record> run_bench(const BenchSpec& spec) {
  struct Cell {
    std::size_t n, d;
    int k;
    double r, eps;
  };
  std::vector<Cell> cells;
  const std::vector<std::size_t> fixed_n{spec.fixed_points.size()};
  const std::vector<std::size_t> fixed_d{spec.fixed_points.dim()};
  const bool fixed = !spec.fixed_points.empty();
  for (std::size_t n : fixed ? fixed_n : spec.n) {
    for (std::size_t d : fixed ? fixed_d : spec.d) {
      for (int k : spec.k) {
        for (double r : spec.r) {
          for (double eps : spec.eps) {
            for (int s = 0; s < spec.seeds; ++s) cells.push_back({n, d, k, r, eps});
          }
        }
      }
    }
  }

  std::vector<Record> out(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      const Cell& cell = cells[c];
      const std::uint64_t seed = mix_seed(spec.master_seed, c);
      Record record;
      try {
        PointSet points = spec.fixed_points;
        if (!fixed) {
          GenSpec gen;
          gen.kind = spec.kind;
          gen.n = cell.n;
          gen.d = cell.d;
          gen.clusters = cell.k;
          gen.seed = seed;
          points = generate(gen);
        }
        solver::AlgoConfig config = spec.config;
        config.seed = seed;
        config.eps = cell.eps;
        record = run_solve(points, cell.k, cell.r, spec.z, config).record;
        if (points.size() <= spec.oracle_max_n) {
          const Record truth = run_oracle(points, cell.k, cell.r, spec.z, spec.oracle_resolution);
          record["oracle_cost"] = truth["cost"];
          record["oracle_slack"] = truth["additive_slack"];
        }
      } catch (const std::exception& e) {
        record = Record();
        record["k"] = cell.k;
        record["r"] = cell.r;
        record["eps"] = cell.eps;
        record["seed"] = seed;
        record["error"] = e.what();
      }
      record["cell"] = c;
      record["n"] = cell.n;
      record["d"] = cell.d;
      out[c] = std::move(record);
    }
  };

  std::size_t jobs = spec.jobs > 0 ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(cells.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace hybridk::cli
