#pragma once

// The subcommands behind the `hybridk` executable, as library calls so tests
// can drive them without spawning processes. Every record is a JSON object.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridk/oracle.hpp"
#include "hybridk/solver.hpp"
#include "hybridk/types.hpp"

namespace hybridk::cli {

using Record = nlohmann::ordered_json;

/// Process exit status of the `hybridk` executable.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitParse = 2, kExitInfeasible = 3, kExitBudget = 4 };

/// Exit status for an exception escaping a subcommand: malformed input 2,
/// infeasible or out-of-regime 3, budget refusal 4, anything else 1.
ExitCode exit_code_for(const std::exception& error);

/// Seed used when no --seed flag is given: HYBRIDK_SEED if set, else 0.
/// Throws InvalidInput when the variable is not an unsigned integer.
std::uint64_t default_seed();

enum class Distribution {
  kUniform,          // uniform in [0, box]^d
  kGaussianMixture,  // `clusters` centers uniform in the box, normal noise of sd `spread`
  kTwoScale,         // tight blobs plus ~10% stragglers spread over three box widths
  kFigure1,          // the fixed two-disk example; ignores n, d and seed
};

Distribution distribution_from_string(const std::string& name);

struct GenSpec {
  Distribution kind = Distribution::kUniform;
  std::size_t n = 20;
  std::size_t d = 2;
  int clusters = 3;
  double spread = 0.5;
  double box = 10.0;
  std::uint64_t seed = 0;
};

PointSet generate(const GenSpec& spec);

/// The red (uncovered) points of the two-disk example, then the disk centers.
PointSet figure1_uncovered();
PointSet figure1_centers();

/// Common record: centers, k, r, z, eps, radius_factor, cost, covered_count,
/// seed, wall_time_ms, algorithm. `eps` is null when negative.
Record make_record(const PointSet& points, const PointSet& centers, int k, double r, Power z,
                   double eps, double radius_factor, std::uint64_t seed, double wall_time_ms,
                   const std::string& algorithm);

/// Record without wall_time_ms, for determinism comparisons.
Record without_timing(Record record);

struct SolveOutcome {
  Record record;
  PointSet centers;
};

SolveOutcome run_solve(const PointSet& points, int k, double r, Power z,
                       const solver::AlgoConfig& config);

Record run_oracle(const PointSet& points, int k, double r, Power z, double resolution,
                  std::uint64_t budget = oracle::kDefaultBudget);

Record run_eval(const PointSet& points, const PointSet& centers, double r, Power z,
                double radius_factor);

struct BenchSpec {
  std::vector<std::size_t> n{20};
  std::vector<std::size_t> d{2};
  std::vector<int> k{2};
  std::vector<double> r{0.5};
  std::vector<double> eps{0.5};
  int seeds = 1;                 // instance draws per (n, d, k, r, eps)
  std::uint64_t master_seed = 0;
  Distribution kind = Distribution::kGaussianMixture;
  Power z = Power::kLinear;
  solver::AlgoConfig config;     // seed and eps are overwritten per cell
  std::size_t oracle_max_n = 12;  // oracle column only for n at or below this
  double oracle_resolution = 0.05;
  std::size_t jobs = 0;           // 0: hardware concurrency
  // When non-empty every cell solves this instance instead of generating one.
  PointSet fixed_points;
};

/// One record per cell in cell order. Cell c uses seed mix_seed(master_seed, c)
/// both for generation and for the solver. Cell failures become an "error"
/// field and the sweep continues.
std::vector<Record> run_bench(const BenchSpec& spec);

}  // namespace hybridk::cli
