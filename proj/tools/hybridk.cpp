#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hybridk/commands.hpp"
#include "hybridk/instance_io.hpp"

namespace {

struct SolverFlags {
  double eps = 0.5;
  std::optional<std::uint64_t> seed;
  std::string mode = "practical";
  hybridk::solver::AlgoConfig config;
};

void add_solver_flags(CLI::App* app, SolverFlags& flags) {
  app->add_option("--eps", flags.eps, "accuracy parameter in (0, 1)");
  app->add_option("--seed", flags.seed, "master seed (default: HYBRIDK_SEED or 0)");
  app->add_option("--mode", flags.mode, "theory | practical")
      ->check(CLI::IsMember({"theory", "practical"}));
  app->add_option("--beta", flags.config.beta, "subset size for the 1-median routine");
  app->add_option("--beta-prime", flags.config.beta_prime, "sample size per distance scale");
  app->add_option("--branch-cap", flags.config.branch_cap, "candidates kept per search level");
  app->add_option("--subset-cap", flags.config.subset_cap, "beta-subsets per sample");
  app->add_option("--grid-cap", flags.config.grid_cap, "points per practical grid");
  app->add_option("--repetitions", flags.config.repetitions, "independent restarts");
}

hybridk::solver::AlgoConfig finish(const SolverFlags& flags) {
  hybridk::solver::AlgoConfig config = flags.config;
  config.eps = flags.eps;
  config.seed = flags.seed ? *flags.seed : hybridk::cli::default_seed();
  config.mode = hybridk::solver::mode_from_string(flags.mode);
  return config;
}

void print(const hybridk::cli::Record& record, bool pretty) {
  std::cout << (pretty ? record.dump(2) : record.dump()) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hybridk;
  CLI::App app{"Hybrid k-clustering: k balls of radius r, minimizing the summed distance of uncovered points"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "indent JSON output");

  std::string instance_path, centers_path, out_path, centers_out;
  int k = 1;
  double r = 0.0;
  int z = 1;
  double resolution = 0.05;
  double radius_factor = 1.0;
  std::uint64_t budget = oracle::kDefaultBudget;

  // gen
  auto* gen = app.add_subcommand("gen", "write a random instance");
  std::string kind = "uniform";
  cli::GenSpec gen_spec;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--kind", kind, "uniform | gaussian-mixture | two-scale | figure1");
  gen->add_option("--n", gen_spec.n, "number of points");
  gen->add_option("--d", gen_spec.d, "dimension");
  gen->add_option("--clusters", gen_spec.clusters, "mixture components / blobs");
  gen->add_option("--spread", gen_spec.spread, "cluster standard deviation");
  gen->add_option("--box", gen_spec.box, "side of the sampling box");
  gen->add_option("--seed", gen_seed, "seed (default: HYBRIDK_SEED or 0)");
  gen->add_option("--out", out_path, "output file (default: stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "run the approximation pipeline");
  SolverFlags solve_flags;
  solve->add_option("--instance", instance_path, "instance file")->required();
  solve->add_option("--k", k, "number of centers")->required();
  solve->add_option("--r", r, "ball radius")->required();
  solve->add_option("--z", z, "distance power (1 or 2)");
  solve->add_option("--centers-out", centers_out, "also write the centers as a point file");
  add_solver_flags(solve, solve_flags);

  // oracle
  auto* orc = app.add_subcommand("oracle", "brute-force reference optimum");
  orc->add_option("--instance", instance_path, "instance file")->required();
  orc->add_option("--k", k, "number of centers")->required();
  orc->add_option("--r", r, "ball radius")->required();
  orc->add_option("--z", z, "distance power (1 or 2)");
  orc->add_option("--resolution", resolution, "grid coverage radius");
  orc->add_option("--budget", budget, "maximum evaluations");

  // eval
  auto* eval = app.add_subcommand("eval", "cost of given centers");
  eval->add_option("--instance", instance_path, "instance file")->required();
  eval->add_option("--centers", centers_path, "centers in instance format")->required();
  eval->add_option("--r", r, "ball radius")->required();
  eval->add_option("--z", z, "distance power (1 or 2)");
  eval->add_option("--radius-factor", radius_factor, "evaluate at radius_factor * r");

  // bench
  auto* bench = app.add_subcommand("bench", "sweep and print one record per cell");
  cli::BenchSpec bench_spec;
  SolverFlags bench_flags;
  std::string bench_kind = "gaussian-mixture";
  bench->add_option("--instance", instance_path, "solve this instance in every cell");
  bench->add_option("--n", bench_spec.n, "point counts")->delimiter(',');
  bench->add_option("--d", bench_spec.d, "dimensions")->delimiter(',');
  bench->add_option("--k", bench_spec.k, "center counts")->delimiter(',');
  bench->add_option("--r", bench_spec.r, "radii")->delimiter(',');
  bench->add_option("--eps", bench_spec.eps, "accuracy values")->delimiter(',');
  bench->add_option("--z", z, "distance power (1 or 2)");
  bench->add_option("--seeds", bench_spec.seeds, "instance draws per parameter tuple");
  bench->add_option("--kind", bench_kind, "generator for the cells");
  bench->add_option("--oracle-max-n", bench_spec.oracle_max_n, "oracle column up to this n");
  bench->add_option("--resolution", bench_spec.oracle_resolution, "oracle grid resolution");
  bench->add_option("--jobs", bench_spec.jobs, "worker threads (0: all cores)");
  bench->add_option("--seed", bench_flags.seed, "master seed (default: HYBRIDK_SEED or 0)");
  bench->add_option("--mode", bench_flags.mode, "theory | practical")
      ->check(CLI::IsMember({"theory", "practical"}));
  bench->add_option("--beta", bench_flags.config.beta);
  bench->add_option("--beta-prime", bench_flags.config.beta_prime);
  bench->add_option("--branch-cap", bench_flags.config.branch_cap);
  bench->add_option("--subset-cap", bench_flags.config.subset_cap);
  bench->add_option("--grid-cap", bench_flags.config.grid_cap);
  bench->add_option("--repetitions", bench_flags.config.repetitions);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitParse;
  }

  try {
    if (gen->parsed()) {
      gen_spec.kind = cli::distribution_from_string(kind);
      gen_spec.seed = gen_seed ? *gen_seed : cli::default_seed();
      const PointSet points = cli::generate(gen_spec);
      if (out_path.empty()) {
        io::write_points(std::cout, points);
      } else {
        io::write_points(out_path, points);
      }
    } else if (solve->parsed()) {
      const PointSet points = io::read_points(instance_path);
      const auto outcome = cli::run_solve(points, k, r, power_from_int(z), finish(solve_flags));
      if (!centers_out.empty()) io::write_points(centers_out, outcome.centers);
      print(outcome.record, pretty);
    } else if (orc->parsed()) {
      const PointSet points = io::read_points(instance_path);
      print(cli::run_oracle(points, k, r, power_from_int(z), resolution, budget), pretty);
    } else if (eval->parsed()) {
      const PointSet points = io::read_points(instance_path);
      const PointSet centers = io::read_points(centers_path);
      print(cli::run_eval(points, centers, r, power_from_int(z), radius_factor), pretty);
    } else if (bench->parsed()) {
      if (!instance_path.empty()) bench_spec.fixed_points = io::read_points(instance_path);
      bench_spec.kind = cli::distribution_from_string(bench_kind);
      bench_spec.z = power_from_int(z);
      bench_spec.config = finish(bench_flags);
      bench_spec.master_seed = bench_spec.config.seed;
      for (const auto& record : cli::run_bench(bench_spec)) print(record, pretty);
    }
  } catch (const std::exception& e) {
    const cli::ExitCode code = cli::exit_code_for(e);
    const char* kind = code == cli::kExitParse        ? "invalid input: "
                       : code == cli::kExitInfeasible ? "infeasible: "
                       : code == cli::kExitBudget     ? "budget exceeded: "
                                                      : "";
    std::cerr << "hybridk: " << kind << e.what() << '\n';
    return code;
  }
  return cli::kExitOk;
}
