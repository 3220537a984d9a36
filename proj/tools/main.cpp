// capra: capacitated vehicle routing approximation toolkit.
//
// Subcommands: solve, gen, verify, oracle, bench. Identical arguments and
// input files produce byte-identical outputs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capra/generator.hpp"
#include "capra/instance.hpp"
#include "capra/instance_io.hpp"
#include "capra/oracle.hpp"
#include "capra/pipeline.hpp"

namespace {

using namespace capra;

InstanceFormat parse_format(const std::string& s) {
  if (s == "auto") return InstanceFormat::kAuto;
  if (s == "vrp" || s == "tsplib") return InstanceFormat::kTsplib;
  if (s == "json") return InstanceFormat::kJson;
  throw ValidationError("unknown format '" + s + "'");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << text;
}

struct SolveOptions {
  std::string input;
  std::string output;
  std::string algo = "best";
  std::string variant = "general";
  std::string tsp = "christofides";
  std::string format = "auto";
  double tau = ClusterParams{}.tau;
  double rho = ClusterParams{}.rho;
  double gamma = ClusterParams{}.gamma;
  uint64_t seed = 0;
  bool no_validate = false;
};

int run_solve(const SolveOptions& opt) {
  Instance inst = load_instance(opt.input, parse_format(opt.format),
                                !opt.no_validate);
  PipelineConfig config;
  config.cluster.tau = opt.tau;
  config.cluster.rho = opt.rho;
  config.cluster.gamma = opt.gamma;
  config.cluster.validate();
  config.tsp = tsp_backend_from_string(opt.tsp);
  config.variant = variant_from_string(opt.variant);
  config.seed = opt.seed;

  std::pair<Solution, RunReport> result;
  if (opt.algo == "best") {
    result = solve_best(inst, config);
  } else if (opt.algo == "classical") {
    result = solve_classical(inst, config.variant, config.tsp,
                             config.held_karp_limit);
    result.second.config = config.to_json();
  } else if (opt.algo == "new") {
    result = solve_new(inst, config);
  } else {
    throw ValidationError("unknown algorithm '" + opt.algo + "'");
  }

  VerifyReport check = verify_solution(inst, result.first, config.variant);
  if (!check.ok()) {
    std::cerr << "internal error: produced an infeasible solution\n";
    for (const auto& v : check.violations) std::cerr << "  " << v << "\n";
    return 1;
  }

  write_text(opt.output,
             json_to_string(solution_to_json(inst, result.first,
                                             config.variant)));
  if (!opt.output.empty() && opt.output != "-") {
    write_text(opt.output + ".report.json",
               json_to_string(result.second.to_json()));
  }
  std::cout << "cost " << result.first.cost << " lower_bound "
            << check.lower_bound << " tours " << result.first.tours.size()
            << "\n";
  return 0;
}

int run_gen(int n, const std::string& model_spec, uint64_t seed,
            const std::string& output) {
  DemandModel model = DemandModel::parse(model_spec);
  Instance inst = generate_instance(n, model, seed);
  write_text(output, json_to_string(instance_to_json(inst)));
  return 0;
}

int run_verify(const std::string& instance_path,
               const std::string& solution_path, const std::string& variant,
               const std::string& format) {
  Instance inst = load_instance(instance_path, parse_format(format));
  Solution sol = load_solution(inst, solution_path);
  VerifyReport rep = verify_solution(inst, sol,
                                     variant_from_string(variant));
  std::cout << "cost " << rep.recomputed_cost << " lower_bound "
            << rep.lower_bound << "\n";
  if (!rep.ok()) {
    for (const auto& v : rep.violations) std::cerr << v << "\n";
    return 1;
  }
  return 0;
}

int run_oracle(const std::string& instance_path, int limit,
               const std::string& output, const std::string& format) {
  Instance inst = load_instance(instance_path, parse_format(format));
  Solution sol = exact_cvrp(inst, limit);
  write_text(output, json_to_string(solution_to_json(
                         inst, sol, DemandVariant::kGeneral)));
  std::cout << "optimal cost " << sol.cost << "\n";
  return 0;
}

int run_bench(const std::string& dir, const std::string& tsp,
              const std::string& variant, int max_n, int oracle_limit) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto ext = entry.path().extension().string();
    if (entry.is_regular_file() && (ext == ".vrp" || ext == ".json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  PipelineConfig config;
  config.tsp = tsp_backend_from_string(tsp);
  config.variant = variant_from_string(variant);

  std::printf("%-28s %5s %12s %12s %12s %12s %8s %s\n", "instance", "n",
              "classical", "new", "best", "reference", "ratio", "winner");
  for (const auto& path : files) {
    Instance inst;
    try {
      inst = load_instance(path.string());
    } catch (const std::exception& e) {
      std::cerr << "skipping " << path.string() << ": " << e.what() << "\n";
      continue;
    }
    if (max_n > 0 && inst.num_customers() > max_n) continue;
    auto [sol, rep] = solve_best(inst, config);
    double reference = rep.lower_bound;
    if (inst.num_customers() <= oracle_limit) {
      reference = exact_cvrp(inst, oracle_limit).cost;
    }
    const double ratio = reference > 0 ? sol.cost / reference : 1.0;
    std::printf("%-28s %5d %12.6f %12.6f %12.6f %12.6f %8.4f %s\n",
                path.filename().string().c_str(), inst.num_customers(),
                rep.classical_cost, rep.new_cost, sol.cost, reference, ratio,
                rep.winner.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capacitated vehicle routing approximation toolkit"};
  app.require_subcommand(1);

  SolveOptions solve_opt;
  auto* solve = app.add_subcommand("solve", "solve a CVRP instance");
  solve->add_option("input", solve_opt.input, "instance file")->required();
  solve->add_option("-o,--output", solve_opt.output,
                    "solution json (report goes to <output>.report.json)");
  solve->add_option("--algo", solve_opt.algo, "best|classical|new");
  solve->add_option("--variant", solve_opt.variant,
                    "general|unit|splittable");
  solve->add_option("--tsp", solve_opt.tsp, "christofides|doubletree|exact");
  solve->add_option("--format", solve_opt.format, "auto|vrp|json");
  solve->add_option("--tau", solve_opt.tau, "cluster demand slack");
  solve->add_option("--rho", solve_opt.rho, "cluster radius fraction");
  solve->add_option("--gamma", solve_opt.gamma, "nice-instance constant");
  solve->add_option("--seed", solve_opt.seed, "run seed (echoed in report)");
  solve->add_flag("--no-validate", solve_opt.no_validate,
                  "skip metric validation on explicit matrices");

  int gen_n = 0;
  std::string gen_model = "uniform";
  uint64_t gen_seed = 0;
  std::string gen_output;
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--n", gen_n, "customer count")->required();
  gen->add_option("--model", gen_model,
                  "unit:k | uniform | clustered:m:spread");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--output", gen_output, "output json");

  std::string verify_instance, verify_solution_path;
  std::string verify_variant = "general";
  std::string verify_format = "auto";
  auto* verify = app.add_subcommand("verify", "check a solution file");
  verify->add_option("instance", verify_instance, "instance file")
      ->required();
  verify->add_option("solution", verify_solution_path, "solution json")
      ->required();
  verify->add_option("--variant", verify_variant, "general|unit|splittable");
  verify->add_option("--format", verify_format, "auto|vrp|json");

  std::string oracle_instance, oracle_output;
  std::string oracle_format = "auto";
  int oracle_limit = 8;
  auto* oracle = app.add_subcommand("oracle", "exact solution (small n)");
  oracle->add_option("instance", oracle_instance, "instance file")
      ->required();
  oracle->add_option("--limit", oracle_limit, "maximum customer count");
  oracle->add_option("-o,--output", oracle_output, "output json");
  oracle->add_option("--format", oracle_format, "auto|vrp|json");

  std::string bench_dir;
  std::string bench_tsp = "christofides";
  std::string bench_variant = "general";
  int bench_max_n = 0;
  int bench_oracle_limit = 8;
  auto* bench = app.add_subcommand("bench", "cost table over a directory");
  bench->add_option("dir", bench_dir, "directory of instances")->required();
  bench->add_option("--tsp", bench_tsp, "christofides|doubletree|exact");
  bench->add_option("--variant", bench_variant, "general|unit|splittable");
  bench->add_option("--max-n", bench_max_n, "skip larger instances");
  bench->add_option("--oracle-limit", bench_oracle_limit,
                    "exact reference up to this size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve->parsed()) return run_solve(solve_opt);
    if (gen->parsed()) return run_gen(gen_n, gen_model, gen_seed, gen_output);
    if (verify->parsed()) {
      return run_verify(verify_instance, verify_solution_path,
                        verify_variant, verify_format);
    }
    if (oracle->parsed()) {
      return run_oracle(oracle_instance, oracle_limit, oracle_output,
                        oracle_format);
    }
    if (bench->parsed()) {
      return run_bench(bench_dir, bench_tsp, bench_variant, bench_max_n,
                       bench_oracle_limit);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
