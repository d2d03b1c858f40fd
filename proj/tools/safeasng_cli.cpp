#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "safeasng/errors.hpp"
#include "safeasng/experiment.hpp"
#include "safeasng/oracle.hpp"

namespace fs = std::filesystem;
using namespace safeasng;

namespace {

std::vector<std::string> split_list(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& a : args) {
    std::stringstream ss(a);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(item);
    }
  }
  return out;
}

bool is_cell_dir(const fs::path& dir) {
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind("trial_", 0) == 0 && e.path().extension() == ".csv") return true;
  }
  return false;
}

void print_final(const nlohmann::json& summary) {
  const auto& fin = summary["final"];
  std::cout << summary.value("cell", std::string("?")) << ": trials=" << summary["trials"]
            << " median_gap=" << fin["median_gap"] << " median_unsafe=" << fin["median_unsafe"]
            << " zero_unsafe=" << fin["zero_unsafe_trials"] << " term=" << fin["termination"].dump()
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safe ASNG experiments on pseudo-Boolean benchmarks"};
  app.require_subcommand(1);

  harness::ExperimentSpec spec;
  std::vector<std::string> problems, safeties, algos;
  std::vector<int> dims;
  std::uint64_t max_iters = 0;
  int walsh_order = -1;
  std::string out_dir = "results";

  auto* run_cmd = app.add_subcommand("run", "run a grid of (problem, safety, algorithm, d) cells");
  run_cmd->add_option("--problem", problems, "onemax, leadingones, binval, revbinval (comma list)")
      ->required();
  run_cmd->add_option("--safety", safeties, "none, compatible, conflicting (comma list)")
      ->required();
  run_cmd->add_option("--algo", algos, "safe-asng, asng-ch, asng-va, asng (comma list)")
      ->required();
  run_cmd->add_option("--dim", dims, "dimensions (comma list)")->required()->delimiter(',');
  run_cmd->add_option("--trials", spec.trials, "independent trials per cell")
      ->capture_default_str();
  run_cmd->add_option("--seed", spec.base_seed, "base seed")->capture_default_str();
  run_cmd->add_option("--max-iters", max_iters, "iteration budget (default d^3)");
  run_cmd->add_option("--unsafe-budget", spec.unsafe_budget, "unsafe evaluations before stopping")
      ->capture_default_str();
  run_cmd->add_option("--walsh-order", walsh_order, "surrogate order (default 2, or 1 for d > 25)");
  run_cmd->add_option("--n-seed", spec.n_seed, "initial safe seeds")->capture_default_str();
  run_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
  run_cmd->add_option("--theta-trace", spec.theta_trace_every,
                      "write theta every K iterations (0 = off)");
  run_cmd->add_flag("--diagnostics", spec.diagnostics, "write safe-region diagnostics");
  run_cmd->add_flag("--stop-at-optimum", spec.stop_at_optimum,
                    "stop as soon as the known optimum is found");
  run_cmd->add_option("--workers", spec.workers, "worker threads (default SAFEASNG_WORKERS or cores)");

  std::uint64_t verify_seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "compare the implementation against brute force");
  verify_cmd->add_option("--seed", verify_seed, "seed for random instances")->capture_default_str();

  std::string in_dir;
  auto* sum_cmd = app.add_subcommand("summarize", "rebuild summary.json from trial CSVs");
  sum_cmd->add_option("--in", in_dir, "cell directory or a directory of cells")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      for (const auto& pr : split_list(problems)) {
        for (const auto& sf : split_list(safeties)) {
          for (const auto& al : split_list(algos)) {
            for (int d : dims) {
              spec.cells.push_back(
                  {parse_objective(pr), parse_safety(sf), parse_algorithm(al), d});
            }
          }
        }
      }
      if (max_iters > 0) spec.max_iterations = max_iters;
      if (walsh_order >= 0) spec.walsh_order = walsh_order;
      spec.out_dir = out_dir;
      for (const auto& dir : harness::run_experiment(spec)) {
        std::ifstream in(dir / "summary.json");
        print_final(nlohmann::json::parse(in));
      }
      return 0;
    }
    if (*verify_cmd) {
      const auto reports = oracle::run_suite(verify_seed);
      std::cout << oracle::format_reports(reports);
      int failed = 0;
      for (const auto& r : reports) failed += r.passed ? 0 : 1;
      std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed")
                << '\n';
      return failed == 0 ? 0 : 1;
    }
    if (*sum_cmd) {
      const fs::path root(in_dir);
      if (!fs::is_directory(root)) throw std::runtime_error("not a directory: " + in_dir);
      std::vector<fs::path> cells;
      if (is_cell_dir(root)) {
        cells.push_back(root);
      } else {
        for (const auto& e : fs::directory_iterator(root)) {
          if (e.is_directory() && is_cell_dir(e.path())) cells.push_back(e.path());
        }
        std::sort(cells.begin(), cells.end());
      }
      if (cells.empty()) throw std::runtime_error("no trial CSVs under " + in_dir);
      for (const auto& c : cells) print_final(harness::summarize_directory(c));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
