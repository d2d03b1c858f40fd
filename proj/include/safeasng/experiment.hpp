#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "safeasng/benchmarks.hpp"
#include "safeasng/optimizers.hpp"

namespace safeasng::harness {

struct Cell {
  Objective objective = Objective::kOneMax;
  Safety safety = Safety::kNone;
  Algorithm algorithm = Algorithm::kSafeAsng;
  int d = 10;

  /// e.g. "onemax-compatible-safe-asng-d10"; also the output subdirectory name.
  std::string id() const;
  /// Cell id without the algorithm: all algorithms of a group share their safe seeds.
  std::string seed_group() const;
};

struct ExperimentSpec {
  std::vector<Cell> cells;
  int trials = 25;
  std::uint64_t base_seed = 0;
  std::filesystem::path out_dir = "results";
  std::optional<std::uint64_t> max_iterations;  // default d^3
  std::uint64_t unsafe_budget = 100;
  std::optional<int> walsh_order;               // default 2 for d <= 25, else 1
  std::uint64_t theta_trace_every = 0;
  bool diagnostics = false;
  bool stop_at_optimum = false;
  int n_seed = 10;
  int workers = 0;  // 0: SAFEASNG_WORKERS or hardware concurrency
};

/// 64-bit FNV-1a. Part of the on-disk reproducibility contract; never change it.
std::uint64_t stable_hash(std::string_view text) noexcept;

/// base_seed XOR stable_hash("<cell id>#<trial>")
std::uint64_t trial_seed(std::uint64_t base_seed, std::string_view cell_id, int trial) noexcept;

RunConfig resolve_config(const ExperimentSpec& spec, const Cell& cell, int trial);

/// Resolves the worker count: explicit value, then the SAFEASNG_WORKERS environment variable,
/// then the hardware concurrency.
int worker_count(int requested);

inline constexpr std::string_view kCsvHeader = "trial,iter,evals,best_safe_f,gap,unsafe,delta,term";

struct TrialRow {
  int trial = 0;
  std::uint64_t iter = 0;
  std::uint64_t evals = 0;
  double best_safe_f = 0.0;
  double gap = 0.0;
  std::uint64_t unsafe = 0;
  double delta = 0.0;
  std::string term;  // empty except on the final row
};

void write_trial_csv(std::ostream& out, int trial, const RunResult& result);
void write_theta_csv(std::ostream& out, const RunResult& result);
void write_diagnostics_csv(std::ostream& out, const RunResult& result);

/// Throws std::runtime_error naming file and line on malformed input.
std::vector<TrialRow> parse_trial_csv(std::istream& in, const std::string& source);
std::vector<TrialRow> read_trial_csv(const std::filesystem::path& path);

/// Linear-interpolation percentile (q in [0, 1]) of a non-empty sample.
double percentile(std::vector<double> values, double q);

/// Per-iteration median and quartiles of gap and unsafe count across trials. Trials that stopped
/// early are carried forward with their final row.
nlohmann::json summarize(std::span<const std::vector<TrialRow>> trials);

/// Summarizes every trial_*.csv in `cell_dir`, embeds config.json when present, and writes
/// summary.json. Returns the summary.
nlohmann::json summarize_directory(const std::filesystem::path& cell_dir);

/// Runs every (cell, trial), writing <out>/<cell id>/trial_NNN.csv (plus optional theta/diag
/// files), config.json and summary.json. Returns the cell directories.
std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec);

/// The seeds used by every algorithm for trial `trial` of the cell's group.
std::vector<BitString> trial_seeds(const ExperimentSpec& spec, const Cell& cell,
                                   const Problem& problem, int trial);

nlohmann::json config_to_json(const RunConfig& config);

}  // namespace safeasng::harness
