#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "safeasng/archive.hpp"
#include "safeasng/benchmarks.hpp"
#include "safeasng/bernoulli.hpp"

namespace safeasng {

enum class Algorithm {
  kSafeAsng,         // surrogate Lipschitz safe region + projection + ranking
  kAsngConstraint,   // ranking-based constraint handling only
  kAsngViolation,    // violation avoidance by resampling
  kAsng,             // plain ASNG, theta starts at 0.5
};

Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm a) noexcept;

enum class Termination {
  kIterationBudget,
  kUnsafeBudget,
  kVaExhausted,
  kNoSafeCenter,
  kOptimumReached,
};

std::string_view to_string(Termination t) noexcept;
Termination parse_termination(std::string_view name);

struct RunConfig {
  Algorithm algorithm = Algorithm::kSafeAsng;
  int lambda = 2;
  std::uint64_t max_iterations = 0;
  std::uint64_t unsafe_budget = 100;
  int n_seed = 10;
  std::size_t n_safe = 0;
  double t_data = 0.0;
  double zeta_data = 10.0;
  int walsh_order = 2;
  int lipschitz_samples = 100;
  std::uint64_t seed = 0;
  double w_safe = 1.0;
  double w_unsafe = 1.0;
  int va_pool = 0;
  double delta_init = 1.0;
  double alpha = 1.5;
  bool stop_at_optimum = false;
  std::uint64_t theta_trace_every = 0;  // 0 disables theta snapshots
  bool record_diagnostics = false;
};

/// Default hyperparameters for dimension d: budget d^3, 100 unsafe evaluations, N_safe = T_data =
/// 10d, zeta = 10, Walsh order 2 (1 for d > 25), 100 Lipschitz samples, VA pool 10d.
RunConfig default_config(Algorithm algorithm, int d);

/// Throws ConfigError for invalid settings (lambda != 2, zero pools, ...).
void validate(const RunConfig& config, int d);

struct IterationRecord {
  std::uint64_t iter = 0;
  std::uint64_t evals = 0;   // optimizer evaluations so far (seeds excluded)
  double best_safe_f = 0.0;  // -inf until a safe point is known; seeds count
  double gap = 0.0;          // known optimum - best_safe_f
  std::uint64_t unsafe = 0;
  double delta = 0.0;
  std::vector<double> theta;  // filled every theta_trace_every iterations
};

/// Per-iteration safe-region bookkeeping (safe ASNG only, when record_diagnostics is set).
struct SafeDiagnostics {
  std::uint64_t iter = 0;
  std::vector<double> lipschitz_raw;
  std::vector<double> lipschitz_corrected;
  std::size_t d_size = 0;
  std::size_t d0_size = 0;
  bool d_fallback = false;
  std::vector<int> n_flip;               // per sample
  std::vector<bool> repaired;            // per sample
  std::vector<double> region_distance;   // min signed distance of the evaluated point over D
};

struct RunResult {
  std::vector<IterationRecord> records;
  Termination termination = Termination::kIterationBudget;
  std::string message;
  double best_safe_f = 0.0;
  std::uint64_t unsafe = 0;
  std::uint64_t evals = 0;
  std::vector<double> final_theta;
  std::vector<EvaluatedSample> evaluations;  // only with record_diagnostics
  std::vector<SafeDiagnostics> diagnostics;  // only with record_diagnostics
};

/// Called after every parameter update with the new state.
using IterationObserver = std::function<void(const AsngState&)>;

RunResult run_safe_asng(const RunConfig& config, const Problem& problem,
                        std::span<const BitString> seeds, const IterationObserver& observer = {});
RunResult run_asng_ch(const RunConfig& config, const Problem& problem,
                      std::span<const BitString> seeds, const IterationObserver& observer = {});
RunResult run_asng_va(const RunConfig& config, const Problem& problem,
                      std::span<const BitString> seeds, const IterationObserver& observer = {});
RunResult run_asng_plain(const RunConfig& config, const Problem& problem,
                         const IterationObserver& observer = {});

/// Dispatches on config.algorithm; plain ASNG ignores the seeds.
RunResult run(const RunConfig& config, const Problem& problem, std::span<const BitString> seeds,
              const IterationObserver& observer = {});

}  // namespace safeasng
