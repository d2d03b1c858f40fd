#include "safeasng/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "safeasng/errors.hpp"
#include "safeasng/ranking.hpp"
#include "safeasng/safe_region.hpp"
#include "safeasng/walsh.hpp"

namespace safeasng {

Algorithm parse_algorithm(std::string_view name) {
  if (name == "safe-asng") return Algorithm::kSafeAsng;
  if (name == "asng-ch") return Algorithm::kAsngConstraint;
  if (name == "asng-va") return Algorithm::kAsngViolation;
  if (name == "asng") return Algorithm::kAsng;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected safe-asng, asng-ch, asng-va, asng)");
}

std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::kSafeAsng: return "safe-asng";
    case Algorithm::kAsngConstraint: return "asng-ch";
    case Algorithm::kAsngViolation: return "asng-va";
    case Algorithm::kAsng: return "asng";
  }
  return "?";
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::kIterationBudget: return "iteration-budget";
    case Termination::kUnsafeBudget: return "unsafe-budget";
    case Termination::kVaExhausted: return "va-exhausted";
    case Termination::kNoSafeCenter: return "no-safe-center";
    case Termination::kOptimumReached: return "optimum-reached";
  }
  return "?";
}

Termination parse_termination(std::string_view name) {
  for (auto t : {Termination::kIterationBudget, Termination::kUnsafeBudget,
                 Termination::kVaExhausted, Termination::kNoSafeCenter,
                 Termination::kOptimumReached}) {
    if (to_string(t) == name) return t;
  }
  throw std::invalid_argument("unknown termination reason '" + std::string(name) + "'");
}

RunConfig default_config(Algorithm algorithm, int d) {
  RunConfig c;
  c.algorithm = algorithm;
  const auto ud = static_cast<std::uint64_t>(d);
  c.max_iterations = ud * ud * ud;
  c.n_safe = 10 * static_cast<std::size_t>(d);
  c.t_data = 10.0 * d;
  c.walsh_order = d > 25 ? 1 : 2;
  c.va_pool = 10 * d;
  return c;
}

void validate(const RunConfig& c, int d) {
  if (d < 2 || d > kMaxDim) throw ConfigError("dimension must be in [2, 64]");
  if (c.lambda != 2) throw ConfigError("only lambda = 2 is supported");
  if (c.max_iterations == 0) throw ConfigError("max_iterations must be positive");
  if (c.algorithm != Algorithm::kAsng && c.n_seed < 1) throw ConfigError("n_seed must be >= 1");
  if (c.algorithm == Algorithm::kSafeAsng) {
    if (c.n_safe == 0) throw ConfigError("n_safe must be positive");
    if (!(c.t_data > 0.0)) throw ConfigError("t_data must be positive");
    if (!(c.zeta_data >= 1.0)) throw ConfigError("zeta_data must be >= 1");
    if (c.walsh_order < 0 || c.walsh_order > d) throw ConfigError("walsh_order must be in [0, d]");
    if (c.lipschitz_samples < 1) throw ConfigError("lipschitz_samples must be positive");
  }
  if (c.algorithm == Algorithm::kAsngViolation) {
    if (c.va_pool < 1) throw ConfigError("va_pool must be positive");
    if (!(c.w_safe > 0.0) || !(c.w_unsafe > 0.0)) throw ConfigError("VA weights must be > 0");
  }
  if (!(c.delta_init > 0.0) || !(c.alpha > 0.0)) throw ConfigError("delta_init, alpha must be > 0");
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Shared bookkeeping: evaluation counting, best-safe tracking, records and termination.
class RunContext {
 public:
  RunContext(const RunConfig& config, const Problem& problem, const IterationObserver& observer)
      : rng(config.seed), config_(config), problem_(problem), observer_(observer) {
    validate(config, problem.d);
    result_.best_safe_f = kNegInf;
  }

  /// Seeds are known safe points: they enter the archive and best_safe_f but are not counted as
  /// optimizer evaluations.
  EvaluatedSample evaluate_seed(const BitString& x) {
    EvaluatedSample e = make_sample(x);
    if (!is_safe(e.s)) {
      throw std::invalid_argument("seed " + x.to_string() + " violates a safety constraint");
    }
    result_.best_safe_f = std::max(result_.best_safe_f, e.f);
    return e;
  }

  EvaluatedSample evaluate(const BitString& x) {
    EvaluatedSample e = make_sample(x);
    ++result_.evals;
    if (is_safe(e.s)) {
      result_.best_safe_f = std::max(result_.best_safe_f, e.f);
    } else {
      ++result_.unsafe;
    }
    if (config_.record_diagnostics) result_.evaluations.push_back(e);
    return e;
  }

  /// Records the row for iteration state.t and returns true when the run must stop.
  bool finish_iteration(const AsngState& state) {
    if (observer_) observer_(state);
    push_record(state);
    if (result_.unsafe >= config_.unsafe_budget) return stop(Termination::kUnsafeBudget);
    if (config_.stop_at_optimum && problem_.known_optimum &&
        result_.best_safe_f >= *problem_.known_optimum) {
      return stop(Termination::kOptimumReached);
    }
    if (state.t >= config_.max_iterations) return stop(Termination::kIterationBudget);
    return false;
  }

  /// Stops in the middle of iteration state.t + 1.
  void abort_iteration(const AsngState& state, Termination reason, std::string message) {
    AsngState partial = state;
    partial.t = state.t + 1;
    push_record(partial);
    stop(reason);
    result_.message = std::move(message);
  }

  void add_diagnostics(SafeDiagnostics diag) { result_.diagnostics.push_back(std::move(diag)); }

  RunResult finish(const AsngState& state) {
    result_.final_theta = state.params.theta;
    return std::move(result_);
  }

  const RunConfig& config() const noexcept { return config_; }
  const Problem& problem() const noexcept { return problem_; }

  Rng rng;

 private:
  EvaluatedSample make_sample(const BitString& x) {
    EvaluatedSample e;
    e.x = x;
    e.f = problem_.objective(x);
    e.s = problem_.safety_values(x);
    e.eval_index = next_index_++;
    return e;
  }

  void push_record(const AsngState& state) {
    IterationRecord r;
    r.iter = state.t;
    r.evals = result_.evals;
    r.best_safe_f = result_.best_safe_f;
    r.gap = problem_.known_optimum ? *problem_.known_optimum - result_.best_safe_f
                                   : std::numeric_limits<double>::quiet_NaN();
    r.unsafe = result_.unsafe;
    r.delta = state.delta;
    if (config_.theta_trace_every > 0 && state.t % config_.theta_trace_every == 0) {
      r.theta = state.params.theta;
    }
    result_.records.push_back(std::move(r));
  }

  bool stop(Termination reason) {
    result_.termination = reason;
    return true;
  }

  const RunConfig& config_;
  const Problem& problem_;
  const IterationObserver& observer_;
  RunResult result_;
  std::uint64_t next_index_ = 0;
};

std::pair<double, double> ranked_utilities(const EvaluatedSample& a, const EvaluatedSample& b) {
  return utilities_for_pair(a.f, a.s, b.f, b.s);
}

AsngState update_pair(const AsngState& state, const EvaluatedSample& a, const EvaluatedSample& b,
                      std::pair<double, double> u) {
  const UtilitySample samples[2] = {{a.x, u.first}, {b.x, u.second}};
  return asng_update(state, samples);
}

void check_seeds(std::span<const BitString> seeds, int d) {
  if (seeds.empty()) throw std::invalid_argument("at least one safe seed is required");
  for (const auto& s : seeds) {
    if (s.dim() != d) throw std::invalid_argument("seed dimension does not match the problem");
  }
}

/// Median of the values at `column` over the given entries.
double median_of(std::span<const EvaluatedSample* const> entries, std::size_t column) {
  std::vector<double> v;
  v.reserve(entries.size());
  for (const auto* e : entries) v.push_back(e->s[column]);
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Violation avoidance test: the nearest archive entries under dist / w must have non-negative
/// median safety for every constraint.
bool nearest_is_safe(const BitString& x, const Archive& archive, double w_safe, double w_unsafe,
                     std::vector<const EvaluatedSample*>& nearest) {
  nearest.clear();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : archive.entries()) {
    const double w = is_safe(e.s) ? w_safe : w_unsafe;
    const double dist = hamming_distance(x, e.x) / w;
    if (dist < best) {
      best = dist;
      nearest.clear();
      nearest.push_back(&e);
    } else if (dist == best) {
      nearest.push_back(&e);
    }
  }
  if (nearest.empty()) return false;
  for (int j = 0; j < archive.num_safety(); ++j) {
    if (median_of(nearest, static_cast<std::size_t>(j)) < 0.0) return false;
  }
  return true;
}

}  // namespace

RunResult run_safe_asng(const RunConfig& config, const Problem& problem,
                        std::span<const BitString> seeds, const IterationObserver& observer) {
  RunContext ctx(config, problem, observer);
  check_seeds(seeds, problem.d);
  const int d = problem.d;
  const int p = problem.num_safety();

  Archive archive(d, p);
  for (const auto& x : seeds) archive.insert(ctx.evaluate_seed(x));
  AsngState state(init_from_seeds(seeds, d), config.delta_init, config.alpha);

  std::optional<NormalEquationsCache> cache;
  if (p > 0) cache.emplace(enumerate_basis(d, config.walsh_order), p);
  std::size_t ingested = 0;

  while (true) {
    std::vector<WalshModel> models;
    if (cache) {
      for (; ingested < archive.size(); ++ingested) {
        const auto& e = archive.entries()[ingested];
        cache->ingest(e.x, e.s);
      }
      models = cache->solve();
    }
    const auto raw = estimate_lipschitz_raw(models, state.params, ctx.rng, config.lipschitz_samples);
    const auto inflated = inflate_small_data(raw, archive.size(), config.t_data, config.zeta_data);
    const auto d0 = select_positive(archive, config.n_safe);
    const auto lipschitz = correct_degeneration(inflated, d0);

    SafeArchives centers;
    try {
      centers = select_archives(archive, lipschitz, config.n_safe);
    } catch (const NoSafeCenterError& err) {
      ctx.abort_iteration(state, Termination::kNoSafeCenter, err.what());
      break;
    }

    SafeDiagnostics diag;
    std::vector<BitString> generated;
    std::vector<EvaluatedSample> evaluated;
    for (int i = 0; i < config.lambda; ++i) {
      const Projection proj = project(sample(state.params, ctx.rng), centers.d, lipschitz,
                                      state.params);
      BitString x = i > 0 ? repair_duplicate(proj, generated) : proj.x;
      generated.push_back(x);
      if (config.record_diagnostics) {
        double inside = std::numeric_limits<double>::infinity();
        for (const auto& c : centers.d) inside = std::min(inside, signed_distance(x, c, lipschitz));
        diag.n_flip.push_back(proj.n_flip);
        diag.repaired.push_back(!(x == proj.x));
        diag.region_distance.push_back(inside);
      }
      evaluated.push_back(ctx.evaluate(x));
    }

    state = update_pair(state, evaluated[0], evaluated[1], ranked_utilities(evaluated[0], evaluated[1]));
    for (auto& e : evaluated) archive.insert(std::move(e));

    if (config.record_diagnostics) {
      diag.iter = state.t;
      diag.lipschitz_raw = inflated;
      diag.lipschitz_corrected = lipschitz;
      diag.d_size = centers.d.size();
      diag.d0_size = centers.d0.size();
      diag.d_fallback = centers.d_fallback;
      ctx.add_diagnostics(std::move(diag));
    }
    if (ctx.finish_iteration(state)) break;
  }
  return ctx.finish(state);
}

RunResult run_asng_ch(const RunConfig& config, const Problem& problem,
                      std::span<const BitString> seeds, const IterationObserver& observer) {
  RunContext ctx(config, problem, observer);
  check_seeds(seeds, problem.d);
  for (const auto& x : seeds) ctx.evaluate_seed(x);
  AsngState state(init_from_seeds(seeds, problem.d), config.delta_init, config.alpha);
  while (true) {
    const EvaluatedSample a = ctx.evaluate(sample(state.params, ctx.rng));
    const EvaluatedSample b = ctx.evaluate(sample(state.params, ctx.rng));
    state = update_pair(state, a, b, ranked_utilities(a, b));
    if (ctx.finish_iteration(state)) break;
  }
  return ctx.finish(state);
}

RunResult run_asng_va(const RunConfig& config, const Problem& problem,
                      std::span<const BitString> seeds, const IterationObserver& observer) {
  RunContext ctx(config, problem, observer);
  check_seeds(seeds, problem.d);
  Archive archive(problem.d, problem.num_safety());
  for (const auto& x : seeds) archive.insert(ctx.evaluate_seed(x));
  AsngState state(init_from_seeds(seeds, problem.d), config.delta_init, config.alpha);

  std::vector<BitString> qualifying;
  std::vector<const EvaluatedSample*> nearest;
  bool exhausted = false;
  while (!exhausted) {
    std::vector<EvaluatedSample> evaluated;
    for (int i = 0; i < config.lambda; ++i) {
      qualifying.clear();
      for (int k = 0; k < config.va_pool; ++k) {
        BitString cand = sample(state.params, ctx.rng);
        if (nearest_is_safe(cand, archive, config.w_safe, config.w_unsafe, nearest)) {
          qualifying.push_back(cand);
        }
      }
      if (qualifying.empty()) {
        exhausted = true;
        break;
      }
      std::uniform_int_distribution<std::size_t> pick(0, qualifying.size() - 1);
      EvaluatedSample e = ctx.evaluate(qualifying[pick(ctx.rng)]);
      archive.insert(e);
      evaluated.push_back(std::move(e));
    }
    if (exhausted) {
      ctx.abort_iteration(state, Termination::kVaExhausted,
                          "no candidate among " + std::to_string(config.va_pool) +
                              " draws had a safe nearest neighbor");
      break;
    }
    state = update_pair(state, evaluated[0], evaluated[1],
                        objective_utilities(evaluated[0].f, evaluated[1].f));
    if (ctx.finish_iteration(state)) break;
  }
  return ctx.finish(state);
}

RunResult run_asng_plain(const RunConfig& config, const Problem& problem,
                         const IterationObserver& observer) {
  RunContext ctx(config, problem, observer);
  AsngState state(BernoulliParams::uniform(problem.d), config.delta_init, config.alpha);
  while (true) {
    const EvaluatedSample a = ctx.evaluate(sample(state.params, ctx.rng));
    const EvaluatedSample b = ctx.evaluate(sample(state.params, ctx.rng));
    state = update_pair(state, a, b, objective_utilities(a.f, b.f));
    if (ctx.finish_iteration(state)) break;
  }
  return ctx.finish(state);
}

RunResult run(const RunConfig& config, const Problem& problem, std::span<const BitString> seeds,
              const IterationObserver& observer) {
  switch (config.algorithm) {
    case Algorithm::kSafeAsng: return run_safe_asng(config, problem, seeds, observer);
    case Algorithm::kAsngConstraint: return run_asng_ch(config, problem, seeds, observer);
    case Algorithm::kAsngViolation: return run_asng_va(config, problem, seeds, observer);
    case Algorithm::kAsng: return run_asng_plain(config, problem, observer);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace safeasng
