#include "safeasng/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace safeasng::harness {

namespace fs = std::filesystem;

std::string Cell::id() const {
  return std::string(to_string(objective)) + "-" + std::string(to_string(safety)) + "-" +
         std::string(to_string(algorithm)) + "-d" + std::to_string(d);
}

std::string Cell::seed_group() const {
  return std::string(to_string(objective)) + "-" + std::string(to_string(safety)) + "-d" +
         std::to_string(d);
}

std::uint64_t stable_hash(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::string_view cell_id, int trial) noexcept {
  std::string key(cell_id);
  key += '#';
  key += std::to_string(trial);
  return base_seed ^ stable_hash(key);
}

RunConfig resolve_config(const ExperimentSpec& spec, const Cell& cell, int trial) {
  RunConfig c = default_config(cell.algorithm, cell.d);
  if (spec.max_iterations) c.max_iterations = *spec.max_iterations;
  if (spec.walsh_order) c.walsh_order = *spec.walsh_order;
  c.unsafe_budget = spec.unsafe_budget;
  c.theta_trace_every = spec.theta_trace_every;
  c.record_diagnostics = spec.diagnostics;
  c.stop_at_optimum = spec.stop_at_optimum;
  c.n_seed = spec.n_seed;
  c.seed = trial_seed(spec.base_seed, cell.id(), trial);
  return c;
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SAFEASNG_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ';';
    out += fmt_double(v[i]);
  }
  return out;
}

std::string trial_name(const char* prefix, int trial) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%03d.csv", prefix, trial);
  return buf;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& s, const std::string& source, std::size_t line) {
  if (s.empty()) parse_error(source, line, "empty numeric field");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) parse_error(source, line, "bad number '" + s + "'");
  return v;
}

std::uint64_t parse_count(const std::string& s, const std::string& source, std::size_t line) {
  if (s.empty() || s[0] == '-') parse_error(source, line, "bad count '" + s + "'");
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) parse_error(source, line, "bad count '" + s + "'");
  return v;
}

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

void write_trial_csv(std::ostream& out, int trial, const RunResult& result) {
  out << kCsvHeader << '\n';
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    const auto& r = result.records[k];
    out << trial << ',' << r.iter << ',' << r.evals << ',' << fmt_double(r.best_safe_f) << ','
        << fmt_double(r.gap) << ',' << r.unsafe << ',' << fmt_double(r.delta) << ',';
    if (k + 1 == result.records.size()) out << to_string(result.termination);
    out << '\n';
  }
}

void write_theta_csv(std::ostream& out, const RunResult& result) {
  const std::size_t d = result.final_theta.size();
  out << "iter";
  for (std::size_t i = 1; i <= d; ++i) out << ",theta_" << i;
  out << '\n';
  for (const auto& r : result.records) {
    if (r.theta.empty()) continue;
    out << r.iter;
    for (double v : r.theta) out << ',' << fmt_double(v);
    out << '\n';
  }
}

void write_diagnostics_csv(std::ostream& out, const RunResult& result) {
  out << "iter,lipschitz_raw,lipschitz_corrected,d_size,d0_size,d_fallback,n_flip,repaired,"
         "region_distance\n";
  for (const auto& g : result.diagnostics) {
    std::vector<double> flips(g.n_flip.begin(), g.n_flip.end());
    std::vector<double> rep(g.repaired.begin(), g.repaired.end());
    out << g.iter << ',' << join(g.lipschitz_raw) << ',' << join(g.lipschitz_corrected) << ','
        << g.d_size << ',' << g.d0_size << ',' << (g.d_fallback ? 1 : 0) << ',' << join(flips)
        << ',' << join(rep) << ',' << join(g.region_distance) << '\n';
  }
}

std::vector<TrialRow> parse_trial_csv(std::istream& in, const std::string& source) {
  std::vector<TrialRow> rows;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) parse_error(source, 1, "missing header");
  ++lineno;
  if (line != kCsvHeader) parse_error(source, lineno, "unexpected header '" + line + "'");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 8) {
      parse_error(source, lineno, "expected 8 fields, got " + std::to_string(f.size()));
    }
    TrialRow r;
    r.trial = static_cast<int>(parse_count(f[0], source, lineno));
    r.iter = parse_count(f[1], source, lineno);
    r.evals = parse_count(f[2], source, lineno);
    r.best_safe_f = parse_real(f[3], source, lineno);
    r.gap = parse_real(f[4], source, lineno);
    r.unsafe = parse_count(f[5], source, lineno);
    r.delta = parse_real(f[6], source, lineno);
    r.term = f[7];
    rows.push_back(std::move(r));
  }
  if (rows.empty()) parse_error(source, lineno, "no data rows");
  return rows;
}

std::vector<TrialRow> read_trial_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_trial_csv(in, path.string());
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi) return values[lo];
  const double frac = pos - static_cast<double>(lo);
  if (std::isinf(values[lo]) || std::isinf(values[hi])) return frac < 0.5 ? values[lo] : values[hi];
  return values[lo] + frac * (values[hi] - values[lo]);
}

nlohmann::json summarize(std::span<const std::vector<TrialRow>> trials) {
  if (trials.empty()) throw std::invalid_argument("summarize: need at least one trial");
  std::size_t length = 0;
  for (const auto& t : trials) {
    if (t.empty()) throw std::invalid_argument("summarize: empty trial");
    length = std::max(length, t.size());
  }

  nlohmann::json iters = nlohmann::json::array();
  nlohmann::json gap_med = nlohmann::json::array(), gap_q25 = nlohmann::json::array(),
                 gap_q75 = nlohmann::json::array();
  nlohmann::json uns_med = nlohmann::json::array(), uns_q25 = nlohmann::json::array(),
                 uns_q75 = nlohmann::json::array();
  std::vector<double> gaps(trials.size());
  std::vector<double> unsafe(trials.size());
  for (std::size_t k = 0; k < length; ++k) {
    std::uint64_t iter = 0;
    for (std::size_t t = 0; t < trials.size(); ++t) {
      const TrialRow& row = trials[t][std::min(k, trials[t].size() - 1)];
      if (k < trials[t].size()) iter = std::max(iter, row.iter);
      gaps[t] = row.gap;
      unsafe[t] = static_cast<double>(row.unsafe);
    }
    iters.push_back(iter);
    gap_med.push_back(finite_or_null(percentile(gaps, 0.5)));
    gap_q25.push_back(finite_or_null(percentile(gaps, 0.25)));
    gap_q75.push_back(finite_or_null(percentile(gaps, 0.75)));
    uns_med.push_back(percentile(unsafe, 0.5));
    uns_q25.push_back(percentile(unsafe, 0.25));
    uns_q75.push_back(percentile(unsafe, 0.75));
  }

  std::vector<double> final_gap, final_unsafe, final_best;
  std::map<std::string, int> terms;
  int zero_unsafe = 0;
  for (const auto& t : trials) {
    const TrialRow& last = t.back();
    final_gap.push_back(last.gap);
    final_unsafe.push_back(static_cast<double>(last.unsafe));
    final_best.push_back(last.best_safe_f);
    ++terms[last.term];
    if (last.unsafe == 0) ++zero_unsafe;
  }

  nlohmann::json out;
  out["trials"] = trials.size();
  out["iter"] = std::move(iters);
  out["gap"] = {{"median", gap_med}, {"q25", gap_q25}, {"q75", gap_q75}};
  out["unsafe"] = {{"median", uns_med}, {"q25", uns_q25}, {"q75", uns_q75}};
  out["final"] = {
      {"median_gap", finite_or_null(percentile(final_gap, 0.5))},
      {"median_unsafe", percentile(final_unsafe, 0.5)},
      {"median_best_safe_f", finite_or_null(percentile(final_best, 0.5))},
      {"zero_unsafe_trials", zero_unsafe},
      {"termination", terms},
  };
  return out;
}

nlohmann::json summarize_directory(const fs::path& cell_dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(cell_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("trial_", 0) == 0 && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw std::runtime_error("no trial_*.csv files in " + cell_dir.string());
  std::sort(files.begin(), files.end());
  std::vector<std::vector<TrialRow>> trials;
  trials.reserve(files.size());
  for (const auto& f : files) trials.push_back(read_trial_csv(f));

  nlohmann::json summary;
  const fs::path config_path = cell_dir / "config.json";
  if (fs::exists(config_path)) {
    std::ifstream in(config_path);
    const auto config = nlohmann::json::parse(in);
    summary["cell"] = config.value("cell", cell_dir.filename().string());
    summary["config"] = config;
  } else {
    summary["cell"] = cell_dir.filename().string();
  }
  summary.update(summarize(trials));
  std::ofstream out(cell_dir / "summary.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (cell_dir / "summary.json").string());
  out << summary.dump() << '\n';
  return summary;
}

nlohmann::json config_to_json(const RunConfig& c) {
  return {
      {"algorithm", std::string(to_string(c.algorithm))},
      {"lambda", c.lambda},
      {"max_iterations", c.max_iterations},
      {"unsafe_budget", c.unsafe_budget},
      {"n_seed", c.n_seed},
      {"n_safe", c.n_safe},
      {"t_data", c.t_data},
      {"zeta_data", c.zeta_data},
      {"walsh_order", c.walsh_order},
      {"lipschitz_samples", c.lipschitz_samples},
      {"w_safe", c.w_safe},
      {"w_unsafe", c.w_unsafe},
      {"va_pool", c.va_pool},
      {"delta_init", c.delta_init},
      {"alpha", c.alpha},
      {"theta_min", "1/d"},
      {"theta_max", "1-1/d"},
      {"stop_at_optimum", c.stop_at_optimum},
      {"theta_trace_every", c.theta_trace_every},
  };
}

std::vector<BitString> trial_seeds(const ExperimentSpec& spec, const Cell& cell,
                                   const Problem& problem, int trial) {
  Rng rng(trial_seed(spec.base_seed, "seeds:" + cell.seed_group(), trial));
  return generate_safe_seeds(problem, spec.n_seed, rng);
}

std::vector<fs::path> run_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("trials must be positive");
  std::vector<fs::path> dirs;
  std::vector<Problem> problems;
  for (const auto& cell : spec.cells) {
    problems.push_back(make_problem(cell.objective, cell.safety, cell.d));
    validate(resolve_config(spec, cell, 0), cell.d);
    const fs::path dir = spec.out_dir / cell.id();
    fs::create_directories(dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("trial_", 0) == 0 || name.rfind("theta_", 0) == 0 ||
          name.rfind("diag_", 0) == 0) {
        fs::remove(entry.path());
      }
    }
    nlohmann::json config = config_to_json(resolve_config(spec, cell, 0));
    config.erase("seed");
    config["cell"] = cell.id();
    config["problem"] = std::string(to_string(cell.objective));
    config["safety"] = std::string(to_string(cell.safety));
    config["d"] = cell.d;
    config["trials"] = spec.trials;
    config["base_seed"] = spec.base_seed;
    config["seed_rule"] = "base_seed ^ fnv1a64(\"<cell>#<trial>\")";
    config["known_optimum"] = problems.back().known_optimum.value_or(
        std::numeric_limits<double>::quiet_NaN());
    std::ofstream out(dir / "config.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write to " + dir.string());
    out << config.dump(2) << '\n';
    dirs.push_back(dir);
  }

  struct Job {
    std::size_t cell;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    for (int t = 0; t < spec.trials; ++t) jobs.push_back({c, t});
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      try {
        const Job job = jobs[k];
        const Cell& cell = spec.cells[job.cell];
        const Problem& problem = problems[job.cell];
        const RunConfig config = resolve_config(spec, cell, job.trial);
        std::vector<BitString> seeds;
        if (cell.algorithm != Algorithm::kAsng) seeds = trial_seeds(spec, cell, problem, job.trial);
        const RunResult result = run(config, problem, seeds);
        const fs::path dir = dirs[job.cell];
        {
          std::ofstream out(dir / trial_name("trial", job.trial), std::ios::binary);
          if (!out) throw std::runtime_error("cannot write to " + dir.string());
          write_trial_csv(out, job.trial, result);
        }
        if (spec.theta_trace_every > 0) {
          std::ofstream out(dir / trial_name("theta", job.trial), std::ios::binary);
          write_theta_csv(out, result);
        }
        if (spec.diagnostics && cell.algorithm == Algorithm::kSafeAsng) {
          std::ofstream out(dir / trial_name("diag", job.trial), std::ios::binary);
          write_diagnostics_csv(out, result);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs.size());
      }
    }
  };

  const int n_workers = std::min<int>(worker_count(spec.workers), static_cast<int>(jobs.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& dir : dirs) summarize_directory(dir);
  return dirs;
}

}  // namespace safeasng::harness
