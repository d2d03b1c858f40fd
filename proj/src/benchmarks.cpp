#include "safeasng/benchmarks.hpp"

#include <cmath>
#include <limits>

#include "safeasng/archive.hpp"
#include "safeasng/errors.hpp"

namespace safeasng {

namespace {

constexpr int kMaxExactPowerDim = 53;

void require_exact_powers(int d) {
  if (d > kMaxExactPowerDim) {
    throw ConfigError("BinVal coefficients are not exactly representable for d > 53");
  }
}

int ones_in_range(const BitString& x, int begin, int end) {
  const std::uint64_t m = low_mask(end) & ~low_mask(begin);
  return std::popcount(x.mask() & m);
}

}  // namespace

double onemax(const BitString& x) { return x.count_ones(); }

double leading_ones(const BitString& x) {
  return std::countr_one(x.mask() & low_mask(x.dim()));
}

double binval(const BitString& x) {
  require_exact_powers(x.dim());
  return static_cast<double>(x.mask());
}

double reversed_binval(const BitString& x) {
  require_exact_powers(x.dim());
  const int d = x.dim();
  double v = 0.0;
  for (int i = 0; i < d; ++i) {
    if (x[i]) v += std::ldexp(1.0, d - 1 - i);
  }
  return v;
}

double safety_compatible(const BitString& x) {
  const int d = x.dim();
  return ones_in_range(x, d / 2, d) - d / 4;
}

double safety_conflicting(const BitString& x) {
  const int d = x.dim();
  return d / 8 - ones_in_range(x, d - d / 4, d);
}

Objective parse_objective(std::string_view name) {
  if (name == "onemax") return Objective::kOneMax;
  if (name == "leadingones") return Objective::kLeadingOnes;
  if (name == "binval") return Objective::kBinVal;
  if (name == "revbinval") return Objective::kReversedBinVal;
  throw ConfigError("unknown problem '" + std::string(name) +
                    "' (expected onemax, leadingones, binval, revbinval)");
}

Safety parse_safety(std::string_view name) {
  if (name == "none") return Safety::kNone;
  if (name == "compatible") return Safety::kCompatible;
  if (name == "conflicting") return Safety::kConflicting;
  throw ConfigError("unknown safety setting '" + std::string(name) +
                    "' (expected none, compatible, conflicting)");
}

std::string_view to_string(Objective o) noexcept {
  switch (o) {
    case Objective::kOneMax: return "onemax";
    case Objective::kLeadingOnes: return "leadingones";
    case Objective::kBinVal: return "binval";
    case Objective::kReversedBinVal: return "revbinval";
  }
  return "?";
}

std::string_view to_string(Safety s) noexcept {
  switch (s) {
    case Safety::kNone: return "none";
    case Safety::kCompatible: return "compatible";
    case Safety::kConflicting: return "conflicting";
  }
  return "?";
}

std::vector<double> Problem::safety_values(const BitString& x) const {
  std::vector<double> out;
  out.reserve(safety.size());
  for (const auto& s : safety) out.push_back(s(x));
  return out;
}

double closed_form_optimum(Objective objective, Safety safety, int d) {
  const double all = std::ldexp(1.0, d) - 1.0;
  if (safety != Safety::kConflicting) {
    // all-ones is safe under the compatible constraint
    switch (objective) {
      case Objective::kOneMax:
      case Objective::kLeadingOnes: return d;
      case Objective::kBinVal:
      case Objective::kReversedBinVal: return all;
    }
  }
  // Trailing q bits may hold at most m ones.
  const int q = d / 4;
  const int m = d / 8;
  switch (objective) {
    case Objective::kOneMax: return d - (q - m);
    case Objective::kLeadingOnes: return d - q + m;
    case Objective::kBinVal: return all - (std::ldexp(1.0, d - m) - std::ldexp(1.0, d - q));
    case Objective::kReversedBinVal: return std::ldexp(1.0, d) - std::ldexp(1.0, q - m);
  }
  return 0.0;
}

Problem make_problem(Objective objective, Safety safety, int d) {
  if (d < 1 || d > kMaxDim) throw ConfigError("dimension must be in [1, 64]");
  Problem p;
  p.d = d;
  p.name = std::string(to_string(objective)) + "/" + std::string(to_string(safety));
  switch (objective) {
    case Objective::kOneMax: p.objective = onemax; break;
    case Objective::kLeadingOnes: p.objective = leading_ones; break;
    case Objective::kBinVal:
      require_exact_powers(d);
      p.objective = binval;
      break;
    case Objective::kReversedBinVal:
      require_exact_powers(d);
      p.objective = reversed_binval;
      break;
  }
  switch (safety) {
    case Safety::kNone: break;
    case Safety::kCompatible:
      if (d < 4) throw ConfigError("compatible safety function needs d >= 4");
      p.safety.emplace_back(safety_compatible);
      break;
    case Safety::kConflicting:
      if (d < 8) throw ConfigError("conflicting safety function needs d >= 8");
      p.safety.emplace_back(safety_conflicting);
      break;
  }
  p.known_optimum = closed_form_optimum(objective, safety, d);
  return p;
}

Problem make_problem(std::string_view objective, std::string_view safety, int d) {
  return make_problem(parse_objective(objective), parse_safety(safety), d);
}

std::pair<double, BitString> oracle_constrained_optimum(const Problem& problem) {
  const int d = problem.d;
  if (d > kMaxOracleDim) {
    throw OracleUnavailableError("exhaustive optimum needs d <= 20, got " + std::to_string(d));
  }
  double best = -std::numeric_limits<double>::infinity();
  BitString arg(d);
  const std::uint64_t end = std::uint64_t{1} << d;
  for (std::uint64_t m = 0; m < end; ++m) {
    const BitString x(d, m);
    bool safe = true;
    for (const auto& s : problem.safety) safe = safe && s(x) >= 0.0;
    if (!safe) continue;
    const double f = problem.objective(x);
    if (f > best) {
      best = f;
      arg = x;
    }
  }
  return {best, arg};
}

BitString uniform_bitstring(int d, Rng& rng) { return BitString(d, rng() & low_mask(d)); }

std::vector<BitString> generate_safe_seeds(const Problem& problem, int n_seed, Rng& rng,
                                           std::uint64_t max_draws) {
  if (n_seed < 1) throw std::invalid_argument("generate_safe_seeds: n_seed must be positive");
  std::vector<BitString> seeds;
  seeds.reserve(static_cast<std::size_t>(n_seed));
  std::uint64_t draws = 0;
  while (static_cast<int>(seeds.size()) < n_seed) {
    if (draws++ >= max_draws) {
      throw InfeasibleSeedError("could not find " + std::to_string(n_seed) + " safe seeds for " +
                                problem.name + " within " + std::to_string(max_draws) +
                                " uniform draws");
    }
    BitString x = uniform_bitstring(problem.d, rng);
    if (is_safe(problem.safety_values(x))) seeds.push_back(x);
  }
  return seeds;
}

}  // namespace safeasng
