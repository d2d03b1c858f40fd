#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "safeasng/bitstring.hpp"

namespace safeasng {

using Rng = std::mt19937_64;

// Objectives (maximized). Formulas use 1-based x_i = stored bit i-1.
double onemax(const BitString& x);
double leading_ones(const BitString& x);
/// sum_i 2^{i-1} x_i. Throws ConfigError for d > 53.
double binval(const BitString& x);
/// sum_i 2^{d-i} x_i. Throws ConfigError for d > 53.
double reversed_binval(const BitString& x);

/// Ones among the trailing d - floor(d/2) bits, minus floor(d/4).
double safety_compatible(const BitString& x);
/// floor(d/8) minus the ones among the trailing floor(d/4) bits.
double safety_conflicting(const BitString& x);

enum class Objective { kOneMax, kLeadingOnes, kBinVal, kReversedBinVal };
enum class Safety { kNone, kCompatible, kConflicting };

Objective parse_objective(std::string_view name);
Safety parse_safety(std::string_view name);
std::string_view to_string(Objective o) noexcept;
std::string_view to_string(Safety s) noexcept;

struct Problem {
  std::string name;
  int d = 0;
  std::function<double(const BitString&)> objective;
  std::vector<std::function<double(const BitString&)>> safety;
  std::optional<double> known_optimum;  // best f over the safe set

  int num_safety() const noexcept { return static_cast<int>(safety.size()); }
  std::vector<double> safety_values(const BitString& x) const;
};

/// Builds one of the benchmark problems with its closed-form constrained optimum.
/// Throws ConfigError on unsupported (objective, safety, d) combinations.
Problem make_problem(Objective objective, Safety safety, int d);
Problem make_problem(std::string_view objective, std::string_view safety, int d);

/// Closed-form best safe objective value. Oracle-checked for small d in the tests.
double closed_form_optimum(Objective objective, Safety safety, int d);

inline constexpr int kMaxOracleDim = 20;

/// Exhaustive enumeration: max f over all x with every s_j(x) >= 0 and the first maximizer in
/// mask order. Throws OracleUnavailableError for d > 20.
std::pair<double, BitString> oracle_constrained_optimum(const Problem& problem);

/// Uniform bit string of length d.
BitString uniform_bitstring(int d, Rng& rng);

inline constexpr std::uint64_t kSeedRejectionCap = 10'000'000;

/// Rejection-samples n_seed uniform strings with every s_j >= 0.
/// Throws InfeasibleSeedError after kSeedRejectionCap draws.
std::vector<BitString> generate_safe_seeds(const Problem& problem, int n_seed, Rng& rng,
                                           std::uint64_t max_draws = kSeedRejectionCap);

}  // namespace safeasng
