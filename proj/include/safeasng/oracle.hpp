#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "safeasng/benchmarks.hpp"
#include "safeasng/bitstring.hpp"
#include "safeasng/safe_region.hpp"

// Brute-force reference implementations. Nothing in this file reuses the Walsh, projection or
// likelihood code it is meant to check; dimensions are capped so each check stays fast.
namespace safeasng::oracle {

inline constexpr int kMaxFitDim = 12;
inline constexpr int kMaxSafeCheckDim = 12;
inline constexpr int kMaxProjectionDim = 10;

/// Full-enumeration least squares over all subsets of size <= order, solved by a dense QR on the
/// design matrix. Coefficients follow the same subset order as enumerate_basis.
std::vector<double> exhaustive_fit(int d, const std::function<double(const BitString&)>& target,
                                   int order);

struct SafetyViolation {
  BitString center;
  BitString point;
  int constraint = 0;
  double value = 0.0;
};

/// Every point inside any ball of the region whose true safety value is negative.
std::vector<SafetyViolation> exhaustive_safe_check(const SafeRegion& region,
                                                   const Problem& problem);

/// Max-likelihood point among the points of the ball that are closest to x.
BitString exhaustive_projection(const BitString& x, const BitString& center, double radius,
                                const std::vector<double>& theta);

struct OracleReport {
  std::string check;
  std::string instance;
  double oracle_value = 0.0;
  double impl_value = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Runs the full oracle comparison suite (used by the `verify` subcommand).
std::vector<OracleReport> run_suite(std::uint64_t seed);

std::string format_reports(const std::vector<OracleReport>& reports);

}  // namespace safeasng::oracle
