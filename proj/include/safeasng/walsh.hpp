#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "safeasng/bitstring.hpp"

namespace safeasng {

/// phi_S(x) = (-1)^{sum_{i in S} x_i}; the empty subset gives +1.
inline double walsh_eval(std::uint64_t subset, const BitString& x) noexcept {
  return (std::popcount(subset & x.mask()) & 1) ? -1.0 : 1.0;
}

/// All variable subsets of size <= order, ordered by size then lexicographically by members.
struct WalshBasis {
  int d = 0;
  int order = 0;
  std::vector<std::uint64_t> subsets;

  std::size_t size() const noexcept { return subsets.size(); }
  Eigen::VectorXd features(const BitString& x) const;
};

inline constexpr std::size_t kDefaultBasisCap = 100'000;

/// sum_{k=0}^{order} C(d, k)
std::size_t basis_count(int d, int order);

/// Throws ConfigError if order is out of [0, d], d > 64, or the basis exceeds `cap`.
WalshBasis enumerate_basis(int d, int order, std::size_t cap = kDefaultBasisCap);

struct WalshModel {
  WalshBasis basis;
  Eigen::VectorXd coefficients;

  double predict(const BitString& x) const;
  /// Text dump, one "members : coefficient" line per basis function (1-based members).
  std::string dump() const;
};

inline double predict(const WalshModel& model, const BitString& x) { return model.predict(x); }

/// Ridge jitter (times n) used when the normal equations are rank deficient.
inline constexpr double kRidgeJitter = 1e-8;

/// Solves gram * W = rhs for one or more right-hand sides. Uses a plain Cholesky factorization
/// when n >= m and the system is well conditioned, otherwise adds kRidgeJitter * n to the
/// diagonal; falls back to an eigenvalue-floored solve if factorization still fails.
Eigen::MatrixXd solve_normal_equations(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& rhs,
                                       std::size_t n);

/// Batch least-squares fit of one target.
WalshModel fit(std::span<const std::pair<BitString, double>> points, const WalshBasis& basis);

/// Accumulated Phi^T Phi and Phi^T Y for several targets observed on the same points.
class NormalEquationsCache {
 public:
  NormalEquationsCache(WalshBasis basis, int num_targets);

  /// Caller guarantees x has not been ingested before.
  void ingest(const BitString& x, std::span<const double> targets);
  void ingest(const BitString& x, double target) { ingest(x, std::span<const double>(&target, 1)); }

  /// One model per target, sharing a single factorization.
  std::vector<WalshModel> solve() const;

  const WalshBasis& basis() const noexcept { return basis_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  const Eigen::MatrixXd& moments() const noexcept { return moments_; }
  std::size_t num_points() const noexcept { return n_; }
  int num_targets() const noexcept { return static_cast<int>(moments_.cols()); }

 private:
  WalshBasis basis_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd moments_;
  std::size_t n_ = 0;
};

}  // namespace safeasng
