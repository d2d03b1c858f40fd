#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "safeasng/benchmarks.hpp"
#include "safeasng/bitstring.hpp"

namespace safeasng {

/// Product-Bernoulli search distribution with margins [1/d, 1 - 1/d].
struct BernoulliParams {
  std::vector<double> theta;
  double theta_min = 0.0;
  double theta_max = 1.0;

  /// theta = (0.5, ..., 0.5). Throws ConfigError unless 2 <= d <= 64.
  static BernoulliParams uniform(int d);
  /// Takes theta as given and clamps it into the margins.
  static BernoulliParams from_theta(std::vector<double> theta);

  int dim() const noexcept { return static_cast<int>(theta.size()); }
  void clamp_to_margins() noexcept;
};

struct AsngState {
  BernoulliParams params;
  std::vector<double> s_acc;  // evolution path of the normalized natural gradient
  double gamma = 0.0;
  double delta = 1.0;
  double delta_init = 1.0;
  double alpha = 1.5;
  std::uint64_t t = 0;

  explicit AsngState(BernoulliParams p, double delta_init = 1.0, double alpha = 1.5);
  int dim() const noexcept { return params.dim(); }
};

struct UtilitySample {
  BitString x;
  double utility = 0.0;
};

BitString sample(const BernoulliParams& params, Rng& rng);

double log_likelihood(const BernoulliParams& params, const BitString& x);
double likelihood(const BernoulliParams& params, const BitString& x);

/// G = (1/lambda) sum_i u_i (x_i - theta). For the Bernoulli family this already is the
/// natural gradient: the Fisher matrix is diag(1 / (theta_i (1 - theta_i))).
std::vector<double> natural_gradient(const BernoulliParams& params,
                                     std::span<const UtilitySample> samples);

/// sqrt(sum_i v_i^2 / (theta_i (1 - theta_i)))
double fisher_norm(const BernoulliParams& params, std::span<const double> v);
/// v_i / sqrt(theta_i (1 - theta_i))
std::vector<double> fisher_sqrt_apply(const BernoulliParams& params, std::span<const double> v);

/// One ASNG step: parameter move of Fisher length delta, margin clamp, accumulation update and
/// SNR-based adaptation of delta (capped at delta_init). Fisher quantities use the pre-update
/// theta. A zero gradient freezes everything except t.
AsngState asng_update(const AsngState& state, std::span<const UtilitySample> samples);

/// Componentwise mean of the seeds, clamped into [1/d, 1 - 1/d].
BernoulliParams init_from_seeds(std::span<const BitString> seeds, int d);

/// lambda = 2 ranking utilities from raw objective values: (+1, -1) iff f1 >= f2.
std::pair<double, double> objective_utilities(double f1, double f2) noexcept;

}  // namespace safeasng
