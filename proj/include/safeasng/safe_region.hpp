#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "safeasng/archive.hpp"
#include "safeasng/bernoulli.hpp"
#include "safeasng/walsh.hpp"

namespace safeasng {

/// Lipschitz estimates at or below this value are treated as "no constraint" (infinite radius).
inline constexpr double kFlatLipschitz = 1e-12;
inline constexpr int kDefaultLipschitzSamples = 100;

struct LipschitzEstimate {
  std::vector<double> raw;        // after small-data inflation
  std::vector<double> corrected;  // after the degeneration correction
};

/// For each model: max over `num_samples` draws x_c ~ params and all single-bit flips x_n of
/// |s_hat(x_c) - s_hat(x_n)|. The same draws are shared by all models.
std::vector<double> estimate_lipschitz_raw(std::span<const WalshModel> models,
                                           const BernoulliParams& params, Rng& rng,
                                           int num_samples = kDefaultLipschitzSamples);

/// Multiplies by zeta^{1 - n/T} when n_data < t_data.
std::vector<double> inflate_small_data(std::span<const double> raw, std::size_t n_data,
                                       double t_data, double zeta = 10.0);

/// L_j = min(raw_j, max_{x in D0} s_j(x)); raw is returned unchanged when D0 is empty.
std::vector<double> correct_degeneration(std::span<const double> raw,
                                         std::span<const EvaluatedSample> d0);

/// D0: most recent n_safe entries with every s_j > 0.
std::vector<EvaluatedSample> select_positive(const Archive& archive, std::size_t n_safe);

struct SafeArchives {
  std::vector<EvaluatedSample> d;
  std::vector<EvaluatedSample> d0;
  bool d_fallback = false;  // D was empty and replaced by D0
};

/// D: most recent n_safe entries with s_j >= L_j for all j (falls back to D0 when empty).
/// Throws NoSafeCenterError when both are empty.
SafeArchives select_archives(const Archive& archive, std::span<const double> lipschitz,
                             std::size_t n_safe);

/// min_j s_j / L_j, with s_j / L_j = +inf for L_j <= kFlatLipschitz (and +inf for p = 0).
double center_radius(std::span<const double> s, std::span<const double> lipschitz);

/// Hamming distance to the center minus the center's radius.
double signed_distance(const BitString& x, const EvaluatedSample& center,
                       std::span<const double> lipschitz);

struct SafeRegion {
  std::vector<std::pair<BitString, double>> balls;  // (center, radius)
};

SafeRegion build_region(std::span<const EvaluatedSample> centers,
                        std::span<const double> lipschitz);

struct Projection {
  BitString original;
  BitString x;                  // projected point
  std::size_t center = 0;       // index of x_near in the center list
  double delta = 0.0;           // signed distance of `original` to x_near
  int n_flip = 0;               // 0 when no projection happened
  std::vector<int> ranking;     // differing bits, best likelihood increase first
  bool projected() const noexcept { return n_flip > 0; }
};

/// Moves x toward the nearest region (ties: most recent center) by flipping the ceil(delta)
/// differing bits with the largest likelihood increase. Ties in the increase go to the lowest
/// bit index. `centers` must be non-empty.
Projection project(const BitString& x, std::span<const EvaluatedSample> centers,
                   std::span<const double> lipschitz, const BernoulliParams& params);

/// If the projected point was already generated this iteration, swap the n_flip-th ranked flip
/// for the (n_flip+1)-th. Unprojected samples and rankings without a spare candidate are
/// returned unchanged.
BitString repair_duplicate(const Projection& projection,
                           std::span<const BitString> already_generated);

}  // namespace safeasng
