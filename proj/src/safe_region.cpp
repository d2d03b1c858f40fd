#include "safeasng/safe_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "safeasng/errors.hpp"

namespace safeasng {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::vector<double> estimate_lipschitz_raw(std::span<const WalshModel> models,
                                           const BernoulliParams& params, Rng& rng,
                                           int num_samples) {
  std::vector<double> out(models.size(), 0.0);
  if (models.empty()) return out;
  const int d = params.dim();
  std::vector<double> diff(static_cast<std::size_t>(d));
  for (int k = 0; k < num_samples; ++k) {
    const BitString xc = sample(params, rng);
    for (std::size_t j = 0; j < models.size(); ++j) {
      const WalshModel& model = models[j];
      // s(x) - s(flip_i x) = sum over subsets containing i of 2 w phi(x)
      std::fill(diff.begin(), diff.end(), 0.0);
      for (std::size_t l = 0; l < model.basis.subsets.size(); ++l) {
        std::uint64_t subset = model.basis.subsets[l];
        if (subset == 0) continue;
        const double term =
            2.0 * model.coefficients[static_cast<Eigen::Index>(l)] * walsh_eval(subset, xc);
        while (subset != 0) {
          diff[static_cast<std::size_t>(std::countr_zero(subset))] += term;
          subset &= subset - 1;
        }
      }
      for (double v : diff) out[j] = std::max(out[j], std::abs(v));
    }
  }
  return out;
}

std::vector<double> inflate_small_data(std::span<const double> raw, std::size_t n_data,
                                       double t_data, double zeta) {
  std::vector<double> out(raw.begin(), raw.end());
  const double n = static_cast<double>(n_data);
  if (n < t_data) {
    const double factor = std::pow(zeta, 1.0 - n / t_data);
    for (double& v : out) v *= factor;
  }
  return out;
}

std::vector<double> correct_degeneration(std::span<const double> raw,
                                         std::span<const EvaluatedSample> d0) {
  std::vector<double> out(raw.begin(), raw.end());
  if (d0.empty()) return out;
  for (std::size_t j = 0; j < out.size(); ++j) {
    double best = -kInf;
    for (const auto& e : d0) best = std::max(best, e.s[j]);
    out[j] = std::min(out[j], best);
  }
  return out;
}

std::vector<EvaluatedSample> select_positive(const Archive& archive, std::size_t n_safe) {
  return select_recent(
      archive,
      [](const EvaluatedSample& e) {
        return std::all_of(e.s.begin(), e.s.end(), [](double v) { return v > 0.0; });
      },
      n_safe);
}

SafeArchives select_archives(const Archive& archive, std::span<const double> lipschitz,
                             std::size_t n_safe) {
  SafeArchives out;
  out.d0 = select_positive(archive, n_safe);
  out.d = select_recent(
      archive,
      [&](const EvaluatedSample& e) {
        for (std::size_t j = 0; j < e.s.size(); ++j) {
          if (!(e.s[j] >= lipschitz[j]) || e.s[j] < 0.0) return false;
        }
        return true;
      },
      n_safe);
  if (out.d.empty()) {
    if (out.d0.empty()) {
      throw NoSafeCenterError("no archive entry qualifies as a safe-region center");
    }
    out.d = out.d0;
    out.d_fallback = true;
  }
  return out;
}

double center_radius(std::span<const double> s, std::span<const double> lipschitz) {
  double r = kInf;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (lipschitz[j] <= kFlatLipschitz) continue;
    r = std::min(r, s[j] / lipschitz[j]);
  }
  return r;
}

double signed_distance(const BitString& x, const EvaluatedSample& center,
                       std::span<const double> lipschitz) {
  return hamming_distance(x, center.x) - center_radius(center.s, lipschitz);
}

SafeRegion build_region(std::span<const EvaluatedSample> centers,
                        std::span<const double> lipschitz) {
  SafeRegion region;
  region.balls.reserve(centers.size());
  for (const auto& c : centers) region.balls.emplace_back(c.x, center_radius(c.s, lipschitz));
  return region;
}

Projection project(const BitString& x, std::span<const EvaluatedSample> centers,
                   std::span<const double> lipschitz, const BernoulliParams& params) {
  if (centers.empty()) throw std::invalid_argument("project: no safe-region centers");
  Projection out;
  out.original = x;
  out.x = x;

  double best = kInf;
  std::uint64_t best_index = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double delta = signed_distance(x, centers[c], lipschitz);
    if (c == 0 || delta < best || (delta == best && centers[c].eval_index > best_index)) {
      best = delta;
      best_index = centers[c].eval_index;
      out.center = c;
    }
  }
  out.delta = best;
  if (best <= 0.0) return out;

  const BitString& near = centers[out.center].x;
  const double px = likelihood(params, x);
  std::vector<std::pair<double, int>> gains;
  for (int i = 0; i < x.dim(); ++i) {
    if (x[i] == near[i]) continue;
    const double th = params.theta[static_cast<std::size_t>(i)];
    const double ratio = x[i] ? (1.0 - th) / th : th / (1.0 - th);
    gains.emplace_back(px * ratio - px, i);
  }
  std::stable_sort(gains.begin(), gains.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  out.ranking.reserve(gains.size());
  for (const auto& g : gains) out.ranking.push_back(g.second);

  const double need = std::ceil(best);
  out.n_flip = static_cast<int>(std::min(need, static_cast<double>(out.ranking.size())));
  for (int k = 0; k < out.n_flip; ++k) out.x.flip(out.ranking[static_cast<std::size_t>(k)]);
  return out;
}

BitString repair_duplicate(const Projection& projection,
                           std::span<const BitString> already_generated) {
  const bool duplicate = std::find(already_generated.begin(), already_generated.end(),
                                   projection.x) != already_generated.end();
  if (!duplicate || !projection.projected()) return projection.x;
  const auto n = static_cast<std::size_t>(projection.n_flip);
  if (projection.ranking.size() <= n) return projection.x;
  BitString out = projection.x;
  out.flip(projection.ranking[n - 1]);
  out.flip(projection.ranking[n]);
  return out;
}

}  // namespace safeasng
