#include "safeasng/bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "safeasng/errors.hpp"

namespace safeasng {

namespace {

void check_dim(int d) {
  if (d < 2 || d > kMaxDim) {
    throw ConfigError("Bernoulli distribution needs 2 <= d <= 64, got " + std::to_string(d));
  }
}

}  // namespace

BernoulliParams BernoulliParams::uniform(int d) {
  check_dim(d);
  return from_theta(std::vector<double>(static_cast<std::size_t>(d), 0.5));
}

BernoulliParams BernoulliParams::from_theta(std::vector<double> theta) {
  const int d = static_cast<int>(theta.size());
  check_dim(d);
  BernoulliParams p;
  p.theta = std::move(theta);
  p.theta_min = 1.0 / d;
  p.theta_max = 1.0 - 1.0 / d;
  p.clamp_to_margins();
  return p;
}

void BernoulliParams::clamp_to_margins() noexcept {
  for (double& v : theta) v = std::max(std::min(v, theta_max), theta_min);
}

AsngState::AsngState(BernoulliParams p, double delta_init_, double alpha_)
    : params(std::move(p)),
      s_acc(params.theta.size(), 0.0),
      delta(delta_init_),
      delta_init(delta_init_),
      alpha(alpha_) {}

BitString sample(const BernoulliParams& params, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  BitString x(params.dim());
  for (int i = 0; i < params.dim(); ++i) {
    x.set(i, unif(rng) < params.theta[static_cast<std::size_t>(i)]);
  }
  return x;
}

double log_likelihood(const BernoulliParams& params, const BitString& x) {
  double ll = 0.0;
  for (int i = 0; i < params.dim(); ++i) {
    const double th = params.theta[static_cast<std::size_t>(i)];
    ll += std::log(x[i] ? th : 1.0 - th);
  }
  return ll;
}

double likelihood(const BernoulliParams& params, const BitString& x) {
  double p = 1.0;
  for (int i = 0; i < params.dim(); ++i) {
    const double th = params.theta[static_cast<std::size_t>(i)];
    p *= x[i] ? th : 1.0 - th;
  }
  return p;
}

std::vector<double> natural_gradient(const BernoulliParams& params,
                                     std::span<const UtilitySample> samples) {
  if (samples.empty()) throw std::invalid_argument("natural_gradient: need at least one sample");
  const std::size_t d = params.theta.size();
  std::vector<double> g(d, 0.0);
  for (const auto& smp : samples) {
    for (std::size_t i = 0; i < d; ++i) {
      const double xi = smp.x[static_cast<int>(i)] ? 1.0 : 0.0;
      g[i] += smp.utility * (xi - params.theta[i]);
    }
  }
  const double inv_lambda = 1.0 / static_cast<double>(samples.size());
  for (double& v : g) v *= inv_lambda;
  return g;
}

double fisher_norm(const BernoulliParams& params, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double th = params.theta[i];
    acc += v[i] * v[i] / (th * (1.0 - th));
  }
  return std::sqrt(acc);
}

std::vector<double> fisher_sqrt_apply(const BernoulliParams& params, std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double th = params.theta[i];
    out[i] = v[i] / std::sqrt(th * (1.0 - th));
  }
  return out;
}

AsngState asng_update(const AsngState& state, std::span<const UtilitySample> samples) {
  AsngState next = state;
  next.t = state.t + 1;

  const auto& params = state.params;
  const std::vector<double> grad = natural_gradient(params, samples);
  const double gnorm = fisher_norm(params, grad);
  if (!(gnorm > 0.0)) return next;

  const std::size_t d = grad.size();
  const double eps = state.delta / gnorm;
  for (std::size_t i = 0; i < d; ++i) next.params.theta[i] = params.theta[i] + eps * grad[i];
  next.params.clamp_to_margins();

  const double beta = state.delta / std::sqrt(static_cast<double>(d));
  const double path_scale = std::sqrt(beta * (2.0 - beta)) / gnorm;
  const std::vector<double> whitened = fisher_sqrt_apply(params, grad);
  double s_norm2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    next.s_acc[i] = (1.0 - beta) * state.s_acc[i] + path_scale * whitened[i];
    s_norm2 += next.s_acc[i] * next.s_acc[i];
  }
  next.gamma = (1.0 - beta) * (1.0 - beta) * state.gamma + beta * (2.0 - beta);
  next.delta = std::min(state.delta * std::exp(beta * (s_norm2 / state.alpha - next.gamma)),
                        state.delta_init);
  return next;
}

BernoulliParams init_from_seeds(std::span<const BitString> seeds, int d) {
  if (seeds.empty()) throw std::invalid_argument("init_from_seeds: empty seed set");
  std::vector<double> theta(static_cast<std::size_t>(d), 0.0);
  for (const auto& x : seeds) {
    if (x.dim() != d) throw std::invalid_argument("init_from_seeds: seed dimension mismatch");
    for (int i = 0; i < d; ++i) theta[static_cast<std::size_t>(i)] += x[i] ? 1.0 : 0.0;
  }
  for (double& v : theta) v /= static_cast<double>(seeds.size());
  return BernoulliParams::from_theta(std::move(theta));
}

std::pair<double, double> objective_utilities(double f1, double f2) noexcept {
  return f1 >= f2 ? std::pair{1.0, -1.0} : std::pair{-1.0, 1.0};
}

}  // namespace safeasng
