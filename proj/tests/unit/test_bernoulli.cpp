#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "safeasng/benchmarks.hpp"
#include "safeasng/bernoulli.hpp"
#include "safeasng/errors.hpp"

using namespace safeasng;
using doctest::Approx;

namespace {
BitString bs(const char* s) { return BitString::from_string(s); }
}  // namespace

TEST_CASE("margins") {
  const auto p = BernoulliParams::uniform(10);
  CHECK(p.theta_min == Approx(0.1));
  CHECK(p.theta_max == Approx(0.9));
  CHECK_THROWS_AS(BernoulliParams::uniform(1), ConfigError);
  const auto q = BernoulliParams::from_theta({0.0, 1.0, 0.3, 0.5});
  CHECK(q.theta == std::vector<double>{0.25, 0.75, 0.3, 0.5});
}

TEST_CASE("sampling frequencies at the margins") {
  Rng rng(42);
  auto hi = BernoulliParams::from_theta(std::vector<double>(10, 1.0));
  auto lo = BernoulliParams::from_theta(std::vector<double>(10, 0.0));
  const int n = 100000;
  double ones_hi = 0;
  double ones_lo = 0;
  for (int k = 0; k < n; ++k) {
    ones_hi += sample(hi, rng).count_ones();
    ones_lo += sample(lo, rng).count_ones();
  }
  CHECK(std::abs(ones_hi / (10.0 * n) - 0.9) < 0.01);
  CHECK(std::abs(ones_lo / (10.0 * n) - 0.1) < 0.01);

  Rng a(9);
  Rng b(9);
  const auto u = BernoulliParams::uniform(20);
  for (int k = 0; k < 100; ++k) CHECK(sample(u, a) == sample(u, b));
}

TEST_CASE("likelihood") {
  CHECK(likelihood(BernoulliParams::uniform(2), bs("10")) == Approx(0.25));
  BernoulliParams p{{0.9, 0.1}, 0.0, 1.0};
  CHECK(likelihood(p, bs("10")) == Approx(0.81));
  CHECK(log_likelihood(p, bs("10")) == Approx(std::log(0.81)));

  Rng rng(1);
  std::vector<double> theta(6);
  std::uniform_real_distribution<double> unif(0.2, 0.8);
  for (double& t : theta) t = unif(rng);
  const auto q = BernoulliParams::from_theta(theta);
  double total = 0.0;
  for (std::uint64_t m = 0; m < 64; ++m) total += likelihood(q, BitString(6, m));
  CHECK(total == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("natural gradient and fisher norm") {
  const auto p = BernoulliParams::uniform(2);
  const UtilitySample s1[] = {{bs("11"), 1.0}, {bs("00"), -1.0}};
  const auto g = natural_gradient(p, s1);
  CHECK(g[0] == Approx(0.5));
  CHECK(g[1] == Approx(0.5));
  CHECK(fisher_norm(p, g) == Approx(std::sqrt(2.0)));

  const UtilitySample s2[] = {{bs("10"), 1.0}, {bs("10"), -1.0}};
  for (double v : natural_gradient(p, s2)) CHECK(v == 0.0);
  const std::vector<double> zero(2, 0.0);
  CHECK(fisher_norm(p, zero) == 0.0);

  Rng rng(4);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> theta(8);
    std::vector<double> v(8);
    for (auto& t : theta) t = 0.5 + 0.35 * unif(rng);
    for (auto& x : v) x = unif(rng);
    const auto q = BernoulliParams::from_theta(theta);
    const auto w = fisher_sqrt_apply(q, v);
    double n2 = 0.0;
    for (double x : w) n2 += x * x;
    CHECK(std::abs(std::sqrt(n2) - fisher_norm(q, v)) < 1e-12);
  }
}

TEST_CASE("asng step at d=2 is pinned by the margins") {
  AsngState st(BernoulliParams::uniform(2));
  const UtilitySample s[] = {{bs("11"), 1.0}, {bs("00"), -1.0}};
  const AsngState next = asng_update(st, s);
  CHECK(next.params.theta == std::vector<double>{0.5, 0.5});
  CHECK(next.t == 1);
}

TEST_CASE("asng step at d=4 matches the scripted reference") {
  AsngState st(BernoulliParams::uniform(4));
  const UtilitySample s[] = {{bs("1100"), 1.0}, {bs("0000"), -1.0}};
  const AsngState next = asng_update(st, s);
  const std::vector<double> theta = {0.75, 0.75, 0.5, 0.5};
  for (int i = 0; i < 4; ++i) CHECK(next.params.theta[i] == Approx(theta[i]).epsilon(1e-15));
  CHECK(next.s_acc[0] == Approx(0.6123724356957945).epsilon(1e-14));
  CHECK(next.s_acc[1] == Approx(0.6123724356957945).epsilon(1e-14));
  CHECK(next.s_acc[2] == 0.0);
  CHECK(next.s_acc[3] == 0.0);
  CHECK(next.gamma == Approx(0.75).epsilon(1e-15));
  CHECK(next.delta == Approx(0.8824969025845953).epsilon(1e-14));
}

TEST_CASE("zero gradient only advances t") {
  AsngState st(BernoulliParams::uniform(4));
  st.gamma = 0.3;
  st.delta = 0.7;
  const UtilitySample s[] = {{bs("1010"), 1.0}, {bs("1010"), -1.0}};
  const AsngState next = asng_update(st, s);
  CHECK(next.t == 1);
  CHECK(next.params.theta == st.params.theta);
  CHECK(next.s_acc == st.s_acc);
  CHECK(next.gamma == 0.3);
  CHECK(next.delta == 0.7);
}

TEST_CASE("straight-line replay of 100 updates") {
  const int d = 10;
  AsngState st(BernoulliParams::uniform(d));

  double th[d], sacc[d];
  for (int i = 0; i < d; ++i) {
    th[i] = 0.5;
    sacc[i] = 0.0;
  }
  double gam = 0.0, del = 1.0;
  const double lo = 1.0 / d, hi = 1.0 - 1.0 / d;

  for (int k = 0; k < 100; ++k) {
    const std::uint64_t m1 = (0x2d5ULL * (k + 1)) & 0x3ff;
    const std::uint64_t m2 = (k % 2 == 0) ? (~m1 & 0x3ff) : ((m1 >> 3) | 1);
    const UtilitySample s[] = {{BitString(d, m1), 1.0}, {BitString(d, m2), -1.0}};
    st = asng_update(st, s);

    double g[d], n2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double x1 = (m1 >> i) & 1, x2 = (m2 >> i) & 1;
      g[i] = (1.0 * (x1 - th[i]) + -1.0 * (x2 - th[i])) / 2.0;
      n2 += g[i] * g[i] / (th[i] * (1.0 - th[i]));
    }
    const double gn = std::sqrt(n2);
    if (gn > 0.0) {
      const double beta = del / std::sqrt(double(d));
      double snorm = 0.0;
      double nt[d];
      for (int i = 0; i < d; ++i) {
        nt[i] = std::clamp(th[i] + (del / gn) * g[i], lo, hi);
        sacc[i] = (1.0 - beta) * sacc[i] +
                  (std::sqrt(beta * (2.0 - beta)) / gn) * (g[i] / std::sqrt(th[i] * (1.0 - th[i])));
        snorm += sacc[i] * sacc[i];
      }
      for (int i = 0; i < d; ++i) th[i] = nt[i];
      gam = (1.0 - beta) * (1.0 - beta) * gam + beta * (2.0 - beta);
      del = std::min(del * std::exp(beta * (snorm / 1.5 - gam)), 1.0);
    }
    for (int i = 0; i < d; ++i) {
      REQUIRE(st.params.theta[i] == th[i]);
      REQUIRE(st.s_acc[i] == sacc[i]);
    }
    REQUIRE(st.gamma == gam);
    REQUIRE(st.delta == del);
    REQUIRE(st.t == std::uint64_t(k + 1));
  }
}

TEST_CASE("theta, delta and gamma stay in range under random updates") {
  Rng rng(8);
  for (int d : {2, 3, 10, 25, 64}) {
    AsngState st(BernoulliParams::uniform(d));
    for (int k = 0; k < 2000; ++k) {
      const BitString a = sample(st.params, rng);
      const BitString b = sample(st.params, rng);
      const double u = (rng() & 1) ? 1.0 : -1.0;
      const UtilitySample s[] = {{a, u}, {b, -u}};
      st = asng_update(st, s);
      for (double t : st.params.theta) {
        REQUIRE(t >= 1.0 / d);
        REQUIRE(t <= 1.0 - 1.0 / d);
      }
      REQUIRE(st.delta <= 1.0);
      REQUIRE(st.delta > 0.0);
      REQUIRE(st.gamma >= 0.0);
      REQUIRE(st.gamma <= 1.0);
    }
  }
}

TEST_CASE("initialization from seeds") {
  const BitString s1[] = {bs("1000"), bs("1100")};
  CHECK(init_from_seeds(s1, 4).theta == std::vector<double>{0.75, 0.5, 0.25, 0.25});
  const BitString s2[] = {BitString::ones(10)};
  for (double t : init_from_seeds(s2, 10).theta) CHECK(t == Approx(0.9));
  const BitString s3[] = {bs("1010"), bs("0101")};
  CHECK(init_from_seeds(s3, 4).theta == std::vector<double>(4, 0.5));
}

TEST_CASE("objective utilities") {
  CHECK(objective_utilities(2, 1) == std::pair{1.0, -1.0});
  CHECK(objective_utilities(1, 2) == std::pair{-1.0, 1.0});
  CHECK(objective_utilities(1, 1) == std::pair{1.0, -1.0});
}
