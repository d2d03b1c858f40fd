#include <cmath>

#include "doctest.h"
#include "safeasng/errors.hpp"
#include "safeasng/optimizers.hpp"
#include "safeasng/safe_region.hpp"

using namespace safeasng;

namespace {

RunConfig config_for(Algorithm a, int d, std::uint64_t seed, std::uint64_t iters) {
  RunConfig c = default_config(a, d);
  c.seed = seed;
  c.max_iterations = iters;
  return c;
}

std::vector<BitString> seeds_for(const Problem& p, std::uint64_t seed, int n = 10) {
  Rng rng(seed);
  return generate_safe_seeds(p, n, rng);
}

void check_bookkeeping(const RunResult& r, const Problem& p, std::uint64_t lambda) {
  REQUIRE_FALSE(r.records.empty());
  std::uint64_t unsafe = 0;
  for (const auto& e : r.evaluations) unsafe += is_safe(p.safety_values(e.x)) ? 0 : 1;
  CHECK(unsafe == r.unsafe);
  CHECK(r.evaluations.size() == r.evals);
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    const auto& rec = r.records[k];
    CHECK(rec.iter == k + 1);
    if (r.termination != Termination::kVaExhausted) CHECK(rec.evals == lambda * rec.iter);
    if (k > 0) {
      CHECK(rec.best_safe_f >= r.records[k - 1].best_safe_f);
      CHECK(rec.unsafe >= r.records[k - 1].unsafe);
    }
  }
}

bool same_result(const RunResult& a, const RunResult& b, bool compare_best = true) {
  if (a.records.size() != b.records.size() || a.termination != b.termination) return false;
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    const auto& x = a.records[k];
    const auto& y = b.records[k];
    if (compare_best && x.best_safe_f != y.best_safe_f) return false;
    if (x.evals != y.evals || x.unsafe != y.unsafe ||
        x.delta != y.delta || x.theta != y.theta) {
      return false;
    }
  }
  return a.final_theta == b.final_theta;
}

}  // namespace

TEST_CASE("names and configuration") {
  for (auto a : {Algorithm::kSafeAsng, Algorithm::kAsngConstraint, Algorithm::kAsngViolation,
                 Algorithm::kAsng}) {
    CHECK(parse_algorithm(to_string(a)) == a);
  }
  CHECK_THROWS_AS(parse_algorithm("cmaes"), ConfigError);
  CHECK(parse_termination("unsafe-budget") == Termination::kUnsafeBudget);

  const auto c = default_config(Algorithm::kSafeAsng, 10);
  CHECK(c.max_iterations == 1000);
  CHECK(c.n_safe == 100);
  CHECK(c.walsh_order == 2);
  CHECK(c.va_pool == 100);
  CHECK(default_config(Algorithm::kSafeAsng, 50).walsh_order == 1);

  auto bad = c;
  bad.lambda = 4;
  CHECK_THROWS_AS(validate(bad, 10), ConfigError);
  bad = c;
  bad.walsh_order = 11;
  CHECK_THROWS_AS(validate(bad, 10), ConfigError);
}

TEST_CASE("safe asng solves compatible OneMax d=10 without unsafe evaluations") {
  const Problem p = make_problem("onemax", "compatible", 10);
  auto c = config_for(Algorithm::kSafeAsng, 10, 0, 1000);
  c.record_diagnostics = true;
  const auto r = run_safe_asng(c, p, seeds_for(p, 0));
  CHECK(r.records.back().gap == 0.0);
  CHECK(r.unsafe == 0);
  check_bookkeeping(r, p, 2);
}

TEST_CASE("every evaluated point lies in the safe region of its iteration") {
  for (auto saf : {"compatible", "conflicting"}) {
    const Problem p = make_problem("binval", saf, 10);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto c = config_for(Algorithm::kSafeAsng, 10, seed, 300);
      c.record_diagnostics = true;
      const auto r = run_safe_asng(c, p, seeds_for(p, seed + 100));
      REQUIRE(r.diagnostics.size() == r.records.size() - (r.termination == Termination::kNoSafeCenter));
      for (const auto& g : r.diagnostics) {
        for (double dist : g.region_distance) CHECK(dist <= 0.0);
        CHECK(g.n_flip.size() == 2);
      }
      check_bookkeeping(r, p, 2);
    }
  }
}

TEST_CASE("constant safety stops projecting once the surrogate is determined") {
  Problem p = make_problem("onemax", "none", 10);
  p.safety.emplace_back([](const BitString&) { return 5.0; });
  auto c = config_for(Algorithm::kSafeAsng, 10, 4, 300);
  c.record_diagnostics = true;
  const auto r = run_safe_asng(c, p, seeds_for(p, 4));
  CHECK(r.unsafe == 0);
  REQUIRE(r.diagnostics.size() == 300);
  // 56 basis functions at d=10; by iteration 200 the archive holds far more distinct points
  for (std::size_t k = 200; k < 300; ++k) {
    const auto& g = r.diagnostics[k];
    CHECK(g.lipschitz_corrected[0] < 1e-6);
    CHECK(g.n_flip == std::vector<int>{0, 0});
    for (bool rep : g.repaired) CHECK_FALSE(rep);
  }
}

TEST_CASE("unsafe budget of zero stops after the first iteration") {
  Problem p = make_problem("onemax", "none", 10);
  int calls = 0;
  p.safety.emplace_back([&calls](const BitString&) { return calls++ < 1 ? 1.0 : -1.0; });
  auto c = config_for(Algorithm::kAsngConstraint, 10, 0, 1000);
  c.unsafe_budget = 0;
  const BitString seeds[] = {BitString::ones(10)};
  const auto r = run_asng_ch(c, p, seeds);
  CHECK(r.termination == Termination::kUnsafeBudget);
  CHECK(r.records.size() == 1);
  CHECK(r.unsafe == 2);
}

TEST_CASE("constraint handling without constraints equals plain ASNG") {
  const Problem p = make_problem("onemax", "none", 10);
  const BitString seeds[] = {BitString::ones(10), BitString(10)};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto cc = config_for(Algorithm::kAsngConstraint, 10, seed, 500);
    auto cp = config_for(Algorithm::kAsng, 10, seed, 500);
    cc.theta_trace_every = cp.theta_trace_every = 1;
    const auto ch = run_asng_ch(cc, p, seeds);
    const auto plain = run_asng_plain(cp, p);
    // the all-ones seed already counts toward the best safe value of the CH run
    CHECK(same_result(ch, plain, false));
  }
}

TEST_CASE("constraint handling keeps exact bookkeeping on all-safe problems") {
  const Problem p = make_problem("onemax", "compatible", 10);
  Problem all_safe = p;
  all_safe.safety = {[](const BitString&) { return 1.0; }};
  auto c = config_for(Algorithm::kAsngConstraint, 10, 3, 300);
  c.record_diagnostics = true;
  const auto r = run_asng_ch(c, all_safe, seeds_for(all_safe, 3));
  CHECK(r.unsafe == 0);
  check_bookkeeping(r, all_safe, 2);
}

TEST_CASE("baselines hit the unsafe budget on conflicting BinVal d=25") {
  const Problem p = make_problem("binval", "conflicting", 25);
  for (auto a : {Algorithm::kAsngConstraint, Algorithm::kAsngViolation}) {
    auto c = config_for(a, 25, 1, 25 * 25 * 25);
    c.record_diagnostics = true;
    const auto r = run(c, p, seeds_for(p, 1));
    CHECK(r.unsafe >= 1);
    check_bookkeeping(r, p, 2);
  }
}

TEST_CASE("violation avoidance") {
  SUBCASE("single safe seed: every candidate qualifies") {
    Problem p = make_problem("onemax", "none", 10);
    p.safety.emplace_back([](const BitString& x) { return x[0] ? 1.0 : -1.0; });
    const BitString seeds[] = {BitString::ones(10)};
    auto c = config_for(Algorithm::kAsngViolation, 10, 2, 1);
    const auto r = run_asng_va(c, p, seeds);
    CHECK(r.evals == 2);
    CHECK(r.termination == Termination::kIterationBudget);
  }
  SUBCASE("exhaustion") {
    // the seed passes its check, every later evaluation is unsafe
    Problem p = make_problem("onemax", "none", 10);
    int calls = 0;
    p.safety.emplace_back([&calls](const BitString&) { return calls++ == 0 ? 0.0 : -1.0; });
    const BitString seeds[] = {BitString::ones(10)};
    auto c = config_for(Algorithm::kAsngViolation, 10, 2, 1000);
    c.w_unsafe = 1e6;  // an unsafe point is nearest unless the candidate is the seed itself
    c.va_pool = 1;
    const auto r = run_asng_va(c, p, seeds);
    CHECK(r.termination == Termination::kVaExhausted);
    CHECK(r.unsafe >= 1);
    CHECK(r.records.back().iter <= 1000);
  }
  SUBCASE("conflicting OneMax still incurs unsafe evaluations") {
    const Problem p = make_problem("onemax", "conflicting", 10);
    std::uint64_t total = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      total += run_asng_va(config_for(Algorithm::kAsngViolation, 10, seed, 1000), p,
                           seeds_for(p, seed)).unsafe;
    }
    CHECK(total > 0);
  }
}

TEST_CASE("plain ASNG regressions") {
  const Problem om = make_problem("onemax", "none", 10);
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto c = config_for(Algorithm::kAsng, 10, seed, 1000);
    c.stop_at_optimum = true;
    solved += run_asng_plain(c, om).termination == Termination::kOptimumReached;
  }
  CHECK(solved >= 24);

  const Problem bv = make_problem("binval", "none", 10);
  std::vector<double> gaps;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    gaps.push_back(run_asng_plain(config_for(Algorithm::kAsng, 10, seed, 1000), bv).records.back().gap);
  }
  std::sort(gaps.begin(), gaps.end());
  CHECK(gaps[12] == 0.0);

  Problem flat = make_problem("onemax", "none", 10);
  flat.objective = [](const BitString&) { return 1.0; };
  std::uint64_t bad = 0;
  run_asng_plain(config_for(Algorithm::kAsng, 10, 1, 10000), flat, [&](const AsngState& s) {
    for (double t : s.params.theta) bad += (t < 0.1 || t > 0.9);
  });
  CHECK(bad == 0);
}

TEST_CASE("runs are deterministic") {
  const Problem p = make_problem("binval", "conflicting", 10);
  const auto seeds = seeds_for(p, 9);
  for (auto a : {Algorithm::kSafeAsng, Algorithm::kAsngConstraint, Algorithm::kAsngViolation,
                 Algorithm::kAsng}) {
    auto c = config_for(a, 10, 77, 300);
    c.theta_trace_every = 10;
    CHECK(same_result(run(c, p, seeds), run(c, p, seeds)));
  }
}

TEST_CASE("run input errors") {
  const Problem p = make_problem("onemax", "conflicting", 10);
  auto c = config_for(Algorithm::kSafeAsng, 10, 0, 10);
  CHECK_THROWS_AS(run(c, p, {}), std::invalid_argument);
  const BitString unsafe_seed[] = {BitString::ones(10)};
  CHECK_THROWS_AS(run(c, p, unsafe_seed), std::invalid_argument);
  const BitString wrong_dim[] = {BitString(8)};
  CHECK_THROWS_AS(run(c, p, wrong_dim), std::invalid_argument);
}
