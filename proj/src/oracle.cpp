#include "safeasng/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Dense>

#include "safeasng/errors.hpp"
#include "safeasng/walsh.hpp"

namespace safeasng::oracle {

namespace {

std::vector<int> members_of(std::uint64_t mask, int d) {
  std::vector<int> m;
  for (int i = 0; i < d; ++i) {
    if ((mask >> i) & 1U) m.push_back(i);
  }
  return m;
}

/// Subsets of size <= order sorted by (size, member list); built independently of
/// enumerate_basis by filtering and sorting every mask.
std::vector<std::uint64_t> sorted_subsets(int d, int order) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m) {
    if (static_cast<int>(members_of(m, d).size()) <= order) out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [d](std::uint64_t a, std::uint64_t b) {
    const auto ma = members_of(a, d);
    const auto mb = members_of(b, d);
    if (ma.size() != mb.size()) return ma.size() < mb.size();
    return ma < mb;
  });
  return out;
}

double parity_sign(std::uint64_t subset, const BitString& x) {
  int ones = 0;
  for (int i = 0; i < x.dim(); ++i) {
    if (((subset >> i) & 1U) && x[i]) ++ones;
  }
  return ones % 2 == 0 ? 1.0 : -1.0;
}

double product_likelihood(const std::vector<double>& theta, const BitString& x) {
  double p = 1.0;
  for (int i = 0; i < x.dim(); ++i) {
    p *= x[i] ? theta[static_cast<std::size_t>(i)] : 1.0 - theta[static_cast<std::size_t>(i)];
  }
  return p;
}

int count_differences(const BitString& a, const BitString& b) {
  int n = 0;
  for (int i = 0; i < a.dim(); ++i) n += a[i] != b[i] ? 1 : 0;
  return n;
}

}  // namespace

std::vector<double> exhaustive_fit(int d, const std::function<double(const BitString&)>& target,
                                   int order) {
  if (d > kMaxFitDim) throw OracleUnavailableError("exhaustive_fit needs d <= 12");
  const auto subsets = sorted_subsets(d, order);
  const auto rows = static_cast<Eigen::Index>(std::uint64_t{1} << d);
  const auto cols = static_cast<Eigen::Index>(subsets.size());
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const BitString x(d, static_cast<std::uint64_t>(r));
    for (Eigen::Index c = 0; c < cols; ++c) {
      design(r, c) = parity_sign(subsets[static_cast<std::size_t>(c)], x);
    }
    y[r] = target(x);
  }
  const Eigen::VectorXd w = design.colPivHouseholderQr().solve(y);
  return {w.data(), w.data() + w.size()};
}

std::vector<SafetyViolation> exhaustive_safe_check(const SafeRegion& region,
                                                   const Problem& problem) {
  if (problem.d > kMaxSafeCheckDim) {
    throw OracleUnavailableError("exhaustive_safe_check needs d <= 12");
  }
  std::vector<SafetyViolation> out;
  const std::uint64_t end = std::uint64_t{1} << problem.d;
  for (const auto& [center, radius] : region.balls) {
    for (std::uint64_t m = 0; m < end; ++m) {
      const BitString x(problem.d, m);
      if (count_differences(x, center) > radius) continue;
      for (int j = 0; j < problem.num_safety(); ++j) {
        const double v = problem.safety[static_cast<std::size_t>(j)](x);
        if (v < 0.0) out.push_back({center, x, j, v});
      }
    }
  }
  return out;
}

BitString exhaustive_projection(const BitString& x, const BitString& center, double radius,
                                const std::vector<double>& theta) {
  const int d = x.dim();
  if (d > kMaxProjectionDim) throw OracleUnavailableError("exhaustive_projection needs d <= 10");
  int best_dist = std::numeric_limits<int>::max();
  double best_lik = -1.0;
  BitString best = x;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m) {
    const BitString y(d, m);
    if (count_differences(y, center) > radius) continue;
    const int dist = count_differences(x, y);
    const double lik = product_likelihood(theta, y);
    if (dist < best_dist || (dist == best_dist && lik > best_lik)) {
      best_dist = dist;
      best_lik = lik;
      best = y;
    }
  }
  return best;
}

namespace {

OracleReport make_report(std::string check, std::string instance, double oracle_value,
                         double impl_value, double tolerance) {
  OracleReport r;
  r.check = std::move(check);
  r.instance = std::move(instance);
  r.oracle_value = oracle_value;
  r.impl_value = impl_value;
  r.abs_error = std::abs(oracle_value - impl_value);
  r.rel_error = r.abs_error / std::max(std::abs(oracle_value), 1e-300);
  if (oracle_value == 0.0) r.rel_error = r.abs_error;
  r.tolerance = tolerance;
  r.passed = r.abs_error <= tolerance || r.rel_error <= tolerance;
  return r;
}

}  // namespace

std::vector<OracleReport> run_suite(std::uint64_t seed) {
  std::vector<OracleReport> reports;
  Rng rng(seed);

  // Closed-form constrained optima against enumeration.
  for (auto obj : {Objective::kOneMax, Objective::kLeadingOnes, Objective::kBinVal,
                   Objective::kReversedBinVal}) {
    for (auto saf : {Safety::kCompatible, Safety::kConflicting}) {
      for (int d = 8; d <= 16; d += 4) {
        const Problem p = make_problem(obj, saf, d);
        const double enumerated = oracle_constrained_optimum(p).first;
        reports.push_back(make_report("constrained-optimum", p.name + " d=" + std::to_string(d),
                                      enumerated, *p.known_optimum, 0.0));
      }
    }
  }

  // Least-squares fits on full enumeration: batch and incremental against the dense QR oracle.
  const std::pair<const char*, double (*)(const BitString&)> targets[] = {
      {"onemax", onemax}, {"binval", binval}, {"compatible", safety_compatible},
      {"conflicting", safety_conflicting}};
  for (const auto& [name, fn] : targets) {
    const int d = 8;
    const auto expected = exhaustive_fit(d, fn, 1);
    const WalshBasis basis = enumerate_basis(d, 1);
    std::vector<std::pair<BitString, double>> pts;
    NormalEquationsCache cache(basis, 1);
    for (std::uint64_t m = 0; m < 256; ++m) {
      const BitString x(d, m);
      pts.emplace_back(x, fn(x));
      cache.ingest(x, fn(x));
    }
    const WalshModel batch = fit(pts, basis);
    const WalshModel incremental = cache.solve().front();
    double batch_err = 0.0;
    double inc_err = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < expected.size(); ++k) {
      const auto idx = static_cast<Eigen::Index>(k);
      batch_err = std::max(batch_err, std::abs(batch.coefficients[idx] - expected[k]));
      inc_err = std::max(inc_err, std::abs(incremental.coefficients[idx] - batch.coefficients[idx]));
      scale = std::max(scale, std::abs(expected[k]));
    }
    double residual = 0.0;
    for (const auto& [x, y] : pts) residual = std::max(residual, std::abs(batch.predict(x) - y));
    reports.push_back(make_report("fit-vs-qr", std::string(name) + " d=8 R=1", 0.0,
                                  batch_err / std::max(scale, 1.0), 1e-9));
    reports.push_back(make_report("fit-residual", std::string(name) + " d=8 R=1", 0.0,
                                  residual, 1e-6));
    reports.push_back(make_report("incremental-vs-batch", std::string(name) + " d=8 R=1", 0.0,
                                  inc_err / std::max(scale, 1.0), 1e-6));
  }

  // Lipschitz estimate of an exact linear surrogate.
  {
    const int d = 10;
    const auto coeffs = exhaustive_fit(d, safety_compatible, 1);
    WalshModel model{enumerate_basis(d, 1), Eigen::Map<const Eigen::VectorXd>(
                                                coeffs.data(), static_cast<Eigen::Index>(coeffs.size()))};
    const WalshModel models[] = {model};
    const double est = estimate_lipschitz_raw(models, BernoulliParams::uniform(d), rng).front();
    reports.push_back(make_report("lipschitz-exact", "compatible d=10 R=1", 1.0, est, 1e-9));
  }

  // Greedy projection against exhaustive search.
  {
    int mismatches = 0;
    const int instances = 200;
    for (int k = 0; k < instances; ++k) {
      const int d = 4 + static_cast<int>(rng() % 7);
      std::uniform_real_distribution<double> unif(1.0 / d, 1.0 - 1.0 / d);
      std::vector<double> theta(static_cast<std::size_t>(d));
      for (double& t : theta) t = unif(rng);
      const BernoulliParams params = BernoulliParams::from_theta(theta);
      EvaluatedSample center{uniform_bitstring(d, rng), 0.0, {0.0}, 0};
      const double radius = 1.0 + static_cast<double>(rng() % static_cast<std::uint64_t>(d - 1));
      center.s = {radius};
      const std::vector<double> lipschitz = {1.0};
      const BitString x = uniform_bitstring(d, rng);
      const EvaluatedSample centers[] = {center};
      const BitString got = project(x, centers, lipschitz, params).x;
      const BitString want = exhaustive_projection(x, center.x, radius, theta);
      const double lg = product_likelihood(theta, got);
      const double lw = product_likelihood(theta, want);
      if (count_differences(got, x) != count_differences(want, x) ||
          std::abs(lg - lw) > 1e-12 * lw) {
        ++mismatches;
      }
    }
    reports.push_back(make_report("projection-optimal", std::to_string(instances) +
                                  " random instances d<=10", 0.0, mismatches, 0.0));
  }

  // Soundness of the region built from exact surrogates and true Lipschitz constants.
  for (auto saf : {Safety::kCompatible, Safety::kConflicting}) {
    const Problem p = make_problem(Objective::kOneMax, saf, 10);
    Archive archive(p.d, 1);
    for (std::uint64_t i = 0; archive.size() < 40; ++i) {
      const BitString x = uniform_bitstring(p.d, rng);
      archive.insert({x, p.objective(x), p.safety_values(x), i});
    }
    const std::vector<double> lipschitz = {1.0};
    const auto centers = select_archives(archive, lipschitz, 100);
    const auto violations = exhaustive_safe_check(build_region(centers.d, lipschitz), p);
    reports.push_back(make_report("region-sound", p.name + " d=10", 0.0,
                                  static_cast<double>(violations.size()), 0.0));
  }
  return reports;
}

std::string format_reports(const std::vector<OracleReport>& reports) {
  std::string out;
  char line[512];
  std::snprintf(line, sizeof line, "%-22s %-32s %14s %14s %10s %10s  %s\n", "check", "instance",
                "oracle", "impl", "abs_err", "tol", "status");
  out += line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-22s %-32s %14.8g %14.8g %10.3g %10.3g  %s\n",
                  r.check.c_str(), r.instance.c_str(), r.oracle_value, r.impl_value, r.abs_error,
                  r.tolerance, r.passed ? "PASS" : "FAIL");
    out += line;
  }
  return out;
}

}  // namespace safeasng::oracle
