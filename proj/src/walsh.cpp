#include "safeasng/walsh.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "safeasng/errors.hpp"

namespace safeasng {

Eigen::VectorXd WalshBasis::features(const BitString& x) const {
  Eigen::VectorXd phi(static_cast<Eigen::Index>(subsets.size()));
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    phi[static_cast<Eigen::Index>(k)] = walsh_eval(subsets[k], x);
  }
  return phi;
}

std::size_t basis_count(int d, int order) {
  std::size_t total = 0;
  double binom = 1.0;  // C(d, k), kept in floating point so large d cannot overflow
  for (int k = 0; k <= order; ++k) {
    if (k > 0) binom = binom * (d - k + 1) / k;
    if (binom > 1e18) return static_cast<std::size_t>(-1);
    total += static_cast<std::size_t>(binom + 0.5);
  }
  return total;
}

WalshBasis enumerate_basis(int d, int order, std::size_t cap) {
  if (d < 1 || d > kMaxDim) throw ConfigError("Walsh basis dimension must be in [1, 64]");
  if (order < 0 || order > d) throw ConfigError("Walsh order must be in [0, d]");
  const std::size_t m = basis_count(d, order);
  if (m > cap) {
    throw ConfigError("Walsh basis for d=" + std::to_string(d) + ", R=" + std::to_string(order) +
                      " exceeds the cap of " + std::to_string(cap) + " functions");
  }
  WalshBasis basis{d, order, {}};
  basis.subsets.reserve(m);
  basis.subsets.push_back(0);
  std::vector<int> members;
  for (int k = 1; k <= order; ++k) {
    members.resize(static_cast<std::size_t>(k));
    std::iota(members.begin(), members.end(), 0);
    while (true) {
      std::uint64_t mask = 0;
      for (int i : members) mask |= std::uint64_t{1} << i;
      basis.subsets.push_back(mask);
      // next k-combination in lexicographic order
      int pos = k - 1;
      while (pos >= 0 && members[static_cast<std::size_t>(pos)] == d - k + pos) --pos;
      if (pos < 0) break;
      ++members[static_cast<std::size_t>(pos)];
      for (int j = pos + 1; j < k; ++j) {
        members[static_cast<std::size_t>(j)] = members[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  return basis;
}

double WalshModel::predict(const BitString& x) const {
  double y = 0.0;
  for (std::size_t k = 0; k < basis.subsets.size(); ++k) {
    y += coefficients[static_cast<Eigen::Index>(k)] * walsh_eval(basis.subsets[k], x);
  }
  return y;
}

std::string WalshModel::dump() const {
  std::string out;
  char buf[64];
  for (std::size_t k = 0; k < basis.subsets.size(); ++k) {
    std::string members;
    for (int i = 0; i < basis.d; ++i) {
      if ((basis.subsets[k] >> i) & 1U) {
        if (!members.empty()) members += ',';
        members += std::to_string(i + 1);
      }
    }
    if (members.empty()) members = "{}";
    std::snprintf(buf, sizeof buf, "%.17g", coefficients[static_cast<Eigen::Index>(k)]);
    out += members + " : " + buf + "\n";
  }
  return out;
}

Eigen::MatrixXd solve_normal_equations(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& rhs,
                                       std::size_t n) {
  const Eigen::Index m = gram.rows();
  if (n == 0) return Eigen::MatrixXd::Zero(m, rhs.cols());

  if (static_cast<Eigen::Index>(n) >= m) {
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) return llt.solve(rhs);
  }

  Eigen::MatrixXd jittered = gram;
  jittered.diagonal().array() += kRidgeJitter * static_cast<double>(n);
  Eigen::LLT<Eigen::MatrixXd> llt(jittered);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jittered);
  Eigen::VectorXd inv = eig.eigenvalues();
  const double floor = std::max(inv.maxCoeff(), 1.0) * 1e-12;
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv[i] = 1.0 / std::max(inv[i], floor);
  const Eigen::MatrixXd& v = eig.eigenvectors();
  return v * inv.asDiagonal() * (v.transpose() * rhs);
}

WalshModel fit(std::span<const std::pair<BitString, double>> points, const WalshBasis& basis) {
  if (points.empty()) throw std::invalid_argument("fit: need at least one data point");
  const auto m = static_cast<Eigen::Index>(basis.size());
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(n, m);
  Eigen::VectorXd y(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& [x, target] = points[static_cast<std::size_t>(r)];
    if (x.dim() != basis.d) throw std::invalid_argument("fit: point dimension mismatch");
    design.row(r) = basis.features(x).transpose();
    y[r] = target;
  }
  const Eigen::MatrixXd gram = design.transpose() * design;
  const Eigen::MatrixXd rhs = design.transpose() * y;
  return WalshModel{basis, solve_normal_equations(gram, rhs, points.size()).col(0)};
}

NormalEquationsCache::NormalEquationsCache(WalshBasis basis, int num_targets)
    : basis_(std::move(basis)),
      gram_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis_.size()),
                                  static_cast<Eigen::Index>(basis_.size()))),
      moments_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis_.size()), num_targets)) {}

void NormalEquationsCache::ingest(const BitString& x, std::span<const double> targets) {
  if (static_cast<Eigen::Index>(targets.size()) != moments_.cols()) {
    throw std::invalid_argument("NormalEquationsCache::ingest: wrong number of targets");
  }
  if (x.dim() != basis_.d) throw std::invalid_argument("NormalEquationsCache::ingest: dimension");
  const Eigen::VectorXd phi = basis_.features(x);
  gram_.noalias() += phi * phi.transpose();
  for (Eigen::Index j = 0; j < moments_.cols(); ++j) {
    moments_.col(j) += targets[static_cast<std::size_t>(j)] * phi;
  }
  ++n_;
}

std::vector<WalshModel> NormalEquationsCache::solve() const {
  std::vector<WalshModel> models;
  if (moments_.cols() == 0) return models;
  const Eigen::MatrixXd w = solve_normal_equations(gram_, moments_, n_);
  models.reserve(static_cast<std::size_t>(w.cols()));
  for (Eigen::Index j = 0; j < w.cols(); ++j) models.push_back(WalshModel{basis_, w.col(j)});
  return models;
}

}  // namespace safeasng
