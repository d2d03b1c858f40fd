#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "safeasng/bitstring.hpp"

namespace safeasng {

struct EvaluatedSample {
  BitString x;
  double f = 0.0;
  std::vector<double> s;  // one entry per safety function
  std::uint64_t eval_index = 0;
};

/// True when every safety value is non-negative (vacuously true for p = 0).
bool is_safe(std::span<const double> s) noexcept;

/// Chronological archive of evaluated samples with unique bit patterns.
///
/// Entries are kept in first-evaluation order. Inserting a pattern that is already present leaves
/// the archive untouched, so recency is never refreshed.
class Archive {
 public:
  Archive(int d, int p);

  /// Returns false (and does nothing) if the pattern is already stored.
  /// Throws std::invalid_argument on dimension/arity mismatch or a non-increasing eval_index.
  bool insert(EvaluatedSample sample);

  bool contains(const BitString& x) const { return index_.contains(x); }
  const EvaluatedSample* find(const BitString& x) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  int dim() const noexcept { return d_; }
  int num_safety() const noexcept { return p_; }
  const std::vector<EvaluatedSample>& entries() const noexcept { return entries_; }

 private:
  int d_;
  int p_;
  std::vector<EvaluatedSample> entries_;
  std::unordered_map<BitString, std::size_t> index_;
};

/// Up to n most recent entries satisfying `pred`, returned oldest first.
std::vector<EvaluatedSample> select_recent(const Archive& archive,
                                           const std::function<bool(const EvaluatedSample&)>& pred,
                                           std::size_t n);

}  // namespace safeasng
