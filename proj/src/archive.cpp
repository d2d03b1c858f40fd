#include "safeasng/archive.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace safeasng {

bool is_safe(std::span<const double> s) noexcept {
  return std::all_of(s.begin(), s.end(), [](double v) { return v >= 0.0; });
}

Archive::Archive(int d, int p) : d_(d), p_(p) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("archive dimension out of range");
  if (p < 0) throw std::invalid_argument("archive safety count must be non-negative");
}

bool Archive::insert(EvaluatedSample sample) {
  if (sample.x.dim() != d_) {
    throw std::invalid_argument("archive insert: dimension " + std::to_string(sample.x.dim()) +
                                " does not match archive dimension " + std::to_string(d_));
  }
  if (static_cast<int>(sample.s.size()) != p_) {
    throw std::invalid_argument("archive insert: expected " + std::to_string(p_) +
                                " safety values, got " + std::to_string(sample.s.size()));
  }
  if (index_.contains(sample.x)) return false;
  if (!entries_.empty() && sample.eval_index <= entries_.back().eval_index) {
    throw std::invalid_argument("archive insert: eval_index must increase");
  }
  index_.emplace(sample.x, entries_.size());
  entries_.push_back(std::move(sample));
  return true;
}

const EvaluatedSample* Archive::find(const BitString& x) const {
  auto it = index_.find(x);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::vector<EvaluatedSample> select_recent(const Archive& archive,
                                           const std::function<bool(const EvaluatedSample&)>& pred,
                                           std::size_t n) {
  if (n == 0) throw std::invalid_argument("select_recent: n must be positive");
  std::vector<EvaluatedSample> out;
  const auto& entries = archive.entries();
  for (auto it = entries.rbegin(); it != entries.rend() && out.size() < n; ++it) {
    if (pred(*it)) out.push_back(*it);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace safeasng
