#include "safeasng/bitstring.hpp"

#include <stdexcept>

#include "safeasng/errors.hpp"

namespace safeasng {

BitString::BitString(int d) : d_(d) {
  if (d < 1 || d > kMaxDim) {
    throw ConfigError("bit string dimension must be in [1, 64], got " + std::to_string(d));
  }
}

BitString::BitString(int d, std::uint64_t mask) : BitString(d) {
  if ((mask & ~low_mask(d)) != 0) {
    throw std::invalid_argument("mask has bits set beyond dimension " + std::to_string(d));
  }
  bits_ = mask;
}

BitString BitString::from_string(std::string_view s) {
  BitString out(static_cast<int>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      out.set(static_cast<int>(i), true);
    } else if (s[i] != '0') {
      throw std::invalid_argument("bit string may only contain '0' and '1'");
    }
  }
  return out;
}

BitString BitString::ones(int d) { return BitString(d, low_mask(d)); }

std::string BitString::to_string() const {
  std::string s(static_cast<std::size_t>(d_), '0');
  for (int i = 0; i < d_; ++i) {
    if ((*this)[i]) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

int hamming_distance(const BitString& a, const BitString& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("hamming_distance: dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
  return std::popcount(a.mask() ^ b.mask());
}

}  // namespace safeasng
