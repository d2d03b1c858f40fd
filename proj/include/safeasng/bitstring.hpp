#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace safeasng {

inline constexpr int kMaxDim = 64;

/// Fixed-length binary vector packed into a 64-bit mask.
///
/// Bit i of the mask (0-based) stores x_{i+1} in the 1-based notation used by the benchmark
/// formulas, so the first character of `to_string()` is x_1.
class BitString {
 public:
  BitString() = default;
  /// All-zero string of length d. Throws ConfigError unless 1 <= d <= 64.
  explicit BitString(int d);
  BitString(int d, std::uint64_t mask);

  /// Parses "0110..." (first character is x_1).
  static BitString from_string(std::string_view s);
  static BitString ones(int d);

  int dim() const noexcept { return d_; }
  std::uint64_t mask() const noexcept { return bits_; }

  bool operator[](int i) const noexcept { return (bits_ >> i) & 1U; }
  void set(int i, bool v) noexcept {
    if (v) {
      bits_ |= std::uint64_t{1} << i;
    } else {
      bits_ &= ~(std::uint64_t{1} << i);
    }
  }
  void flip(int i) noexcept { bits_ ^= std::uint64_t{1} << i; }
  BitString flipped(int i) const noexcept {
    BitString out = *this;
    out.flip(i);
    return out;
  }

  int count_ones() const noexcept { return std::popcount(bits_); }
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::uint64_t bits_ = 0;
  int d_ = 0;
};

/// Number of differing positions. Throws std::invalid_argument on dimension mismatch.
int hamming_distance(const BitString& a, const BitString& b);

/// Mask with the low d bits set.
constexpr std::uint64_t low_mask(int d) noexcept {
  return d >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << d) - 1);
}

}  // namespace safeasng

template <>
struct std::hash<safeasng::BitString> {
  std::size_t operator()(const safeasng::BitString& x) const noexcept {
    // splitmix64 finalizer over (mask, d)
    std::uint64_t z = x.mask() + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(x.dim());
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};
