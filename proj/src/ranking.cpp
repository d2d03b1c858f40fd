#include "safeasng/ranking.hpp"

#include <algorithm>

namespace safeasng {

double violation(std::span<const double> s) noexcept {
  double v = 0.0;
  for (double sj : s) v += std::min(sj, 0.0);
  return v;
}

Preference prefer(double f_a, std::span<const double> s_a, double f_b,
                  std::span<const double> s_b) noexcept {
  const double va = violation(s_a);
  const double vb = violation(s_b);
  if (std::min(va, vb) >= 0.0 || va == vb) {
    if (f_a > f_b) return Preference::kFirstBetter;
    if (f_a < f_b) return Preference::kSecondBetter;
    return Preference::kTie;
  }
  return va > vb ? Preference::kFirstBetter : Preference::kSecondBetter;
}

std::pair<double, double> utilities_for_pair(double f1, std::span<const double> s1, double f2,
                                             std::span<const double> s2) noexcept {
  return prefer(f1, s1, f2, s2) == Preference::kSecondBetter ? std::pair{-1.0, 1.0}
                                                             : std::pair{1.0, -1.0};
}

}  // namespace safeasng
