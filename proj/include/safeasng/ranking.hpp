#pragma once

#include <span>
#include <utility>

namespace safeasng {

/// Sum of the negative parts of the safety values; 0 iff all constraints hold.
double violation(std::span<const double> s) noexcept;

enum class Preference { kFirstBetter, kSecondBetter, kTie };

/// Feasibility-first comparison for maximization. When both points are safe, or their violation
/// amounts are equal, the objective decides; otherwise the smaller violation wins.
Preference prefer(double f_a, std::span<const double> s_a, double f_b,
                  std::span<const double> s_b) noexcept;

/// lambda = 2 utilities under `prefer`; ties go to the first sample.
std::pair<double, double> utilities_for_pair(double f1, std::span<const double> s1, double f2,
                                             std::span<const double> s2) noexcept;

}  // namespace safeasng
