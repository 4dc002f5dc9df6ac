#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sphframe {

/// Recurrence coefficients for the measure-normalized associated Legendre
/// factors q_lm(x), 0 <= m <= l < bandlimit, such that
/// Y_lm(theta, phi) = q_lm(cos theta) e^{i m phi} has unit norm under the
/// normalized surface measure (Condon-Shortley phase included).
///
/// Values are stored order-major: q_lm sits at offset(m) + (l - m).
class LegendreRecurrence {
 public:
  explicit LegendreRecurrence(int bandlimit);

  int bandlimit() const noexcept { return bandlimit_; }
  std::size_t size() const noexcept { return a_.size(); }
  std::size_t offset(int m) const noexcept {
    return static_cast<std::size_t>(m) * bandlimit_ - static_cast<std::size_t>(m) * (m - 1) / 2;
  }

  /// q_mm = diag(m) * sin(theta) * q_{m-1,m-1}
  double diag(int m) const noexcept { return diag_[m]; }
  /// q_{m+1,m} = sub(m) * x * q_mm
  double sub(int m) const noexcept { return sub_[m]; }
  /// q_lm = a * (x q_{l-1,m} - b q_{l-2,m}) for l >= m + 2; index is offset(m) + l - m.
  double a(std::size_t index) const noexcept { return a_[index]; }
  double b(std::size_t index) const noexcept { return b_[index]; }

  /// Fills out (length size()) with q_lm at x = cos(theta); sin_theta must be >= 0.
  void evaluate(double x, double sin_theta, std::span<double> out) const;

 private:
  int bandlimit_;
  std::vector<double> diag_, sub_, a_, b_;
};

/// Legendre polynomials P_0..P_{count-1} at x.
void legendre_polynomials(int count, double x, std::span<double> out);

}  // namespace sphframe
