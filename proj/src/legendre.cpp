#include "sphframe/legendre.hpp"

#include <cmath>

#include "sphframe/error.hpp"

namespace sphframe {

LegendreRecurrence::LegendreRecurrence(int bandlimit) : bandlimit_(bandlimit) {
  if (bandlimit < 0) throw ShapeError("bandlimit must be non-negative");
  const std::size_t total = static_cast<std::size_t>(bandlimit) * (bandlimit + 1) / 2;
  a_.assign(total, 0.0);
  b_.assign(total, 0.0);
  diag_.assign(bandlimit > 0 ? bandlimit : 1, 0.0);
  sub_.assign(bandlimit > 0 ? bandlimit : 1, 0.0);
  for (int m = 0; m < bandlimit; ++m) {
    diag_[m] = m == 0 ? 1.0 : -std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    sub_[m] = std::sqrt(2.0 * m + 3.0);
    const std::size_t base = offset(m);
    for (int l = m + 2; l < bandlimit; ++l) {
      const double l2 = static_cast<double>(l) * l;
      const double m2 = static_cast<double>(m) * m;
      const double lp = l - 1.0;
      a_[base + (l - m)] = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
      b_[base + (l - m)] = std::sqrt((lp * lp - m2) / (4.0 * lp * lp - 1.0));
    }
  }
}

void LegendreRecurrence::evaluate(double x, double sin_theta, std::span<double> out) const {
  if (out.size() < size()) throw ShapeError("legendre output buffer too small");
  double qmm = 1.0;
  for (int m = 0; m < bandlimit_; ++m) {
    if (m > 0) qmm *= diag_[m] * sin_theta;
    const std::size_t base = offset(m);
    out[base] = qmm;
    if (m + 1 >= bandlimit_) continue;
    double q2 = qmm;
    double q1 = sub_[m] * x * qmm;
    out[base + 1] = q1;
    for (int l = m + 2; l < bandlimit_; ++l) {
      const std::size_t k = base + (l - m);
      const double q = a_[k] * (x * q1 - b_[k] * q2);
      out[k] = q;
      q2 = q1;
      q1 = q;
    }
  }
}

void legendre_polynomials(int count, double x, std::span<double> out) {
  if (count <= 0) return;
  out[0] = 1.0;
  if (count == 1) return;
  out[1] = x;
  for (int l = 2; l < count; ++l) {
    out[l] = ((2.0 * l - 1.0) * x * out[l - 1] - (l - 1.0) * out[l - 2]) / l;
  }
}

}  // namespace sphframe
