#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace sphframe {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A point on the unit sphere S^2.
///
/// Stores the Cartesian unit vector together with colatitude theta in [0, pi]
/// and longitude phi in [0, 2 pi). Construction from a unit vector keeps the
/// vector bit-exact so that point files survive a load/save cycle unchanged.
class SphericalPoint {
 public:
  SphericalPoint() : SphericalPoint(0.0, 0.0) {}

  static SphericalPoint from_angles(double theta, double phi);
  static SphericalPoint from_unit_vector(double x, double y, double z);

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }
  double x() const noexcept { return xyz_[0]; }
  double y() const noexcept { return xyz_[1]; }
  double z() const noexcept { return xyz_[2]; }
  const std::array<double, 3>& xyz() const noexcept { return xyz_; }

  double cos_theta() const noexcept { return xyz_[2]; }
  /// sin(theta) >= 0, accurate near the poles.
  double sin_theta() const noexcept { return std::hypot(xyz_[0], xyz_[1]); }

  double dot(const SphericalPoint& other) const noexcept {
    return xyz_[0] * other.xyz_[0] + xyz_[1] * other.xyz_[1] + xyz_[2] * other.xyz_[2];
  }

  /// Euclidean (chordal) distance in R^3.
  double chord_distance(const SphericalPoint& other) const noexcept;

  /// Great-circle distance in radians.
  double geodesic_distance(const SphericalPoint& other) const noexcept;

 private:
  SphericalPoint(double theta, double phi);

  double theta_;
  double phi_;
  std::array<double, 3> xyz_;
};

}  // namespace sphframe
