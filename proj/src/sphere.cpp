#include "sphframe/sphere.hpp"

#include <algorithm>

namespace sphframe {

SphericalPoint::SphericalPoint(double theta, double phi) : theta_(theta), phi_(phi) {
  const double s = std::sin(theta);
  xyz_ = {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

SphericalPoint SphericalPoint::from_angles(double theta, double phi) {
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  return SphericalPoint(std::clamp(theta, 0.0, kPi), phi);
}

SphericalPoint SphericalPoint::from_unit_vector(double x, double y, double z) {
  SphericalPoint p;
  p.xyz_ = {x, y, z};
  p.theta_ = std::atan2(std::hypot(x, y), z);
  double phi = std::atan2(y, x);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  p.phi_ = phi;
  return p;
}

double SphericalPoint::chord_distance(const SphericalPoint& other) const noexcept {
  const double dx = xyz_[0] - other.xyz_[0];
  const double dy = xyz_[1] - other.xyz_[1];
  const double dz = xyz_[2] - other.xyz_[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double SphericalPoint::geodesic_distance(const SphericalPoint& other) const noexcept {
  // atan2 form stays accurate for nearly coincident and nearly antipodal pairs.
  const double cx = xyz_[1] * other.xyz_[2] - xyz_[2] * other.xyz_[1];
  const double cy = xyz_[2] * other.xyz_[0] - xyz_[0] * other.xyz_[2];
  const double cz = xyz_[0] * other.xyz_[1] - xyz_[1] * other.xyz_[0];
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot(other));
}

}  // namespace sphframe
