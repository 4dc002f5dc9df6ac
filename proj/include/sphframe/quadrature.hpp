#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sphframe/sphere.hpp"

namespace sphframe {

enum class RuleFamily { GL, SD, SP, GENERIC };

std::string to_string(RuleFamily family);

/// Tensor-product structure of a Gauss-Legendre rule.
///
/// Nodes are stored latitude-major: node k = i * n_lon + p has colatitude
/// acos(cos_theta[i]) and longitude 2 pi p / n_lon.
struct LatLonGrid {
  int n_lat = 0;
  int n_lon = 0;
  std::vector<double> cos_theta;   // descending, i.e. theta ascending
  std::vector<double> lat_weight;  // per-latitude weight, sums to 1 / n_lon per ring
};

/// Weighted point set on S^2 with positive weights summing to one.
///
/// `exactness_degree` n > 0 certifies that the rule integrates the
/// polynomial space spanned by Y_lm with l < n exactly; 0 means no claim.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<SphericalPoint> points, std::vector<double> weights,
                 int exactness_degree, RuleFamily family, std::string tag = {},
                 std::optional<LatLonGrid> grid = std::nullopt);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<SphericalPoint>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& sqrt_weights() const noexcept { return sqrt_weights_; }
  int exactness_degree() const noexcept { return exactness_degree_; }
  RuleFamily family() const noexcept { return family_; }
  const std::optional<LatLonGrid>& grid() const noexcept { return grid_; }

  /// Human-readable construction spec, e.g. "gl:64", "sp:512", "file:pts.txt".
  const std::string& tag() const noexcept { return tag_; }

  /// True when products of two band-limited (l < bandlimit) harmonics are
  /// integrated exactly, i.e. the discrete Fourier transform is an isometry.
  bool is_isometric_for(int bandlimit) const noexcept {
    return bandlimit <= 0 || exactness_degree_ >= 2 * bandlimit - 1;
  }

  /// Copy of this rule re-labelled with a (verified) exactness degree.
  QuadratureRule certified(int degree) const;

 private:
  std::vector<SphericalPoint> points_;
  std::vector<double> weights_;
  std::vector<double> sqrt_weights_;
  int exactness_degree_;
  RuleFamily family_;
  std::string tag_;
  std::optional<LatLonGrid> grid_;
};

using RulePtr = std::shared_ptr<const QuadratureRule>;

/// Gauss-Legendre nodes and weights on [-1, 1], nodes in descending order.
void gauss_legendre_nodes(int count, std::vector<double>& nodes, std::vector<double>& weights);

/// Tensor-product rule exact for l < degree: floor((degree-1)/2)+1 Gauss-Legendre
/// latitudes times `degree` equispaced longitudes.
QuadratureRule gauss_legendre_rule(int degree);

/// Generalized spiral points with equal weights 1/N. Not polynomial-exact.
QuadratureRule spiral_rule(int count);

enum class WeightMode { from_file, equal };

/// Reads `x y z` or `x y z w` lines; '#' lines and blank lines are skipped.
/// File weights are rescaled to sum to one.
QuadratureRule load_pointset(const std::filesystem::path& path, WeightMode mode);

/// Writes the canonical point-set format read by load_pointset.
void save_pointset(const QuadratureRule& rule, const std::filesystem::path& path,
                   bool include_weights = true);

/// Builds a rule from a spec string: gl:<degree>, sp:<count>,
/// file:<path> (weights from file) or file-equal:<path>.
QuadratureRule make_rule(const std::string& spec);

struct ExactnessReport {
  bool pass = false;
  double max_error = 0.0;
  int degree = 0;
  int worst_l1 = 0, worst_m1 = 0, worst_l2 = 0, worst_m2 = 0;
};

inline constexpr std::size_t kDefaultGramMemoryBound = std::size_t{2} << 30;

/// Checks U_{(l,m),(l',m')} = sum_k w_k Y_lm(x_k) conj(Y_l'm'(x_k)) against the
/// Kronecker delta for every pair whose product lies in the space l < degree
/// (l + l' < degree). Passing certifies exactness of the given degree.
ExactnessReport verify_exactness(const QuadratureRule& rule, int degree, double tol = 1e-10,
                                 std::size_t memory_bound = kDefaultGramMemoryBound);

/// Dense Gram matrix U (row-major, bandlimit^2 x bandlimit^2) in flat harmonic order.
std::vector<std::complex<double>> gram_matrix(const QuadratureRule& rule, int bandlimit,
                                              std::size_t memory_bound = kDefaultGramMemoryBound);

}  // namespace sphframe
