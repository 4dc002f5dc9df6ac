#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sphframe/fmt.hpp"

namespace sphframe {

/// Compactly supported Wendland function phi_n(t), n in 0..4.
double wendland(int n, double t);

/// Support radius scaling tau_n = (3n + 3) Gamma(n + 1/2) / (2 Gamma(n + 1)).
double wendland_tau(int n);

/// phi_n(t / tau_n)
double wendland_normalized(int n, double t);

enum class WendlandKind { normalized, original };

/// Sum of six Wendland bumps centred at +-e_1, +-e_2, +-e_3 in chordal distance.
double test_function(int n, const SphericalPoint& pt, WendlandKind kind = WendlandKind::normalized);

std::vector<double> sample_test_function(int n, const QuadratureRule& rule,
                                         WendlandKind kind = WendlandKind::normalized);

/// Standard normal deviates by the Box-Muller transform over a 64-bit
/// Mersenne Twister; the output stream is identical on every platform.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}
  double operator()();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct NoisySignal {
  std::vector<double> values;
  double sigma = 0.0;
};

/// Adds i.i.d. N(0, sigma^2) noise with sigma = theta * max(values).
NoisySignal add_noise(std::span<const double> values, double theta, std::uint64_t seed);

/// 20 log10(||reference|| / ||estimate - reference||); +inf for identical inputs.
double snr(std::span<const double> reference, std::span<const double> estimate);

/// Values divided / multiplied by sqrt(w_k).
std::vector<double> unweight(std::span<const Complex> seq, const QuadratureRule& rule);
ComplexVector weight(std::span<const double> values, const QuadratureRule& rule);

/// Zeroes the detail entries whose value-domain magnitude |w_k / sqrt(weight_k)|
/// is at most threshold. Returns the number of zeroed entries per band.
std::vector<std::vector<std::size_t>> hard_threshold(FrameletDecomposition& dec, double threshold);

struct DenoiseConfig {
  double theta = 0.1;
  std::uint64_t seed = 0;
  int J = 6;
  int J0 = 4;
  FilterBank bank = paper_bank_s2();
  double sigma = 0.0;            // noise level the threshold is tied to
  double threshold_scale = 1.0;  // threshold = threshold_scale * sigma
  CgOptions cg{};
};

struct BandKills {
  int level = 0;  // j of w_j^n
  int band = 0;   // n
  std::size_t zeroed = 0;
  std::size_t total = 0;
};

struct DenoiseReport {
  double threshold = 0.0;
  std::vector<BandKills> kills;
  int projection_iterations = 0;
  double projection_residual = 0.0;  // ||raw - v_J|| / ||raw|| in weighted values
  std::optional<double> snr_noisy;
  std::optional<double> snr_restored;
  StageLog log;
};

struct DenoiseResult {
  std::vector<double> restored;  // values on the level-J nodes
  DenoiseReport report;
};

/// Projection, multi-level decomposition, hard thresholding of the details
/// and reconstruction. noisy holds point values on the level-J rule of layout.
DenoiseResult denoise(std::span<const double> noisy, const DenoiseConfig& cfg, const LevelLayout& layout,
                      std::optional<std::span<const double>> reference = std::nullopt);

}  // namespace sphframe
