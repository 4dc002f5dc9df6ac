#pragma once

#include <optional>

#include "sphframe/fmt.hpp"

namespace sphframe {

/// Zonal kernel K(x, y) = sum_{l < cutoff} gamma(lambda_l / 2^j) sum_m Y_lm(x) conj(Y_lm(y)).
struct KernelSpec {
  SymbolProfile profile;
  int scale = 0;
  int cutoff = 0;  // harmonics l < cutoff carry the whole band of the profile

  /// Derives the cutoff from the support of a band-limited profile.
  KernelSpec(SymbolProfile profile, int scale);
  KernelSpec(SymbolProfile profile, int scale, int cutoff);
};

enum class KernelPath { addition_theorem, direct };

Complex eval_kernel(const KernelSpec& spec, const SphericalPoint& x, const SphericalPoint& y,
                    KernelPath path = KernelPath::addition_theorem);

/// Which generator a framelet is built from: 0 is the scaling function, n >= 1 the n-th wavelet.
struct FrameletKind {
  int band = 0;
  static FrameletKind lowpass() { return {0}; }
  static FrameletKind highpass(int n) { return {n}; }
};

/// Scaling framelets use node k of the level-j rule; wavelet framelets use
/// node k of the level-(j+1) rule.
Complex eval_framelet(int j, std::size_t k, FrameletKind kind, const SphericalPoint& x, const LevelLayout& layout,
                      const FilterBank& bank);

}  // namespace sphframe
