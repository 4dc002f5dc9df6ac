#include "sphframe/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "sphframe/error.hpp"
#include "sphframe/legendre.hpp"

namespace sphframe {

namespace {

int derive_cutoff(const SymbolProfile& profile, int scale) {
  if (!profile.band_limited())
    throw Error("kernel profile '" + profile.name() + "' is not band-limited");
  const double bound = profile.support_hi() * std::ldexp(1.0, scale);
  int cutoff = 0;
  while (eigenvalue(cutoff) <= bound) ++cutoff;
  return cutoff;
}

}  // namespace

KernelSpec::KernelSpec(SymbolProfile profile_, int scale_)
    : profile(std::move(profile_)), scale(scale_), cutoff(derive_cutoff(profile, scale_)) {}

KernelSpec::KernelSpec(SymbolProfile profile_, int scale_, int cutoff_)
    : profile(std::move(profile_)), scale(scale_), cutoff(cutoff_) {
  if (cutoff < 0) throw Error("kernel cutoff must be non-negative");
}

Complex eval_kernel(const KernelSpec& spec, const SphericalPoint& x, const SphericalPoint& y, KernelPath path) {
  const double scale = std::ldexp(1.0, -spec.scale);
  if (path == KernelPath::addition_theorem) {
    std::vector<double> p(spec.cutoff);
    legendre_polynomials(spec.cutoff, std::clamp(x.dot(y), -1.0, 1.0), p);
    Complex sum = 0.0;
    for (int l = 0; l < spec.cutoff; ++l) sum += spec.profile(eigenvalue(l) * scale) * ((2.0 * l + 1.0) * p[l]);
    return sum;
  }
  const ComplexVector yx = eval_harmonics(spec.cutoff, x);
  const ComplexVector yy = eval_harmonics(spec.cutoff, y);
  Complex sum = 0.0;
  for (int l = 0; l < spec.cutoff; ++l) {
    Complex band = 0.0;
    for (int m = -l; m <= l; ++m) band += yx[flat_index(l, m)] * std::conj(yy[flat_index(l, m)]);
    sum += spec.profile(eigenvalue(l) * scale) * band;
  }
  return sum;
}

Complex eval_framelet(int j, std::size_t k, FrameletKind kind, const SphericalPoint& x, const LevelLayout& layout,
                      const FilterBank& bank) {
  if (kind.band < 0 || kind.band > bank.r())
    throw Error("bank '" + bank.name + "' has no high-pass band " + std::to_string(kind.band));
  const int node_level = kind.band == 0 ? j : j + 1;
  const QuadratureRule& rule = *layout.at(node_level).rule;
  if (k >= rule.size())
    throw ShapeError("node index " + std::to_string(k) + " out of range for rule " + rule.tag());
  const SymbolProfile& profile = kind.band == 0 ? bank.scaling : bank.wavelets[kind.band - 1];
  const KernelSpec spec(profile, j);
  return rule.sqrt_weights()[k] * eval_kernel(spec, x, rule.points()[k]);
}

}  // namespace sphframe
