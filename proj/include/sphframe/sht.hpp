#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "sphframe/quadrature.hpp"

namespace sphframe {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Flat position of (l, m) in the coefficient order l ascending, m = -l..l.
constexpr std::size_t flat_index(int ell, int m) noexcept {
  return static_cast<std::size_t>(ell) * ell + ell + m;
}

struct HarmonicIndex {
  int ell = 0;
  int m = 0;

  HarmonicIndex() = default;
  HarmonicIndex(int ell_, int m_);
  std::size_t flat() const noexcept { return flat_index(ell, m); }
};

/// Coefficients c_lm for l < bandlimit in flat order (length bandlimit^2).
class HarmonicCoefficients {
 public:
  HarmonicCoefficients() = default;
  explicit HarmonicCoefficients(int bandlimit);
  HarmonicCoefficients(int bandlimit, ComplexVector values);

  int bandlimit() const noexcept { return bandlimit_; }
  std::size_t size() const noexcept { return values_.size(); }

  Complex& operator[](std::size_t k) { return values_[k]; }
  const Complex& operator[](std::size_t k) const { return values_[k]; }
  Complex& at(int ell, int m);
  const Complex& at(int ell, int m) const;

  std::span<Complex> values() noexcept { return values_; }
  std::span<const Complex> values() const noexcept { return values_; }

  /// Truncates or zero-pads to a new bandlimit.
  HarmonicCoefficients resized(int bandlimit) const;

  /// Euclidean norm of the entries with l >= from.
  double tail_norm(int from) const;
  double norm() const;

 private:
  int bandlimit_ = 0;
  ComplexVector values_;
};

/// Eigenvalue sqrt(l(l+1)) of the Laplace-Beltrami eigenspace of degree l.
double eigenvalue(int ell);

/// Y_lm at pt, unit norm under the normalized surface measure.
Complex eval_harmonic(HarmonicIndex idx, const SphericalPoint& pt);

/// All Y_lm(pt) for l < bandlimit in flat order.
ComplexVector eval_harmonics(int bandlimit, const SphericalPoint& pt);

/// Values on the nodes of one rule, tagged with the level they belong to.
///
/// An optional Fourier cache records the harmonic coefficients the values
/// were synthesized from. Mutable access to the values drops the cache.
class CoefficientSequence {
 public:
  CoefficientSequence(int level, RulePtr rule, ComplexVector values,
                      std::optional<HarmonicCoefficients> fourier = std::nullopt);

  int level() const noexcept { return level_; }
  const RulePtr& rule() const noexcept { return rule_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const Complex> values() const noexcept { return values_; }
  ComplexVector& mutable_values() {
    fourier_.reset();
    return values_;
  }

  const std::optional<HarmonicCoefficients>& fourier() const noexcept { return fourier_; }
  void set_fourier(HarmonicCoefficients coeffs) { fourier_ = std::move(coeffs); }
  void drop_fourier() noexcept { fourier_.reset(); }

  double norm() const;

 private:
  int level_;
  RulePtr rule_;
  ComplexVector values_;
  std::optional<HarmonicCoefficients> fourier_;
};

enum class TransformPath { automatic, separable, dense };

/// v_k = sum_{l<L} c_lm sqrt(w_k) Y_lm(x_k).
ComplexVector synth_values(const HarmonicCoefficients& coeffs, const QuadratureRule& rule,
                           TransformPath path = TransformPath::automatic);

/// c_lm = sum_k v_k sqrt(w_k) conj(Y_lm(x_k)) for l < bandlimit.
HarmonicCoefficients adjoint_values(std::span<const Complex> values, const QuadratureRule& rule,
                                    int bandlimit, TransformPath path = TransformPath::automatic);

/// Synthesis returning a sequence with its Fourier cache set.
CoefficientSequence synth(const HarmonicCoefficients& coeffs, RulePtr rule, int level = 0,
                          TransformPath path = TransformPath::automatic);

HarmonicCoefficients adjoint(const CoefficientSequence& seq, int bandlimit,
                             TransformPath path = TransformPath::automatic);

struct CgOptions {
  double tol = 1e-12;
  int max_iter = 200;
};

struct LeastSquaresResult {
  HarmonicCoefficients coeffs;
  int iterations = 0;
  double relative_residual = 0.0;  // ||F*(b - F x)|| / ||F* b||
};

/// Solves the normal equations F*F x = F* b by conjugate gradients from x = 0.
/// Throws ConvergenceError when the tolerance is not met within max_iter.
LeastSquaresResult least_squares(std::span<const Complex> values, const QuadratureRule& rule,
                                 int bandlimit, const CgOptions& opts = {});

struct ProjectionResult {
  CoefficientSequence sequence;
  ComplexVector residual;
  int iterations = 0;
  double cg_residual = 0.0;
};

/// Orthogonal projection of raw weighted values onto the span of the
/// band-limited synthesis vectors; requires bandlimit^2 <= node count.
ProjectionResult project(std::span<const Complex> raw, RulePtr rule, int bandlimit,
                         const CgOptions& opts = {}, int level = 0);

/// Harmonic coefficients of a sequence: the adjoint when the rule integrates
/// band-limited products exactly, the least-squares fit otherwise. Uses the
/// cache when it matches the bandlimit.
LeastSquaresResult analyze(const CoefficientSequence& seq, int bandlimit, const CgOptions& opts = {});

double norm(std::span<const Complex> v);
Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // sum a_k conj(b_k)

}  // namespace sphframe
