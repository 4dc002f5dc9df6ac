#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace sphframe {

enum class ProfileKind {
  mask,      // 1-periodic filter symbol, formula given on [0, 1/2]
  generator  // Fourier profile of a generator on [0, inf)
};

/// Even real-argument symbol. The formula is supplied for xi >= 0; masks are
/// folded into [0, 1/2] by periodicity and evenness before evaluation.
class SymbolProfile {
 public:
  using Function = std::function<std::complex<double>(double)>;

  SymbolProfile(std::string name, Function fn, double support_lo, double support_hi, ProfileKind kind,
                std::string smoothness = "C^4");

  std::complex<double> operator()(double xi) const;

  const std::string& name() const noexcept { return name_; }
  double support_lo() const noexcept { return lo_; }
  double support_hi() const noexcept { return hi_; }
  ProfileKind kind() const noexcept { return kind_; }
  const std::string& smoothness() const noexcept { return smoothness_; }
  bool band_limited() const noexcept {
    return kind_ == ProfileKind::generator && hi_ < std::numeric_limits<double>::infinity();
  }

 private:
  std::string name_;
  Function fn_;
  double lo_, hi_;
  ProfileKind kind_;
  std::string smoothness_;
};

struct FilterBank {
  std::string name;
  SymbolProfile lowpass;
  std::vector<SymbolProfile> highpass;
  SymbolProfile scaling;
  std::vector<SymbolProfile> wavelets;

  int r() const noexcept { return static_cast<int>(highpass.size()); }
};

/// t^4 (35 - 84 t + 70 t^2 - 20 t^3)
double nu(double t);

/// Smooth bump: 0 outside [cL - eL, cR + eR], 1 on [cL + eL, cR - eR], with
/// sin / cos of (pi/2) nu on the two transition bands.
SymbolProfile chi_profile(double cL, double cR, double eL, double eR);

/// Bank with one low-pass and two high-pass symbols and explicit generators.
FilterBank paper_bank_s2();

/// Generators derived from masks by the refinement relations:
/// scaling(xi) = lowpass(xi / 2) on [0, 1/2], wavelet_n(xi) = highpass_n(xi / 2) lowpass(xi / 4) on [0, 1].
/// The low-pass must equal one on [0, 1/8].
FilterBank bank_from_masks(std::string name, SymbolProfile lowpass, std::vector<SymbolProfile> highpass);

struct ExampleBanks {
  FilterBank eta1, eta2, eta3;
};

/// Banks with one, two and three high-pass symbols sharing one low-pass.
ExampleBanks example_banks();

/// s2 | eta1 | eta2 | eta3
FilterBank bank_by_name(const std::string& name);

struct ValidationReport {
  bool pass = true;
  double max_deviation = 0.0;
  double worst_xi = 0.0;
  std::string condition;
};

/// |a|^2 + sum |b_n|^2 = 1 on a grid of [0, 1/2] where the scaling profile is nonzero.
ValidationReport validate_uep(const FilterBank& bank, double grid_step = 1e-4, double tol = 1e-10);

/// |scaling(lambda / 2^{j+1})|^2 = |scaling(lambda / 2^j)|^2 + sum |wavelet_n(lambda / 2^j)|^2
/// for j in [j_lo, j_hi], plus monotone growth of |scaling(lambda / 2^j)| in j.
ValidationReport validate_partition_limit(const FilterBank& bank, int j_lo, int j_hi,
                                          std::span<const double> eigvals, double tol = 1e-10);

/// scaling(2 xi) = lowpass(xi) scaling(xi) and wavelet_n(2 xi) = highpass_n(xi) scaling(xi).
ValidationReport validate_refinement(const FilterBank& bank, double grid_step = 1e-4, double tol = 1e-12);

/// Every generator stays below tol outside its declared support (sampled up to xi = 2).
ValidationReport validate_support(const FilterBank& bank, double grid_step = 1e-4, double tol = 1e-14);

}  // namespace sphframe
