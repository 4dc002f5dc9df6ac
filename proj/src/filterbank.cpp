#include "sphframe/filterbank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sphframe/error.hpp"
#include "sphframe/sphere.hpp"

namespace sphframe {

SymbolProfile::SymbolProfile(std::string name, Function fn, double support_lo, double support_hi,
                             ProfileKind kind, std::string smoothness)
    : name_(std::move(name)),
      fn_(std::move(fn)),
      lo_(support_lo),
      hi_(support_hi),
      kind_(kind),
      smoothness_(std::move(smoothness)) {
  if (!fn_) throw Error("symbol profile '" + name_ + "' has no function");
  if (!(support_lo <= support_hi)) throw Error("symbol profile '" + name_ + "' has an empty support");
}

std::complex<double> SymbolProfile::operator()(double xi) const {
  xi = std::abs(xi);
  if (kind_ == ProfileKind::mask && xi > 0.5) {
    xi -= std::floor(xi);
    if (xi > 0.5) xi = 1.0 - xi;
  }
  return fn_(xi);
}

double nu(double t) {
  const double t2 = t * t;
  return t2 * t2 * (35.0 - 84.0 * t + 70.0 * t2 - 20.0 * t2 * t);
}

namespace {

double rise(double t) { return std::sin(0.5 * kPi * nu(t)); }
double fall(double t) { return std::cos(0.5 * kPi * nu(t)); }

}  // namespace

SymbolProfile chi_profile(double cL, double cR, double eL, double eR) {
  if (!(eL > 0.0 && eR > 0.0 && cL + eL <= cR - eR))
    throw Error("chi profile needs cL - eL < cL + eL <= cR - eR < cR + eR");
  auto fn = [=](double xi) -> std::complex<double> {
    if (xi < cL - eL || xi > cR + eR) return 0.0;
    if (xi < cL + eL) return rise((xi - cL + eL) / (2.0 * eL));
    if (xi <= cR - eR) return 1.0;
    return fall((xi - cR + eR) / (2.0 * eR));
  };
  char name[96];
  std::snprintf(name, sizeof name, "chi[%g,%g;%g,%g]", cL, cR, eL, eR);
  return SymbolProfile(name, fn, std::max(0.0, cL - eL), cR + eR, ProfileKind::mask);
}

FilterBank paper_bank_s2() {
  SymbolProfile a("a", [](double xi) -> std::complex<double> {
    if (xi < 0.125) return 1.0;
    if (xi <= 0.25) return fall(8.0 * xi - 1.0);
    return 0.0;
  }, 0.0, 0.25, ProfileKind::mask);
  SymbolProfile b1("b1", [](double xi) -> std::complex<double> {
    if (xi < 0.125) return 0.0;
    if (xi <= 0.25) return rise(8.0 * xi - 1.0);
    return fall(4.0 * xi - 1.0);
  }, 0.125, 0.5, ProfileKind::mask);
  SymbolProfile b2("b2", [](double xi) -> std::complex<double> {
    if (xi < 0.25) return 0.0;
    return rise(4.0 * xi - 1.0);
  }, 0.25, 0.5, ProfileKind::mask);

  SymbolProfile phi("phi", [](double xi) -> std::complex<double> {
    if (xi < 0.25) return 1.0;
    if (xi <= 0.5) return fall(4.0 * xi - 1.0);
    return 0.0;
  }, 0.0, 0.5, ProfileKind::generator);
  SymbolProfile psi1("psi1", [](double xi) -> std::complex<double> {
    if (xi < 0.25) return 0.0;
    if (xi < 0.5) return rise(4.0 * xi - 1.0);
    if (xi <= 1.0) {
      const double c = fall(2.0 * xi - 1.0);
      return c * c;
    }
    return 0.0;
  }, 0.25, 1.0, ProfileKind::generator);
  SymbolProfile psi2("psi2", [](double xi) -> std::complex<double> {
    if (xi < 0.5 || xi > 1.0) return 0.0;
    return fall(2.0 * xi - 1.0) * rise(2.0 * xi - 1.0);
  }, 0.5, 1.0, ProfileKind::generator);

  return FilterBank{"s2", a, {b1, b2}, phi, {psi1, psi2}};
}

FilterBank bank_from_masks(std::string name, SymbolProfile lowpass, std::vector<SymbolProfile> highpass) {
  for (int i = 0; i <= 1250; ++i) {
    const double xi = 0.125 * i / 1250.0;
    if (std::abs(lowpass(xi) - 1.0) > 1e-15)
      throw Error("bank '" + name + "': low-pass must equal one on [0, 1/8]");
  }
  const SymbolProfile a = lowpass;
  SymbolProfile phi("phi", [a](double xi) -> std::complex<double> {
    if (xi > 0.5) return 0.0;
    return a(0.5 * xi);
  }, 0.0, std::min(0.5, 2.0 * a.support_hi()), ProfileKind::generator);
  std::vector<SymbolProfile> psis;
  for (std::size_t n = 0; n < highpass.size(); ++n) {
    const SymbolProfile b = highpass[n];
    const double lo = 2.0 * b.support_lo();
    const double hi = std::min(1.0, 2.0 * std::min(0.5, b.support_hi()));
    psis.emplace_back("psi" + std::to_string(n + 1), [a, b](double xi) -> std::complex<double> {
      if (xi > 1.0) return 0.0;
      return b(0.5 * xi) * a(0.25 * xi);
    }, lo, std::max(lo, hi), ProfileKind::generator);
  }
  return FilterBank{std::move(name), lowpass, std::move(highpass), phi, std::move(psis)};
}

ExampleBanks example_banks() {
  const double s = 1.0 / 16.0;
  const SymbolProfile a = chi_profile(-3 * s, 3 * s, s, s);
  ExampleBanks banks{
      bank_from_masks("eta1", a, {chi_profile(3 * s, 9 * s, s, s)}),
      bank_from_masks("eta2", a, {chi_profile(3 * s, 6 * s, s, 2 * s), chi_profile(6 * s, 9 * s, 2 * s, s)}),
      bank_from_masks("eta3", a,
                      {chi_profile(3 * s, 5 * s, s, s), chi_profile(5 * s, 7 * s, s, s),
                       chi_profile(7 * s, 9 * s, s, s)}),
  };
  for (const FilterBank* bank : {&banks.eta1, &banks.eta2, &banks.eta3}) {
    const ValidationReport rep = validate_uep(*bank);
    if (!rep.pass) throw Error("bank '" + bank->name + "' violates the sum-of-squares identity");
  }
  return banks;
}

FilterBank bank_by_name(const std::string& name) {
  if (name == "s2") return paper_bank_s2();
  if (name == "eta1") return example_banks().eta1;
  if (name == "eta2") return example_banks().eta2;
  if (name == "eta3") return example_banks().eta3;
  throw ParseError("unknown filter bank '" + name + "' (expected s2, eta1, eta2 or eta3)");
}

namespace {

void record(ValidationReport& rep, double dev, double xi) {
  if (dev > rep.max_deviation) {
    rep.max_deviation = dev;
    rep.worst_xi = xi;
  }
}

int grid_count(double length, double step) {
  if (!(step > 0.0)) throw Error("grid step must be positive");
  return static_cast<int>(std::floor(length / step + 1e-9));
}

}  // namespace

ValidationReport validate_uep(const FilterBank& bank, double grid_step, double tol) {
  ValidationReport rep;
  rep.condition = "sum of squared filter symbols equals one";
  const int n = grid_count(0.5, grid_step);
  for (int i = 0; i <= n; ++i) {
    const double xi = i * grid_step;
    if (std::abs(bank.scaling(xi)) == 0.0) continue;
    double s = std::norm(bank.lowpass(xi));
    for (const auto& b : bank.highpass) s += std::norm(b(xi));
    record(rep, std::abs(s - 1.0), xi);
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

ValidationReport validate_partition_limit(const FilterBank& bank, int j_lo, int j_hi,
                                          std::span<const double> eigvals, double tol) {
  ValidationReport rep;
  rep.condition = "scale-to-scale partition of unity";
  bool monotone = true;
  for (const double lambda : eigvals) {
    for (int j = j_lo; j <= j_hi; ++j) {
      const double xi = lambda / std::ldexp(1.0, j);
      const double coarse = std::norm(bank.scaling(xi));
      const double fine = std::norm(bank.scaling(0.5 * xi));
      double s = coarse;
      for (const auto& p : bank.wavelets) s += std::norm(p(xi));
      record(rep, std::abs(fine - s), xi);
      if (std::sqrt(fine) < std::sqrt(coarse) - tol) monotone = false;
    }
  }
  rep.pass = rep.max_deviation <= tol && monotone;
  if (!monotone) rep.condition = "monotone growth of the scaling profile across scales";
  return rep;
}

ValidationReport validate_refinement(const FilterBank& bank, double grid_step, double tol) {
  ValidationReport rep;
  rep.condition = "refinement relation between generators and masks";
  const int n = grid_count(0.5, grid_step);
  for (int i = 0; i <= n; ++i) {
    const double xi = i * grid_step;
    const auto phi = bank.scaling(xi);
    record(rep, std::abs(bank.scaling(2.0 * xi) - bank.lowpass(xi) * phi), xi);
    for (std::size_t k = 0; k < bank.wavelets.size(); ++k)
      record(rep, std::abs(bank.wavelets[k](2.0 * xi) - bank.highpass[k](xi) * phi), xi);
  }
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

ValidationReport validate_support(const FilterBank& bank, double grid_step, double tol) {
  ValidationReport rep;
  rep.condition = "generator support declaration";
  const int n = grid_count(2.0, grid_step);
  auto check = [&](const SymbolProfile& p) {
    for (int i = 0; i <= n; ++i) {
      const double xi = i * grid_step;
      if (xi >= p.support_lo() && xi <= p.support_hi()) continue;
      record(rep, std::abs(p(xi)), xi);
    }
  };
  check(bank.scaling);
  for (const auto& p : bank.wavelets) check(p);
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

}  // namespace sphframe
