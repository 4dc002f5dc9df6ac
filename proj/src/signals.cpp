#include "sphframe/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sphframe/error.hpp"

namespace sphframe {

double wendland(int n, double t) {
  if (n < 0 || n > 4) throw Error("Wendland index must be in 0..4");
  if (t < 0.0) throw Error("Wendland argument must be non-negative");
  if (t >= 1.0) return 0.0;
  const double u = 1.0 - t;
  const double u2 = u * u;
  switch (n) {
    case 0: return u2;
    case 1: return u2 * u2 * (4.0 * t + 1.0);
    case 2: return u2 * u2 * u2 * (35.0 * t * t + 18.0 * t + 3.0) / 3.0;
    case 3: {
      const double u4 = u2 * u2;
      return u4 * u4 * (((32.0 * t + 25.0) * t + 8.0) * t + 1.0);
    }
    default: {
      const double u4 = u2 * u2;
      return u4 * u4 * u2 * ((((429.0 * t + 450.0) * t + 210.0) * t + 50.0) * t + 5.0) / 5.0;
    }
  }
}

double wendland_tau(int n) {
  if (n < 0 || n > 4) throw Error("Wendland index must be in 0..4");
  return (3.0 * n + 3.0) * std::tgamma(n + 0.5) / (2.0 * std::tgamma(n + 1.0));
}

double wendland_normalized(int n, double t) { return wendland(n, t / wendland_tau(n)); }

double test_function(int n, const SphericalPoint& pt, WendlandKind kind) {
  static constexpr double centers[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  double sum = 0.0;
  for (const auto& c : centers) {
    const double dx = pt.x() - c[0], dy = pt.y() - c[1], dz = pt.z() - c[2];
    const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
    sum += kind == WendlandKind::normalized ? wendland_normalized(n, r) : wendland(n, r);
  }
  return sum;
}

std::vector<double> sample_test_function(int n, const QuadratureRule& rule, WendlandKind kind) {
  std::vector<double> out(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) out[k] = test_function(n, rule.points()[k], kind);
  return out;
}

double GaussianSource::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 53-bit uniforms in (0, 1] and [0, 1)
  constexpr double scale = 1.0 / 9007199254740992.0;
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * scale;
  const double u2 = static_cast<double>(engine_() >> 11) * scale;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

NoisySignal add_noise(std::span<const double> values, double theta, std::uint64_t seed) {
  if (!(theta > 0.0)) throw Error("noise fraction theta must be positive");
  if (values.empty()) return {};
  NoisySignal out;
  out.sigma = theta * *std::max_element(values.begin(), values.end());
  GaussianSource gauss(seed);
  out.values.resize(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) out.values[k] = values[k] + out.sigma * gauss();
  return out;
}

double snr(std::span<const double> reference, std::span<const double> estimate) {
  if (reference.size() != estimate.size()) throw ShapeError("snr inputs differ in length");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    num += reference[k] * reference[k];
    const double d = estimate[k] - reference[k];
    den += d * d;
  }
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(num / den);
}

std::vector<double> unweight(std::span<const Complex> seq, const QuadratureRule& rule) {
  if (seq.size() != rule.size()) throw ShapeError("sequence does not match rule " + rule.tag());
  std::vector<double> out(seq.size());
  for (std::size_t k = 0; k < seq.size(); ++k) out[k] = seq[k].real() / rule.sqrt_weights()[k];
  return out;
}

ComplexVector weight(std::span<const double> values, const QuadratureRule& rule) {
  if (values.size() != rule.size())
    throw ShapeError("got " + std::to_string(values.size()) + " values for rule " + rule.tag() + " with " +
                     std::to_string(rule.size()) + " nodes");
  ComplexVector out(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) out[k] = values[k] * rule.sqrt_weights()[k];
  return out;
}

std::vector<std::vector<std::size_t>> hard_threshold(FrameletDecomposition& dec, double threshold) {
  std::vector<std::vector<std::size_t>> kills;
  for (auto& band : dec.details) {
    kills.emplace_back();
    for (auto& w : band) {
      const auto& sw = w.rule()->sqrt_weights();
      std::size_t zeroed = 0;
      ComplexVector& v = w.mutable_values();
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (std::abs(v[k]) <= threshold * sw[k]) {
          if (v[k] != Complex{}) v[k] = 0.0;
          ++zeroed;
        }
      }
      kills.back().push_back(zeroed);
    }
  }
  return kills;
}

DenoiseResult denoise(std::span<const double> noisy, const DenoiseConfig& cfg, const LevelLayout& layout,
                      std::optional<std::span<const double>> reference) {
  if (cfg.J <= cfg.J0) throw ShapeError("denoising needs J > J0");
  const LevelInfo& top = layout.at(cfg.J);
  const ComplexVector raw = weight(noisy, *top.rule);
  ProjectionResult proj = project(raw, top.rule, top.bandlimit, cfg.cg, cfg.J);
  FrameletDecomposition dec = decompose(proj.sequence, cfg.bank, layout, cfg.J0, cfg.cg);

  DenoiseResult out;
  DenoiseReport& rep = out.report;
  rep.projection_iterations = proj.iterations;
  const double raw_norm = norm(raw);
  rep.projection_residual = raw_norm > 0.0 ? norm(proj.residual) / raw_norm : 0.0;
  rep.threshold = cfg.threshold_scale * cfg.sigma;
  rep.log = dec.log;
  if (rep.threshold > 0.0) {
    const auto kills = hard_threshold(dec, rep.threshold);
    for (std::size_t i = 0; i < kills.size(); ++i)
      for (std::size_t n = 0; n < kills[i].size(); ++n)
        rep.kills.push_back(BandKills{cfg.J0 + static_cast<int>(i), static_cast<int>(n) + 1, kills[i][n],
                                      dec.details[i][n].size()});
  }
  const CoefficientSequence restored = reconstruct(dec, cfg.cg, &rep.log);
  out.restored = unweight(restored.values(), *top.rule);
  if (reference) {
    rep.snr_noisy = snr(*reference, noisy);
    rep.snr_restored = snr(*reference, out.restored);
  }
  return out;
}

}  // namespace sphframe
