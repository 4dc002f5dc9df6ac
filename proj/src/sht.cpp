#include "sphframe/sht.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "sphframe/error.hpp"
#include "sphframe/legendre.hpp"

namespace sphframe {

HarmonicIndex::HarmonicIndex(int ell_, int m_) : ell(ell_), m(m_) {
  if (ell < 0 || std::abs(m) > ell)
    throw ShapeError("invalid harmonic index (" + std::to_string(ell_) + "," + std::to_string(m_) + ")");
}

HarmonicCoefficients::HarmonicCoefficients(int bandlimit)
    : bandlimit_(bandlimit), values_(static_cast<std::size_t>(std::max(bandlimit, 0)) * std::max(bandlimit, 0)) {
  if (bandlimit < 0) throw ShapeError("bandlimit must be non-negative");
}

HarmonicCoefficients::HarmonicCoefficients(int bandlimit, ComplexVector values)
    : bandlimit_(bandlimit), values_(std::move(values)) {
  if (bandlimit < 0) throw ShapeError("bandlimit must be non-negative");
  if (values_.size() != static_cast<std::size_t>(bandlimit) * bandlimit)
    throw ShapeError("coefficient count " + std::to_string(values_.size()) +
                     " does not equal bandlimit^2 = " + std::to_string(bandlimit * bandlimit));
}

Complex& HarmonicCoefficients::at(int ell, int m) {
  if (ell < 0 || ell >= bandlimit_ || std::abs(m) > ell) throw ShapeError("harmonic index out of range");
  return values_[flat_index(ell, m)];
}

const Complex& HarmonicCoefficients::at(int ell, int m) const {
  if (ell < 0 || ell >= bandlimit_ || std::abs(m) > ell) throw ShapeError("harmonic index out of range");
  return values_[flat_index(ell, m)];
}

HarmonicCoefficients HarmonicCoefficients::resized(int bandlimit) const {
  HarmonicCoefficients out(bandlimit);
  const std::size_t n = std::min(out.size(), size());
  std::copy_n(values_.begin(), n, out.values_.begin());
  return out;
}

double HarmonicCoefficients::tail_norm(int from) const {
  double s = 0.0;
  for (std::size_t k = flat_index(std::clamp(from, 0, bandlimit_), 0) - std::clamp(from, 0, bandlimit_);
       k < values_.size(); ++k)
    s += std::norm(values_[k]);
  return std::sqrt(s);
}

double HarmonicCoefficients::norm() const { return sphframe::norm(values_); }

double eigenvalue(int ell) {
  if (ell < 0) throw ShapeError("degree must be non-negative");
  return std::sqrt(static_cast<double>(ell) * (ell + 1.0));
}

namespace {

double sin_from_cos(double x) { return std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x))); }

}  // namespace

ComplexVector eval_harmonics(int bandlimit, const SphericalPoint& pt) {
  LegendreRecurrence rec(bandlimit);
  std::vector<double> q(rec.size());
  rec.evaluate(pt.cos_theta(), pt.sin_theta(), q);
  ComplexVector out(static_cast<std::size_t>(bandlimit) * bandlimit);
  for (int m = 0; m < bandlimit; ++m) {
    const Complex e = std::polar(1.0, m * pt.phi());
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    for (int l = m; l < bandlimit; ++l) {
      const Complex y = q[rec.offset(m) + (l - m)] * e;
      out[flat_index(l, m)] = y;
      if (m > 0) out[flat_index(l, -m)] = sign * std::conj(y);
    }
  }
  return out;
}

Complex eval_harmonic(HarmonicIndex idx, const SphericalPoint& pt) {
  const ComplexVector all = eval_harmonics(idx.ell + 1, pt);
  return all[idx.flat()];
}

CoefficientSequence::CoefficientSequence(int level, RulePtr rule, ComplexVector values,
                                         std::optional<HarmonicCoefficients> fourier)
    : level_(level), rule_(std::move(rule)), values_(std::move(values)), fourier_(std::move(fourier)) {
  if (!rule_) throw ShapeError("sequence needs a quadrature rule");
  if (values_.size() != rule_->size())
    throw ShapeError("sequence length " + std::to_string(values_.size()) + " does not match rule " +
                     rule_->tag() + " with " + std::to_string(rule_->size()) + " nodes");
}

double CoefficientSequence::norm() const { return sphframe::norm(values_); }

double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("inner product of vectors with different lengths");
  double re = 0.0, im = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    re += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    im += a[k].imag() * b[k].real() - a[k].real() * b[k].imag();
  }
  return {re, im};
}

namespace {

bool use_separable(const QuadratureRule& rule, TransformPath path) {
  if (path == TransformPath::dense) return false;
  if (path == TransformPath::separable) {
    if (!rule.grid()) throw ShapeError("separable transform requires a lat-lon rule, got " + rule.tag());
    return true;
  }
  return rule.grid().has_value();
}

int wrap(int m, int n) {
  const int r = m % n;
  return r < 0 ? r + n : r;
}

ComplexVector synth_separable(const HarmonicCoefficients& c, const QuadratureRule& rule) {
  const LatLonGrid& g = *rule.grid();
  const int L = c.bandlimit();
  const int n = g.n_lon;
  LegendreRecurrence rec(L);
  std::vector<double> q(rec.size());
  ComplexVector bins(n), row(n);
  ComplexVector out(rule.size());
  for (int i = 0; i < g.n_lat; ++i) {
    const double x = g.cos_theta[i];
    rec.evaluate(x, sin_from_cos(x), q);
    std::fill(bins.begin(), bins.end(), Complex{});
    for (int m = 0; m < L; ++m) {
      const std::size_t base = rec.offset(m);
      double pr = 0, pi = 0, nr = 0, ni = 0;
      for (int l = m; l < L; ++l) {
        const double v = q[base + (l - m)];
        const Complex& cp = c[flat_index(l, m)];
        pr += v * cp.real();
        pi += v * cp.imag();
        if (m > 0) {
          const Complex& cn = c[flat_index(l, -m)];
          nr += v * cn.real();
          ni += v * cn.imag();
        }
      }
      bins[wrap(m, n)] += Complex(pr, pi);
      if (m > 0) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        bins[wrap(-m, n)] += Complex(sign * nr, sign * ni);
      }
    }
    detail::dft(n, +1, bins.data(), row.data());
    const std::size_t start = static_cast<std::size_t>(i) * n;
    for (int p = 0; p < n; ++p) out[start + p] = row[p] * rule.sqrt_weights()[start + p];
  }
  return out;
}

HarmonicCoefficients adjoint_separable(std::span<const Complex> v, const QuadratureRule& rule, int L) {
  const LatLonGrid& g = *rule.grid();
  const int n = g.n_lon;
  LegendreRecurrence rec(L);
  std::vector<double> q(rec.size());
  ComplexVector row(n), spec(n);
  HarmonicCoefficients c(L);
  for (int i = 0; i < g.n_lat; ++i) {
    const double x = g.cos_theta[i];
    rec.evaluate(x, sin_from_cos(x), q);
    const std::size_t start = static_cast<std::size_t>(i) * n;
    for (int p = 0; p < n; ++p) row[p] = v[start + p] * rule.sqrt_weights()[start + p];
    detail::dft(n, -1, row.data(), spec.data());
    for (int m = 0; m < L; ++m) {
      const std::size_t base = rec.offset(m);
      const Complex up = spec[wrap(m, n)];
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      const Complex un = sign * spec[wrap(-m, n)];
      for (int l = m; l < L; ++l) {
        const double qv = q[base + (l - m)];
        c[flat_index(l, m)] += qv * up;
        if (m > 0) c[flat_index(l, -m)] += qv * un;
      }
    }
  }
  return c;
}

// Dense transforms walk the points in blocks; inside a block the Legendre
// recurrence runs order by order on contiguous arrays so the point loop vectorizes.
constexpr std::size_t kBlock = 512;

struct OrderMajor {
  std::vector<double> pr, pi, nr, ni;  // c_{l,m} and c_{l,-m}, index offset(m) + l - m
};

ComplexVector synth_dense(const HarmonicCoefficients& c, const QuadratureRule& rule) {
  const int L = c.bandlimit();
  const std::size_t N = rule.size();
  ComplexVector out(N);
  if (L == 0) return out;
  LegendreRecurrence rec(L);
  OrderMajor om{std::vector<double>(rec.size()), std::vector<double>(rec.size()),
                std::vector<double>(rec.size()), std::vector<double>(rec.size())};
  for (int m = 0; m < L; ++m)
    for (int l = m; l < L; ++l) {
      const std::size_t k = rec.offset(m) + (l - m);
      om.pr[k] = c[flat_index(l, m)].real();
      om.pi[k] = c[flat_index(l, m)].imag();
      om.nr[k] = c[flat_index(l, -m)].real();
      om.ni[k] = c[flat_index(l, -m)].imag();
    }
  std::vector<double> x(kBlock), s(kBlock), pmm(kBlock), q1(kBlock), q2(kBlock), gpr(kBlock),
      gpi(kBlock), gnr(kBlock), gni(kBlock), accr(kBlock), acci(kBlock);
  for (std::size_t start = 0; start < N; start += kBlock) {
    const std::size_t B = std::min(kBlock, N - start);
    for (std::size_t b = 0; b < B; ++b) {
      const auto& p = rule.points()[start + b];
      x[b] = p.cos_theta();
      s[b] = p.sin_theta();
      pmm[b] = 1.0;
      accr[b] = acci[b] = 0.0;
    }
    for (int m = 0; m < L; ++m) {
      const std::size_t base = rec.offset(m);
      if (m > 0) {
        const double d = rec.diag(m);
        for (std::size_t b = 0; b < B; ++b) pmm[b] *= d * s[b];
      }
      {
        const double a0 = om.pr[base], b0 = om.pi[base], c0 = om.nr[base], d0 = om.ni[base];
        for (std::size_t b = 0; b < B; ++b) {
          q2[b] = pmm[b];
          gpr[b] = a0 * pmm[b];
          gpi[b] = b0 * pmm[b];
          gnr[b] = c0 * pmm[b];
          gni[b] = d0 * pmm[b];
        }
      }
      if (m + 1 < L) {
        const double sub = rec.sub(m);
        const std::size_t k = base + 1;
        const double a0 = om.pr[k], b0 = om.pi[k], c0 = om.nr[k], d0 = om.ni[k];
        for (std::size_t b = 0; b < B; ++b) {
          const double v = sub * x[b] * pmm[b];
          q1[b] = v;
          gpr[b] += a0 * v;
          gpi[b] += b0 * v;
          gnr[b] += c0 * v;
          gni[b] += d0 * v;
        }
      }
      for (int l = m + 2; l < L; ++l) {
        const std::size_t k = base + (l - m);
        const double ak = rec.a(k), bk = rec.b(k);
        const double a0 = om.pr[k], b0 = om.pi[k], c0 = om.nr[k], d0 = om.ni[k];
        double* __restrict q1p = q1.data();
        double* __restrict q2p = q2.data();
        const double* __restrict xp = x.data();
#pragma omp simd
        for (std::size_t b = 0; b < B; ++b) {
          const double v = ak * (xp[b] * q1p[b] - bk * q2p[b]);
          q2p[b] = q1p[b];
          q1p[b] = v;
          gpr[b] += a0 * v;
          gpi[b] += b0 * v;
          gnr[b] += c0 * v;
          gni[b] += d0 * v;
        }
      }
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      for (std::size_t b = 0; b < B; ++b) {
        const double phi = rule.points()[start + b].phi();
        const double cr = std::cos(m * phi), ci = std::sin(m * phi);
        // e * gp + sign * conj(e) * gn
        accr[b] += cr * gpr[b] - ci * gpi[b];
        acci[b] += cr * gpi[b] + ci * gpr[b];
        if (m > 0) {
          accr[b] += sign * (cr * gnr[b] + ci * gni[b]);
          acci[b] += sign * (cr * gni[b] - ci * gnr[b]);
        }
      }
    }
    for (std::size_t b = 0; b < B; ++b)
      out[start + b] = Complex(accr[b], acci[b]) * rule.sqrt_weights()[start + b];
  }
  return out;
}

HarmonicCoefficients adjoint_dense(std::span<const Complex> v, const QuadratureRule& rule, int L) {
  const std::size_t N = rule.size();
  HarmonicCoefficients c(L);
  if (L == 0) return c;
  LegendreRecurrence rec(L);
  OrderMajor om{std::vector<double>(rec.size()), std::vector<double>(rec.size()),
                std::vector<double>(rec.size()), std::vector<double>(rec.size())};
  std::vector<double> x(kBlock), s(kBlock), pmm(kBlock), q1(kBlock), q2(kBlock), ur(kBlock),
      ui(kBlock), hpr(kBlock), hpi(kBlock), hnr(kBlock), hni(kBlock);
  for (std::size_t start = 0; start < N; start += kBlock) {
    const std::size_t B = std::min(kBlock, N - start);
    for (std::size_t b = 0; b < B; ++b) {
      const auto& p = rule.points()[start + b];
      x[b] = p.cos_theta();
      s[b] = p.sin_theta();
      pmm[b] = 1.0;
      const Complex u = v[start + b] * rule.sqrt_weights()[start + b];
      ur[b] = u.real();
      ui[b] = u.imag();
    }
    for (int m = 0; m < L; ++m) {
      const std::size_t base = rec.offset(m);
      if (m > 0) {
        const double d = rec.diag(m);
        for (std::size_t b = 0; b < B; ++b) pmm[b] *= d * s[b];
      }
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      for (std::size_t b = 0; b < B; ++b) {
        const double phi = rule.points()[start + b].phi();
        const double cr = std::cos(m * phi), ci = std::sin(m * phi);
        // u e^{-i m phi} and sign * u e^{+i m phi}
        hpr[b] = ur[b] * cr + ui[b] * ci;
        hpi[b] = ui[b] * cr - ur[b] * ci;
        hnr[b] = sign * (ur[b] * cr - ui[b] * ci);
        hni[b] = sign * (ui[b] * cr + ur[b] * ci);
      }
      auto accumulate = [&](std::size_t k, const double* q) {
        double a0 = 0, b0 = 0, c0 = 0, d0 = 0;
#pragma omp simd reduction(+ : a0, b0, c0, d0)
        for (std::size_t b = 0; b < B; ++b) {
          a0 += q[b] * hpr[b];
          b0 += q[b] * hpi[b];
          c0 += q[b] * hnr[b];
          d0 += q[b] * hni[b];
        }
        om.pr[k] += a0;
        om.pi[k] += b0;
        om.nr[k] += c0;
        om.ni[k] += d0;
      };
      for (std::size_t b = 0; b < B; ++b) q2[b] = pmm[b];
      accumulate(base, q2.data());
      if (m + 1 < L) {
        const double sub = rec.sub(m);
        for (std::size_t b = 0; b < B; ++b) q1[b] = sub * x[b] * pmm[b];
        accumulate(base + 1, q1.data());
      }
      for (int l = m + 2; l < L; ++l) {
        const std::size_t k = base + (l - m);
        const double ak = rec.a(k), bk = rec.b(k);
        double* __restrict q1p = q1.data();
        double* __restrict q2p = q2.data();
        const double* __restrict xp = x.data();
        double a0 = 0, b0 = 0, c0 = 0, d0 = 0;
#pragma omp simd reduction(+ : a0, b0, c0, d0)
        for (std::size_t b = 0; b < B; ++b) {
          const double qv = ak * (xp[b] * q1p[b] - bk * q2p[b]);
          q2p[b] = q1p[b];
          q1p[b] = qv;
          a0 += qv * hpr[b];
          b0 += qv * hpi[b];
          c0 += qv * hnr[b];
          d0 += qv * hni[b];
        }
        om.pr[k] += a0;
        om.pi[k] += b0;
        om.nr[k] += c0;
        om.ni[k] += d0;
      }
    }
  }
  for (int m = 0; m < L; ++m)
    for (int l = m; l < L; ++l) {
      const std::size_t k = rec.offset(m) + (l - m);
      c[flat_index(l, m)] = Complex(om.pr[k], om.pi[k]);
      if (m > 0) c[flat_index(l, -m)] = Complex(om.nr[k], om.ni[k]);
    }
  return c;
}

}  // namespace

ComplexVector synth_values(const HarmonicCoefficients& coeffs, const QuadratureRule& rule,
                           TransformPath path) {
  return use_separable(rule, path) ? synth_separable(coeffs, rule) : synth_dense(coeffs, rule);
}

HarmonicCoefficients adjoint_values(std::span<const Complex> values, const QuadratureRule& rule,
                                    int bandlimit, TransformPath path) {
  if (values.size() != rule.size())
    throw ShapeError("sequence length " + std::to_string(values.size()) + " does not match rule " +
                     rule.tag() + " with " + std::to_string(rule.size()) + " nodes");
  if (bandlimit < 0) throw ShapeError("bandlimit must be non-negative");
  return use_separable(rule, path) ? adjoint_separable(values, rule, bandlimit)
                                   : adjoint_dense(values, rule, bandlimit);
}

CoefficientSequence synth(const HarmonicCoefficients& coeffs, RulePtr rule, int level, TransformPath path) {
  ComplexVector v = synth_values(coeffs, *rule, path);
  return CoefficientSequence(level, std::move(rule), std::move(v), coeffs);
}

HarmonicCoefficients adjoint(const CoefficientSequence& seq, int bandlimit, TransformPath path) {
  return adjoint_values(seq.values(), *seq.rule(), bandlimit, path);
}

LeastSquaresResult least_squares(std::span<const Complex> values, const QuadratureRule& rule,
                                 int bandlimit, const CgOptions& opts) {
  HarmonicCoefficients r = adjoint_values(values, rule, bandlimit);
  const double bnorm = r.norm();
  LeastSquaresResult res{HarmonicCoefficients(bandlimit), 0, 0.0};
  if (bnorm == 0.0) return res;
  HarmonicCoefficients p = r;
  HarmonicCoefficients& x = res.coeffs;
  double rs = r.norm() * r.norm();
  for (int it = 1; it <= opts.max_iter; ++it) {
    const HarmonicCoefficients ap = adjoint_values(synth_values(p, rule), rule, bandlimit);
    const double pap = inner(p.values(), ap.values()).real();
    if (!(pap > 0.0)) {
      res.iterations = it;
      res.relative_residual = std::sqrt(rs) / bnorm;
      break;
    }
    const double alpha = rs / pap;
    for (std::size_t k = 0; k < x.size(); ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    const double rs_new = r.norm() * r.norm();
    res.iterations = it;
    res.relative_residual = std::sqrt(rs_new) / bnorm;
    if (res.relative_residual <= opts.tol) return res;
    const double beta = rs_new / rs;
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = r[k] + beta * p[k];
    rs = rs_new;
  }
  throw ConvergenceError("conjugate gradient did not converge on rule " + rule.tag() + " after " +
                             std::to_string(res.iterations) + " iterations (relative residual " +
                             std::to_string(res.relative_residual) + ")",
                         res.iterations, res.relative_residual);
}

ProjectionResult project(std::span<const Complex> raw, RulePtr rule, int bandlimit, const CgOptions& opts,
                         int level) {
  if (!rule) throw ShapeError("projection needs a quadrature rule");
  if (static_cast<std::size_t>(bandlimit) * bandlimit > rule->size())
    throw ShapeError("bandlimit " + std::to_string(bandlimit) + " needs " +
                     std::to_string(bandlimit * bandlimit) + " nodes but rule " + rule->tag() + " has " +
                     std::to_string(rule->size()));
  LeastSquaresResult ls = least_squares(raw, *rule, bandlimit, opts);
  ComplexVector v = synth_values(ls.coeffs, *rule);
  ComplexVector residual(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) residual[k] = raw[k] - v[k];
  return ProjectionResult{CoefficientSequence(level, std::move(rule), std::move(v), std::move(ls.coeffs)),
                          std::move(residual), ls.iterations, ls.relative_residual};
}

LeastSquaresResult analyze(const CoefficientSequence& seq, int bandlimit, const CgOptions& opts) {
  if (seq.fourier() && seq.fourier()->bandlimit() == bandlimit) return {*seq.fourier(), 0, 0.0};
  if (seq.rule()->is_isometric_for(bandlimit)) return {adjoint(seq, bandlimit), 0, 0.0};
  return least_squares(seq.values(), *seq.rule(), bandlimit, opts);
}

}  // namespace sphframe
