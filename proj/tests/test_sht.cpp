#include <doctest.h>

#include "generators.hpp"
#include "oracle.hpp"
#include "sphframe/error.hpp"
#include "sphframe/legendre.hpp"
#include "sphframe/sht.hpp"

using namespace sphframe;

namespace {

RulePtr shared(QuadratureRule r) { return std::make_shared<const QuadratureRule>(std::move(r)); }

// Dense synthesis straight from the Boost harmonics.
ComplexVector oracle_synth(const HarmonicCoefficients& c, const QuadratureRule& rule) {
  ComplexVector v(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const auto& p = rule.points()[k];
    Complex s = 0.0;
    for (int l = 0; l < c.bandlimit(); ++l)
      for (int m = -l; m <= l; ++m) s += c.at(l, m) * oracle::ylm(l, m, p.theta(), p.phi());
    v[k] = rule.sqrt_weights()[k] * s;
  }
  return v;
}

}  // namespace

TEST_CASE("flat index and harmonic index") {
  CHECK(flat_index(0, 0) == 0);
  CHECK(flat_index(1, -1) == 1);
  CHECK(flat_index(1, 1) == 3);
  CHECK(flat_index(3, 0) == 12);
  CHECK(HarmonicIndex(2, -2).flat() == 4);
  CHECK_THROWS(HarmonicIndex(2, 3));
  CHECK_THROWS(HarmonicIndex(-1, 0));
  const HarmonicCoefficients c(7);
  CHECK(c.size() == 49);
}

TEST_CASE("eigenvalues") {
  CHECK(eigenvalue(0) == 0.0);
  CHECK(eigenvalue(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(eigenvalue(255) == doctest::Approx(255.49951076).epsilon(1e-10));
}

TEST_CASE("harmonic values") {
  gen::Source g(5);
  for (int i = 0; i < 20; ++i) CHECK(std::abs(eval_harmonic({0, 0}, g.point()) - 1.0) <= 1e-15);
  const auto north = SphericalPoint::from_unit_vector(0, 0, 1);
  CHECK(eval_harmonic({1, 0}, north).real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("property: conjugation symmetry of harmonics") {
  gen::Source g(6);
  for (int i = 0; i < 100; ++i) {
    const SphericalPoint p = g.point();
    const int l = g.integer(0, 40), m = g.integer(0, l);
    const Complex a = eval_harmonic({l, -m}, p), b = eval_harmonic({l, m}, p);
    CHECK(std::abs(a - (m % 2 ? -1.0 : 1.0) * std::conj(b)) <= 1e-12);
  }
}

TEST_CASE("property: harmonics agree with the boost oracle at random points") {
  gen::Source g(7);
  for (int i = 0; i < 200; ++i) {
    const SphericalPoint p = g.point();
    const int l = g.integer(0, 30), m = g.integer(-l, l);
    CHECK(std::abs(eval_harmonic({l, m}, p) - oracle::ylm(l, m, p.theta(), p.phi())) <= 1e-11);
  }
  const SphericalPoint p = g.point();
  const ComplexVector all = eval_harmonics(12, p);
  for (int l = 0; l < 12; ++l)
    for (int m = -l; m <= l; ++m) CHECK(std::abs(all[flat_index(l, m)] - eval_harmonic({l, m}, p)) <= 1e-14);
}

TEST_CASE("legendre recurrence is stable against extended precision on gl:64") {
  const QuadratureRule r = gauss_legendre_rule(64);
  const LegendreRecurrence rec(64);
  std::vector<double> q(rec.size());
  double worst = 0.0, peak = 0.0;
  const auto& grid = *r.grid();
  for (int i = 0; i < grid.n_lat; ++i) {
    const double x = grid.cos_theta[i];
    const double theta = std::acos(x);
    rec.evaluate(x, std::sqrt((1 - x) * (1 + x)), q);
    for (int m = 0; m < 64; m += 3)
      for (int l = m; l < 64; ++l) {
        const double v = std::abs(q[rec.offset(m) + l - m]);
        REQUIRE(std::isfinite(v));
        peak = std::max(peak, v);
        worst = std::max(worst, std::abs(v - oracle::ylm_abs_high_precision(l, m, theta)));
      }
  }
  CHECK(worst <= 1e-10);
  CHECK(peak < 20.0);
}

TEST_CASE("legendre polynomials") {
  std::vector<double> p(5);
  legendre_polynomials(5, 0.3, p);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == doctest::Approx(0.3));
  CHECK(p[2] == doctest::Approx(0.5 * (3 * 0.09 - 1)));
  CHECK(p[4] == doctest::Approx((35 * std::pow(0.3, 4) - 30 * 0.09 + 3) / 8));
}

TEST_CASE("synth: constant and zero coefficients") {
  for (const std::string spec : {"gl:16", "sp:100"}) {
    const RulePtr r = shared(make_rule(spec));
    HarmonicCoefficients e0(4);
    e0[0] = 1.0;
    const ComplexVector v = synth_values(e0, *r);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(std::abs(v[k] - r->sqrt_weights()[k]) <= 1e-14);
    for (const Complex& z : synth_values(HarmonicCoefficients(4), *r)) CHECK(z == Complex(0.0));
    const HarmonicCoefficients zero = adjoint_values(ComplexVector(r->size()), *r, 4);
    for (const Complex& z : zero.values()) CHECK(z == Complex(0.0));
  }
}

TEST_CASE("synth: separable path against dense path and the boost oracle") {
  gen::Source g(8);
  for (int L : {4, 8, 16}) {
    const QuadratureRule r = gauss_legendre_rule(2 * L);
    const HarmonicCoefficients c = g.coeffs(L);
    const ComplexVector fast = synth_values(c, r, TransformPath::separable);
    const ComplexVector dense = synth_values(c, r, TransformPath::dense);
    CHECK(gen::rel_diff(fast, dense) <= 1e-11);
    if (L <= 8) CHECK(gen::rel_diff(fast, oracle_synth(c, r)) <= 1e-11);
    const ComplexVector v = g.values(r.size());
    const HarmonicCoefficients a = adjoint_values(v, r, L, TransformPath::separable);
    const HarmonicCoefficients b = adjoint_values(v, r, L, TransformPath::dense);
    CHECK(gen::rel_diff(a.values(), b.values()) <= 1e-11);
  }
  // Grids with more longitudes than orders and odd sizes.
  const QuadratureRule odd = gauss_legendre_rule(11);
  const HarmonicCoefficients c = g.coeffs(9);
  CHECK(gen::rel_diff(synth_values(c, odd, TransformPath::separable), synth_values(c, odd, TransformPath::dense)) <= 1e-11);
  CHECK_THROWS(synth_values(c, spiral_rule(50), TransformPath::separable));
}

TEST_CASE("property: adjoint identity") {
  gen::Source g(9);
  for (int trial = 0; trial < 12; ++trial) {
    const int L = g.integer(1, 12);
    const QuadratureRule r = trial % 2 ? gauss_legendre_rule(g.integer(L, 3 * L)) : spiral_rule(g.integer(L * L, 4 * L * L));
    const HarmonicCoefficients c = g.coeffs(L);
    const ComplexVector v = g.values(r.size());
    const Complex lhs = inner(synth_values(c, r), v);
    const Complex rhs = inner(c.values(), adjoint_values(v, r, L).values());
    CHECK(std::abs(lhs - rhs) <= 1e-12 * norm(v) * c.norm());
  }
}

TEST_CASE("property: exact rules give an isometry on band-limited coefficients") {
  gen::Source g(10);
  for (int L = 1; L <= 16; L += 3) {
    const QuadratureRule r = gauss_legendre_rule(2 * L);
    REQUIRE(r.is_isometric_for(L));
    const HarmonicCoefficients c = g.coeffs(L);
    const ComplexVector v = synth_values(c, r);
    CHECK(std::abs(norm(v) - c.norm()) <= 1e-10 * c.norm());
    const HarmonicCoefficients back = adjoint_values(v, r, L);
    CHECK(gen::rel_diff(back.values(), c.values()) <= 1e-10);
  }
}

TEST_CASE("F*F is the identity matrix on exact rules") {
  for (int L : {4, 9, 16}) {
    const QuadratureRule r = gauss_legendre_rule(2 * L);
    const std::size_t dim = static_cast<std::size_t>(L) * L;
    double worst = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      HarmonicCoefficients e(L);
      e[i] = 1.0;
      const HarmonicCoefficients col = adjoint_values(synth_values(e, r), r, L);
      for (std::size_t k = 0; k < dim; ++k) worst = std::max(worst, std::abs(col[k] - (k == i ? 1.0 : 0.0)));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("sequence fourier cache reproduces values") {
  gen::Source g(12);
  const RulePtr r = shared(gauss_legendre_rule(16));
  CoefficientSequence s = synth(g.coeffs(8), r, 4);
  REQUIRE(s.fourier().has_value());
  CHECK(gen::rel_diff(synth_values(*s.fourier(), *r), s.values()) <= 1e-10);
  CHECK(s.level() == 4);
  s.mutable_values()[0] += 1.0;
  CHECK_FALSE(s.fourier().has_value());
  CHECK_THROWS_AS(CoefficientSequence(1, r, ComplexVector(3)), ShapeError);
}

TEST_CASE("harmonic coefficient helpers") {
  gen::Source g(13);
  const HarmonicCoefficients c = g.coeffs(6);
  const HarmonicCoefficients up = c.resized(9), down = c.resized(3);
  CHECK(up.size() == 81);
  CHECK(up.at(5, -3) == c.at(5, -3));
  CHECK(up.tail_norm(6) == 0.0);
  CHECK(down.at(2, 2) == c.at(2, 2));
  CHECK(c.norm() * c.norm() == doctest::Approx(down.norm() * down.norm() + c.tail_norm(3) * c.tail_norm(3)));
}

TEST_CASE("least squares on spiral points") {
  gen::Source g(14);
  const RulePtr r = shared(spiral_rule(600));
  const HarmonicCoefficients c = g.coeffs(10);
  const LeastSquaresResult ls = least_squares(synth_values(c, *r), *r, 10);
  CHECK(gen::rel_diff(ls.coeffs.values(), c.values()) <= 1e-9);
  CHECK(ls.relative_residual <= 1e-12);
  CHECK(ls.iterations > 1);
  try {
    least_squares(g.values(r->size()), *r, 10, CgOptions{1e-14, 2});
    FAIL("expected non-convergence");
  } catch (const ConvergenceError& e) {
    CHECK(e.iterations() == 2);
    CHECK(e.residual() > 1e-14);
  }
}

TEST_CASE("project: examples") {
  gen::Source g(15);
  const RulePtr r = shared(gauss_legendre_rule(32));
  const ComplexVector bl = synth_values(g.coeffs(16), *r);
  const ProjectionResult p = project(bl, r, 16);
  CHECK(norm(p.residual) <= 1e-10 * norm(bl));
  HarmonicCoefficients e0(16);
  e0[0] = 1.0;
  const ComplexVector one = synth_values(e0, *r);
  const ProjectionResult q = project(one, r, 16);
  CHECK(norm(q.residual) <= 1e-14);
  CHECK(gen::rel_diff(q.sequence.values(), one) <= 1e-14);
  CHECK_THROWS_AS(project(bl, r, 32), ShapeError);
  CHECK_THROWS_AS(project(ComplexVector(5), r, 4), ShapeError);
}

TEST_CASE("property: projection residual is orthogonal to the band-limited space") {
  gen::Source g(16);
  for (const std::string spec : {"gl:20", "sp:300"}) {
    const RulePtr r = shared(make_rule(spec));
    const int L = 8;
    const ComplexVector raw = g.values(r->size());
    const ProjectionResult p = project(raw, r, L);
    const HarmonicCoefficients ortho = adjoint_values(p.residual, *r, L);
    for (const Complex& z : ortho.values()) CHECK(std::abs(z) <= 1e-11 * norm(raw));
    // Idempotence.
    const ProjectionResult again = project(p.sequence.values(), r, L);
    CHECK(norm(again.residual) <= 1e-10 * norm(raw));
  }
}

TEST_CASE("analyze picks adjoint, cache or least squares") {
  gen::Source g(17);
  const HarmonicCoefficients c = g.coeffs(8);
  const RulePtr gl = shared(gauss_legendre_rule(16));
  const CoefficientSequence exact(3, gl, synth_values(c, *gl));
  const LeastSquaresResult a = analyze(exact, 8);
  CHECK(a.iterations == 0);
  CHECK(gen::rel_diff(a.coeffs.values(), c.values()) <= 1e-12);
  const RulePtr sp = shared(spiral_rule(200));
  const CoefficientSequence inexact(3, sp, synth_values(c, *sp));
  const LeastSquaresResult b = analyze(inexact, 8);
  CHECK(b.iterations > 0);
  CHECK(gen::rel_diff(b.coeffs.values(), c.values()) <= 1e-9);
}
