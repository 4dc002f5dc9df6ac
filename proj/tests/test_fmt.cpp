#include <doctest.h>

#include "generators.hpp"
#include "sphframe/error.hpp"
#include "sphframe/fmt.hpp"
#include "sphframe/signals.hpp"

using namespace sphframe;

namespace {

double energy(std::span<const Complex> v) { return norm(v) * norm(v); }

CoefficientSequence constant_sequence(const LevelLayout& layout, int j, double c = 1.0) {
  const auto& r = *layout.at(j).rule;
  ComplexVector v(r.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = c * r.sqrt_weights()[k];
  return {j, layout.at(j).rule, v};
}

const SymbolProfile kOne("one", [](double) { return 1.0; }, 0.0, 0.5, ProfileKind::mask);

}  // namespace

TEST_CASE("layout") {
  const LevelLayout gl = LevelLayout::gauss_legendre(2, 6);
  CHECK(gl.j_min() == 2);
  CHECK(gl.j_max() == 6);
  CHECK(gl.exact());
  for (int j = 2; j <= 6; ++j) {
    CHECK(gl.at(j).rule->tag() == "gl:" + std::to_string(1 << j));
    CHECK(gl.at(j).bandlimit == (1 << (j - 1)));
    CHECK(gl.at(j).exact);
    CHECK(static_cast<std::size_t>(gl.at(j).bandlimit * gl.at(j).bandlimit) <= gl.at(j).rule->size());
  }
  const LevelLayout sp = LevelLayout::spiral(1, 4);
  CHECK(sp.at(3).rule->size() == 128);
  CHECK_FALSE(sp.exact());
  CHECK_THROWS_AS(gl.at(7), ShapeError);
  CHECK_THROWS_AS(LevelLayout::gauss_legendre(0, 3), ShapeError);
  CHECK_THROWS_AS(gl.with_rule(6, std::make_shared<const QuadratureRule>(spiral_rule(100))), ShapeError);
  const LevelLayout mixed = gl.with_rule(6, std::make_shared<const QuadratureRule>(gauss_legendre_rule(255)));
  CHECK(mixed.at(6).rule->tag() == "gl:255");
}

TEST_CASE("convolve: identity symbol and plateau of the low-pass") {
  gen::Source g(1);
  const LevelLayout layout = LevelLayout::gauss_legendre(3, 6);
  const CoefficientSequence v = g.sequence(layout, 6);
  CHECK(gen::rel_diff(convolve(v, kOne, false).values(), v.values()) <= 1e-12);
  // l < 4 keeps lambda_l / 64 under 1/8.
  const auto& info = layout.at(6);
  HarmonicCoefficients c = g.coeffs(4).resized(info.bandlimit);
  const CoefficientSequence low(6, info.rule, synth_values(c, *info.rule));
  const FilterBank bank = paper_bank_s2();
  CHECK(gen::rel_diff(convolve(low, bank.lowpass, true).values(), low.values()) <= 1e-12);
}

TEST_CASE("convolve: fourier coefficients are multiplied by the symbol") {
  gen::Source g(2);
  const LevelLayout layout = LevelLayout::gauss_legendre(3, 6);
  const FilterBank bank = paper_bank_s2();
  for (int j = 4; j <= 6; ++j) {
    const CoefficientSequence v = g.sequence(layout, j);
    const int L = layout.at(j).bandlimit;
    const HarmonicCoefficients before = adjoint_values(v.values(), *v.rule(), L);
    for (const SymbolProfile* s : {&bank.lowpass, &bank.highpass[0], &bank.highpass[1]}) {
      const HarmonicCoefficients after = adjoint_values(convolve(v, *s, true).values(), *v.rule(), L);
      double worst = 0.0;
      for (int l = 0; l < L; ++l)
        for (int m = -l; m <= l; ++m)
          worst = std::max(worst, std::abs(after.at(l, m) - before.at(l, m) * std::conj((*s)(eigenvalue(l) / std::ldexp(1.0, j)))));
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("downsample and upsample") {
  gen::Source g(3);
  const LevelLayout layout = LevelLayout::gauss_legendre(3, 6);
  const DownsampleResult dc = downsample(constant_sequence(layout, 5), layout);
  CHECK(dc.sequence.level() == 4);
  CHECK(gen::rel_diff(dc.sequence.values(), constant_sequence(layout, 4).values()) <= 1e-13);
  CHECK_FALSE(dc.warning);
  const CoefficientSequence uc = upsample(constant_sequence(layout, 4), layout);
  CHECK(gen::rel_diff(uc.values(), constant_sequence(layout, 5).values()) <= 1e-13);
  const CoefficientSequence zero = upsample(CoefficientSequence(4, layout.at(4).rule, ComplexVector(layout.at(4).rule->size())), layout);
  for (const Complex& z : zero.values()) CHECK(z == Complex(0.0));
  // (Lambda_{j-1}, N_{j-1}) sequences survive up then down.
  const CoefficientSequence c4 = g.sequence(layout, 4);
  const CoefficientSequence up = upsample(c4, layout);
  CHECK(std::abs(up.norm() - c4.norm()) <= 1e-10 * c4.norm());
  const HarmonicCoefficients fine = adjoint_values(up.values(), *up.rule(), layout.at(5).bandlimit);
  const HarmonicCoefficients coarse = adjoint_values(c4.values(), *c4.rule(), layout.at(4).bandlimit);
  CHECK(gen::max_abs_diff(fine.resized(layout.at(4).bandlimit).values(), coarse.values()) <= 1e-12);
  CHECK(fine.tail_norm(layout.at(4).bandlimit) <= 1e-12);
  CHECK(gen::rel_diff(downsample(up, layout).sequence.values(), c4.values()) <= 1e-12);
  // Content above the coarse bandlimit is reported.
  const DownsampleResult lossy = downsample(g.sequence(layout, 5), layout);
  CHECK(lossy.warning);
  CHECK(lossy.truncated_fraction > 0.1);
}

TEST_CASE("decompose_one: constants, energy and one-hot propagation") {
  gen::Source g(4);
  const LevelLayout layout = LevelLayout::gauss_legendre(3, 6);
  const FilterBank bank = paper_bank_s2();
  const OneLevel c = decompose_one(constant_sequence(layout, 6, 2.0), bank, layout);
  for (const auto& w : c.details) CHECK(w.norm() <= 1e-13);
  CHECK(gen::rel_diff(c.coarse.values(), constant_sequence(layout, 5, 2.0).values()) <= 1e-13);
  for (int trial = 0; trial < 5; ++trial) {
    const CoefficientSequence v = g.sequence(layout, 6);
    const OneLevel d = decompose_one(v, bank, layout);
    double e = energy(d.coarse.values());
    for (const auto& w : d.details) e += energy(w.values());
    CHECK(std::abs(e - energy(v.values())) <= 1e-10 * energy(v.values()));
    for (const auto& w : d.details) CHECK(w.level() == 6);
  }
  const int j = 6, L = layout.at(j).bandlimit;
  for (auto [l, m] : {std::pair{0, 0}, {3, -2}, {10, 7}, {20, 0}, {31, -31}}) {
    HarmonicCoefficients e(L);
    e.at(l, m) = 1.0;
    const RulePtr& r = layout.at(j).rule;
    const OneLevel d = decompose_one(CoefficientSequence(j, r, synth_values(e, *r)), bank, layout);
    const double xi = eigenvalue(l) / 64.0;
    for (int n = 0; n < 2; ++n) {
      const HarmonicCoefficients w = adjoint_values(d.details[n].values(), *r, L);
      HarmonicCoefficients expect(L);
      expect.at(l, m) = std::conj(bank.highpass[n](xi));
      CHECK(gen::max_abs_diff(w.values(), expect.values()) <= 1e-12);
    }
    const HarmonicCoefficients a = adjoint_values(d.coarse.values(), *d.coarse.rule(), layout.at(5).bandlimit);
    if (l < layout.at(5).bandlimit) CHECK(std::abs(a.at(l, m) - std::conj(bank.lowpass(xi))) <= 1e-12);
  }
}

TEST_CASE("reconstruct_one inverts decompose_one") {
  gen::Source g(5);
  const LevelLayout layout = LevelLayout::gauss_legendre(3, 6);
  const ExampleBanks ex = example_banks();
  for (const FilterBank& bank : {paper_bank_s2(), ex.eta1, ex.eta2, ex.eta3}) {
    const CoefficientSequence v = g.sequence(layout, 5);
    const OneLevel d = decompose_one(v, bank, layout);
    const CoefficientSequence back = reconstruct_one(d.coarse, d.details, bank, layout);
    CHECK(gen::rel_diff(back.values(), v.values()) <= 1e-10);
    std::vector<CoefficientSequence> zeros;
    for (const auto& w : d.details) zeros.emplace_back(w.level(), w.rule(), ComplexVector(w.size()));
    const CoefficientSequence z = reconstruct_one(CoefficientSequence(4, layout.at(4).rule, ComplexVector(layout.at(4).rule->size())),
                                                  zeros, bank, layout);
    CHECK(z.norm() == 0.0);
  }
  CHECK_THROWS_AS(reconstruct_one(decompose_one(g.sequence(layout, 5), paper_bank_s2(), layout).coarse, {}, paper_bank_s2(), layout),
                  ShapeError);
}

TEST_CASE("multi-level decomposition matches one level and counts coefficients") {
  gen::Source g(6);
  const LevelLayout layout = LevelLayout::gauss_legendre(3, 7);
  const FilterBank bank = paper_bank_s2();
  const CoefficientSequence v = g.sequence(layout, 6);
  const FrameletDecomposition d = decompose(v, bank, layout, 5);
  const OneLevel one = decompose_one(v, bank, layout);
  CHECK(gen::max_abs_diff(d.lowpass.values(), one.coarse.values()) <= 1e-12);
  for (int n = 1; n <= 2; ++n) CHECK(gen::max_abs_diff(d.detail(5, n).values(), one.details[n - 1].values()) <= 1e-12);
  const FrameletDecomposition deep = decompose(g.sequence(layout, 7), bank, layout, 3);
  std::size_t expected = layout.at(3).rule->size();
  for (int j = 4; j <= 7; ++j) expected += 2 * layout.at(j).rule->size();
  CHECK(deep.total_size() == expected);
  CHECK(redundancy_count(layout, 3, 7, 2) == expected);
  CHECK(deep.details.size() == 4);
  for (int j = 3; j < 7; ++j)
    for (int n = 1; n <= 2; ++n) CHECK(deep.detail(j, n).size() == layout.at(j + 1).rule->size());
  CHECK_THROWS_AS(deep.detail(7, 1), ShapeError);
  CHECK_THROWS_AS(deep.detail(5, 3), ShapeError);
  CHECK_THROWS_AS(decompose(v, bank, layout, 6), ShapeError);
}

TEST_CASE("property: perfect reconstruction and per-level energy on exact layouts") {
  gen::Source g(7);
  const ExampleBanks ex = example_banks();
  for (auto [J0, J] : {std::pair{3, 5}, {4, 7}, {1, 4}}) {
    const LevelLayout layout = LevelLayout::gauss_legendre(J0, J);
    for (const FilterBank& bank : {paper_bank_s2(), ex.eta2, ex.eta3}) {
      const CoefficientSequence v = g.sequence(layout, J);
      const FrameletDecomposition d = decompose(v, bank, layout, J0);
      const CoefficientSequence back = reconstruct(d);
      CHECK(gen::rel_diff(back.values(), v.values()) <= 1e-10);
      double e = energy(d.lowpass.values());
      for (const auto& lvl : d.details)
        for (const auto& w : lvl) e += energy(w.values());
      CHECK(std::abs(e - energy(v.values())) <= 1e-10 * energy(v.values()));
    }
  }
}

TEST_CASE("property: linearity of the decomposition") {
  gen::Source g(8);
  const LevelLayout layout = LevelLayout::gauss_legendre(3, 6);
  const FilterBank bank = paper_bank_s2();
  const CoefficientSequence u = g.sequence(layout, 6), v = g.sequence(layout, 6);
  const Complex alpha(0.7, -1.3), beta(-2.1, 0.4);
  ComplexVector mix(u.size());
  for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = alpha * u.values()[k] + beta * v.values()[k];
  const FrameletDecomposition du = decompose(u, bank, layout, 3), dv = decompose(v, bank, layout, 3);
  const FrameletDecomposition dm = decompose(CoefficientSequence(6, u.rule(), mix), bank, layout, 3);
  auto check = [&](const CoefficientSequence& a, const CoefficientSequence& b, const CoefficientSequence& m) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
      worst = std::max(worst, std::abs(m.values()[k] - alpha * a.values()[k] - beta * b.values()[k]));
    CHECK(worst <= 1e-12 * (norm(mix) + 1.0));
  };
  check(du.lowpass, dv.lowpass, dm.lowpass);
  for (int j = 3; j < 6; ++j)
    for (int n = 1; n <= 2; ++n) check(du.detail(j, n), dv.detail(j, n), dm.detail(j, n));
}

TEST_CASE("low-frequency inputs leave the details empty") {
  gen::Source g(9);
  const LevelLayout layout = LevelLayout::gauss_legendre(4, 7);
  const FilterBank bank = paper_bank_s2();
  const auto& top = layout.at(7);
  // lambda_l / 2^6 < 1/8 for l < 8: both levels stay on the plateau of the low-pass.
  const CoefficientSequence v(7, top.rule, synth_values(g.coeffs(7).resized(top.bandlimit), *top.rule));
  const FrameletDecomposition d = decompose(v, bank, layout, 5);
  for (const auto& lvl : d.details)
    for (const auto& w : lvl) CHECK(w.norm() <= 1e-12 * v.norm());
  CHECK(std::abs(d.lowpass.norm() - v.norm()) <= 1e-12 * v.norm());
  // Constant input: all energy in the low-pass, zeroing the details keeps it.
  FrameletDecomposition c = decompose(constant_sequence(layout, 7), bank, layout, 4);
  for (auto& lvl : c.details)
    for (auto& w : lvl) {
      CHECK(w.norm() <= 1e-13);
      std::fill(w.mutable_values().begin(), w.mutable_values().end(), Complex(0.0));
    }
  CHECK(gen::rel_diff(reconstruct(c).values(), constant_sequence(layout, 7).values()) <= 1e-12);
}

TEST_CASE("property: perturbing the details moves the output by at most the perturbation") {
  gen::Source g(10);
  const LevelLayout layout = LevelLayout::gauss_legendre(3, 6);
  const ExampleBanks ex = example_banks();
  for (const FilterBank& bank : {paper_bank_s2(), ex.eta3}) {
    for (int trial = 0; trial < 4; ++trial) {
      const CoefficientSequence v = g.sequence(layout, 6);
      FrameletDecomposition d = decompose(v, bank, layout, 3);
      const double thr = g.uniform(0.2, 1.5) * d.detail(5, 1).norm() / std::sqrt(double(d.detail(5, 1).size()));
      double removed = 0.0;
      for (auto& lvl : d.details)
        for (auto& w : lvl)
          for (auto& z : w.mutable_values())
            if (std::abs(z) <= thr) removed += std::norm(z), z = 0.0;
      const CoefficientSequence back = reconstruct(d);
      double diff = 0.0;
      for (std::size_t k = 0; k < v.size(); ++k) diff += std::norm(back.values()[k] - v.values()[k]);
      CHECK(std::sqrt(diff) <= std::sqrt(removed) * (1 + 1e-10) + 1e-14);
    }
  }
}

TEST_CASE("spiral layouts report nonzero stage residuals") {
  gen::Source g(11);
  const LevelLayout layout = LevelLayout::spiral(2, 4);
  const FilterBank bank = paper_bank_s2();
  const auto& top = layout.at(4);
  const CoefficientSequence v(4, top.rule, synth_values(g.coeffs(top.bandlimit), *top.rule));
  const FrameletDecomposition d = decompose(v, bank, layout, 2);
  REQUIRE_FALSE(d.log.empty());
  bool iterative = false;
  for (const auto& s : d.log) iterative = iterative || s.iterations > 0;
  CHECK(iterative);
  StageLog log;
  const CoefficientSequence back = reconstruct(d, {}, &log);
  CHECK_FALSE(log.empty());
  const double err = gen::rel_diff(back.values(), v.values());
  CHECK(err > 0.0);
  CHECK(err < 1.0);
  MESSAGE("spiral round-trip relative error " << err);
}

TEST_CASE("fourier cache never outlives edits of the values") {
  gen::Source g(12);
  const LevelLayout layout = LevelLayout::gauss_legendre(3, 5);
  const FilterBank bank = paper_bank_s2();
  FrameletDecomposition d = decompose(g.sequence(layout, 5), bank, layout, 3);
  const CoefficientSequence before = reconstruct(d);
  d.detail(4, 2).mutable_values()[7] += Complex(0.5, 0.0);
  const CoefficientSequence after = reconstruct(d);
  CHECK(gen::rel_diff(after.values(), before.values()) > 1e-6);
}
