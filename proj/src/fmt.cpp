#include "sphframe/fmt.hpp"

#include <cmath>

#include "sphframe/error.hpp"

namespace sphframe {

LevelLayout::LevelLayout(int j_min, std::vector<RulePtr> rules) : j_min_(j_min) {
  if (j_min < 1) throw ShapeError("lowest level must be >= 1");
  if (rules.empty()) throw ShapeError("layout needs at least one level");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const int j = j_min + static_cast<int>(i);
    if (!rules[i]) throw ShapeError("layout level " + std::to_string(j) + " has no rule");
    const int L = bandlimit(j);
    if (static_cast<std::size_t>(L) * L > rules[i]->size())
      throw ShapeError("level " + std::to_string(j) + " needs at least " + std::to_string(L * L) +
                       " nodes, rule " + rules[i]->tag() + " has " + std::to_string(rules[i]->size()));
    levels_.push_back(LevelInfo{j, rules[i], L, rules[i]->is_isometric_for(L)});
  }
}

int LevelLayout::bandlimit(int j) {
  if (j < 1 || j > 30) throw ShapeError("level " + std::to_string(j) + " out of range");
  return 1 << (j - 1);
}

LevelLayout LevelLayout::gauss_legendre(int j_min, int j_max) {
  std::vector<RulePtr> rules;
  for (int j = j_min; j <= j_max; ++j)
    rules.push_back(std::make_shared<const QuadratureRule>(gauss_legendre_rule(1 << j)));
  return LevelLayout(j_min, std::move(rules));
}

LevelLayout LevelLayout::spiral(int j_min, int j_max) {
  std::vector<RulePtr> rules;
  for (int j = j_min; j <= j_max; ++j)
    rules.push_back(std::make_shared<const QuadratureRule>(spiral_rule(1 << (2 * j + 1))));
  return LevelLayout(j_min, std::move(rules));
}

LevelLayout LevelLayout::with_rule(int j, RulePtr rule) const {
  std::vector<RulePtr> rules;
  for (const auto& info : levels_) rules.push_back(info.level == j ? rule : info.rule);
  if (!contains(j)) throw ShapeError("layout has no level " + std::to_string(j));
  return LevelLayout(j_min_, std::move(rules));
}

const LevelInfo& LevelLayout::at(int j) const {
  if (!contains(j))
    throw ShapeError("layout covers levels " + std::to_string(j_min()) + ".." + std::to_string(j_max()) +
                     ", not " + std::to_string(j));
  return levels_[j - j_min_];
}

bool LevelLayout::exact() const noexcept {
  for (const auto& info : levels_)
    if (!info.exact) return false;
  return true;
}

CoefficientSequence& FrameletDecomposition::detail(int j, int n) {
  if (j < J0 || j >= J || n < 1 || n > static_cast<int>(details.at(j - J0).size()))
    throw ShapeError("no detail sequence for level " + std::to_string(j) + " band " + std::to_string(n));
  return details[j - J0][n - 1];
}

const CoefficientSequence& FrameletDecomposition::detail(int j, int n) const {
  return const_cast<FrameletDecomposition*>(this)->detail(j, n);
}

std::size_t FrameletDecomposition::total_size() const {
  std::size_t total = lowpass.size();
  for (const auto& band : details)
    for (const auto& w : band) total += w.size();
  return total;
}

HarmonicCoefficients apply_symbol(const HarmonicCoefficients& coeffs, const SymbolProfile& symbol,
                                  bool conjugate, int level) {
  HarmonicCoefficients out(coeffs.bandlimit());
  const double scale = std::ldexp(1.0, -level);
  for (int l = 0; l < coeffs.bandlimit(); ++l) {
    Complex s = symbol(eigenvalue(l) * scale);
    if (conjugate) s = std::conj(s);
    for (int m = -l; m <= l; ++m) out[flat_index(l, m)] = coeffs[flat_index(l, m)] * s;
  }
  return out;
}

LeastSquaresResult analyze_values(const CoefficientSequence& seq, int bandlimit, const CgOptions& opts) {
  if (seq.rule()->is_isometric_for(bandlimit)) return {adjoint(seq, bandlimit), 0, 0.0};
  return least_squares(seq.values(), *seq.rule(), bandlimit, opts);
}

namespace {

void check_level(const CoefficientSequence& seq, const LevelLayout& layout) {
  const LevelInfo& info = layout.at(seq.level());
  if (seq.size() != info.rule->size())
    throw ShapeError("sequence at level " + std::to_string(seq.level()) + " has " + std::to_string(seq.size()) +
                     " values, layout rule " + info.rule->tag() + " has " + std::to_string(info.rule->size()));
}

HarmonicCoefficients add(HarmonicCoefficients a, const HarmonicCoefficients& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
  return a;
}

void log_stage(StageLog* log, std::string stage, int level, const LeastSquaresResult& ls) {
  if (log) log->push_back(StageResidual{std::move(stage), level, ls.iterations, ls.relative_residual});
}

}  // namespace

CoefficientSequence convolve(const CoefficientSequence& seq, const SymbolProfile& symbol, bool conjugate,
                             const CgOptions& opts) {
  const int L = LevelLayout::bandlimit(seq.level());
  const LeastSquaresResult c = analyze(seq, L, opts);
  return synth(apply_symbol(c.coeffs, symbol, conjugate, seq.level()), seq.rule(), seq.level());
}

DownsampleResult downsample(const CoefficientSequence& seq, const LevelLayout& layout, const CgOptions& opts) {
  check_level(seq, layout);
  const int j = seq.level();
  const LevelInfo& coarse = layout.at(j - 1);
  const HarmonicCoefficients c = analyze(seq, layout.at(j).bandlimit, opts).coeffs;
  const double total = c.norm();
  const double lost = c.tail_norm(coarse.bandlimit);
  const double fraction = total > 0.0 ? lost / total : 0.0;
  return DownsampleResult{synth(c.resized(coarse.bandlimit), coarse.rule, j - 1), fraction, fraction > 1e-10};
}

CoefficientSequence upsample(const CoefficientSequence& seq, const LevelLayout& layout, const CgOptions& opts) {
  check_level(seq, layout);
  const int j = seq.level() + 1;
  const LevelInfo& fine = layout.at(j);
  const HarmonicCoefficients c = analyze(seq, layout.at(j - 1).bandlimit, opts).coeffs;
  return synth(c.resized(fine.bandlimit), fine.rule, j);
}

OneLevel decompose_one(const CoefficientSequence& v, const FilterBank& bank, const LevelLayout& layout,
                       const CgOptions& opts) {
  check_level(v, layout);
  const int j = v.level();
  const LevelInfo& fine = layout.at(j);
  const LevelInfo& coarse = layout.at(j - 1);
  OneLevel out{CoefficientSequence(j - 1, coarse.rule, ComplexVector(coarse.rule->size())), {}, {}};
  const LeastSquaresResult c = analyze(v, fine.bandlimit, opts);
  log_stage(&out.log, "analysis", j, c);
  for (const auto& b : bank.highpass) out.details.push_back(synth(apply_symbol(c.coeffs, b, true, j), fine.rule, j));
  out.coarse = synth(apply_symbol(c.coeffs, bank.lowpass, true, j).resized(coarse.bandlimit), coarse.rule, j - 1);
  return out;
}

CoefficientSequence reconstruct_one(const CoefficientSequence& coarse,
                                    const std::vector<CoefficientSequence>& details, const FilterBank& bank,
                                    const LevelLayout& layout, const CgOptions& opts, StageLog* log) {
  check_level(coarse, layout);
  const int j = coarse.level() + 1;
  const LevelInfo& fine = layout.at(j);
  if (static_cast<int>(details.size()) != bank.r())
    throw ShapeError("bank '" + bank.name + "' has " + std::to_string(bank.r()) + " high-pass filters, got " +
                     std::to_string(details.size()) + " detail sequences");
  const LeastSquaresResult lo = analyze_values(coarse, layout.at(j - 1).bandlimit, opts);
  log_stage(log, "lowpass analysis", j - 1, lo);
  HarmonicCoefficients c = apply_symbol(lo.coeffs.resized(fine.bandlimit), bank.lowpass, false, j);
  for (std::size_t n = 0; n < details.size(); ++n) {
    if (details[n].level() != j) throw ShapeError("detail sequence is tagged with the wrong level");
    check_level(details[n], layout);
    const LeastSquaresResult d = analyze_values(details[n], fine.bandlimit, opts);
    log_stage(log, "detail analysis n=" + std::to_string(n + 1), j, d);
    c = add(std::move(c), apply_symbol(d.coeffs, bank.highpass[n], false, j));
  }
  return synth(c, fine.rule, j);
}

FrameletDecomposition decompose(const CoefficientSequence& v, const FilterBank& bank, const LevelLayout& layout,
                                int J0, const CgOptions& opts) {
  check_level(v, layout);
  const int J = v.level();
  if (J0 < 1 || J0 >= J) throw ShapeError("decomposition needs 1 <= J0 < J");
  layout.at(J0);
  FrameletDecomposition dec{J, J0, CoefficientSequence(J0, layout.at(J0).rule, ComplexVector(layout.at(J0).rule->size())),
                            std::vector<std::vector<CoefficientSequence>>(J - J0), bank, layout, {}};
  LeastSquaresResult top = analyze(v, layout.at(J).bandlimit, opts);
  log_stage(&dec.log, "analysis", J, top);
  HarmonicCoefficients c = std::move(top.coeffs);
  for (int j = J; j > J0; --j) {
    const LevelInfo& fine = layout.at(j);
    auto& band = dec.details[j - 1 - J0];
    for (const auto& b : bank.highpass) band.push_back(synth(apply_symbol(c, b, true, j), fine.rule, j));
    c = apply_symbol(c, bank.lowpass, true, j).resized(layout.at(j - 1).bandlimit);
  }
  dec.lowpass = synth(c, layout.at(J0).rule, J0);
  return dec;
}

CoefficientSequence reconstruct(const FrameletDecomposition& dec, const CgOptions& opts, StageLog* log) {
  const LevelLayout& layout = dec.layout;
  if (static_cast<int>(dec.details.size()) != dec.J - dec.J0)
    throw ShapeError("decomposition has " + std::to_string(dec.details.size()) + " detail levels, expected " +
                     std::to_string(dec.J - dec.J0));
  if (dec.lowpass.level() != dec.J0) throw ShapeError("lowpass sequence is tagged with the wrong level");
  check_level(dec.lowpass, layout);
  const LeastSquaresResult lo = analyze_values(dec.lowpass, layout.at(dec.J0).bandlimit, opts);
  log_stage(log, "lowpass analysis", dec.J0, lo);
  HarmonicCoefficients c = lo.coeffs;
  for (int j = dec.J0 + 1; j <= dec.J; ++j) {
    const LevelInfo& fine = layout.at(j);
    const auto& band = dec.details[j - 1 - dec.J0];
    if (static_cast<int>(band.size()) != dec.bank.r())
      throw ShapeError("level " + std::to_string(j - 1) + " has " + std::to_string(band.size()) +
                       " detail sequences, bank has " + std::to_string(dec.bank.r()) + " high-pass filters");
    c = apply_symbol(c.resized(fine.bandlimit), dec.bank.lowpass, false, j);
    for (std::size_t n = 0; n < band.size(); ++n) {
      if (band[n].level() != j) throw ShapeError("detail sequence is tagged with the wrong level");
      check_level(band[n], layout);
      const LeastSquaresResult d = analyze_values(band[n], fine.bandlimit, opts);
      log_stage(log, "detail analysis n=" + std::to_string(n + 1), j, d);
      c = add(std::move(c), apply_symbol(d.coeffs, dec.bank.highpass[n], false, j));
    }
  }
  return synth(c, layout.at(dec.J).rule, dec.J);
}

std::size_t redundancy_count(const LevelLayout& layout, int J0, int J, int r) {
  std::size_t total = layout.at(J0).rule->size();
  for (int j = J0 + 1; j <= J; ++j) total += static_cast<std::size_t>(r) * layout.at(j).rule->size();
  return total;
}

}  // namespace sphframe
