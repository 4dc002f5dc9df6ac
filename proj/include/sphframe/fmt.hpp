#pragma once

#include <string>
#include <vector>

#include "sphframe/filterbank.hpp"
#include "sphframe/sht.hpp"

namespace sphframe {

struct LevelInfo {
  int level = 0;
  RulePtr rule;
  int bandlimit = 0;  // harmonics with l < 2^{level-1}
  bool exact = false; // rule integrates products of band-limited harmonics exactly
};

/// Per-level sampling rules for levels j_min..j_max. Level j carries the
/// harmonics l < 2^{j-1} and has its symbols evaluated at lambda_l / 2^j.
class LevelLayout {
 public:
  LevelLayout(int j_min, std::vector<RulePtr> rules);

  /// Level j uses gl:2^j.
  static LevelLayout gauss_legendre(int j_min, int j_max);
  /// Level j uses sp:2^{2j+1}.
  static LevelLayout spiral(int j_min, int j_max);

  static int bandlimit(int j);

  /// Copy with the rule of level j replaced.
  LevelLayout with_rule(int j, RulePtr rule) const;

  int j_min() const noexcept { return j_min_; }
  int j_max() const noexcept { return j_min_ + static_cast<int>(levels_.size()) - 1; }
  bool contains(int j) const noexcept { return j >= j_min() && j <= j_max(); }
  const LevelInfo& at(int j) const;
  bool exact() const noexcept;

 private:
  int j_min_;
  std::vector<LevelInfo> levels_;
};

struct StageResidual {
  std::string stage;
  int level = 0;
  int iterations = 0;
  double residual = 0.0;  // relative normal-equation residual, 0 for exact analysis
};

using StageLog = std::vector<StageResidual>;

/// Output of the multi-level decomposition: the coarse sequence at level J0
/// and, for each j in [J0, J-1], r detail sequences on the level-(j+1) rule.
struct FrameletDecomposition {
  int J = 0;
  int J0 = 0;
  CoefficientSequence lowpass;
  std::vector<std::vector<CoefficientSequence>> details;  // [j - J0][n - 1]
  FilterBank bank;
  LevelLayout layout;
  StageLog log;

  int r() const noexcept { return bank.r(); }
  CoefficientSequence& detail(int j, int n);
  const CoefficientSequence& detail(int j, int n) const;
  std::size_t total_size() const;
};

/// Fourier coefficients multiplied by symbol(lambda_l / 2^level) or its conjugate.
HarmonicCoefficients apply_symbol(const HarmonicCoefficients& coeffs, const SymbolProfile& symbol,
                                  bool conjugate, int level);

/// Coefficients recomputed from the values alone, ignoring any cache.
LeastSquaresResult analyze_values(const CoefficientSequence& seq, int bandlimit, const CgOptions& opts = {});

/// Convolution in the Fourier domain on the sequence's own rule.
CoefficientSequence convolve(const CoefficientSequence& seq, const SymbolProfile& symbol, bool conjugate,
                             const CgOptions& opts = {});

struct DownsampleResult {
  CoefficientSequence sequence;
  double truncated_fraction = 0.0;  // discarded coefficient norm relative to the total
  bool warning = false;             // truncated_fraction above 1e-10
};

DownsampleResult downsample(const CoefficientSequence& seq, const LevelLayout& layout,
                            const CgOptions& opts = {});
CoefficientSequence upsample(const CoefficientSequence& seq, const LevelLayout& layout,
                             const CgOptions& opts = {});

struct OneLevel {
  CoefficientSequence coarse;
  std::vector<CoefficientSequence> details;
  StageLog log;
};

OneLevel decompose_one(const CoefficientSequence& v, const FilterBank& bank, const LevelLayout& layout,
                       const CgOptions& opts = {});
CoefficientSequence reconstruct_one(const CoefficientSequence& coarse,
                                    const std::vector<CoefficientSequence>& details, const FilterBank& bank,
                                    const LevelLayout& layout, const CgOptions& opts = {},
                                    StageLog* log = nullptr);

/// Multi-level decomposition from the level of v down to J0 with one
/// analysis at the top level and pointwise symbol products below it.
FrameletDecomposition decompose(const CoefficientSequence& v, const FilterBank& bank, const LevelLayout& layout,
                                int J0, const CgOptions& opts = {});

/// Multi-level reconstruction; analyses every input sequence from its values.
CoefficientSequence reconstruct(const FrameletDecomposition& dec, const CgOptions& opts = {},
                                StageLog* log = nullptr);

/// N_{J0} + r * sum_{j=J0+1}^{J} N_j
std::size_t redundancy_count(const LevelLayout& layout, int J0, int J, int r);

}  // namespace sphframe
