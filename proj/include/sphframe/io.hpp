#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sphframe/fmt.hpp"

namespace sphframe {

/// CSV `ell,m,re,im`, rows in flat order.
void write_harmonics(const HarmonicCoefficients& coeffs, const std::filesystem::path& path);
HarmonicCoefficients read_harmonics(const std::filesystem::path& path);

/// Header text stored with a sequence file.
struct SequenceHeader {
  int level = 0;
  std::size_t count = 0;
  std::string rule;
};

/// CSV `k,re,im` with a leading `# level=<j> N=<N> rule=<tag>` line.
void write_sequence(const CoefficientSequence& seq, const std::filesystem::path& path);
ComplexVector read_sequence(const std::filesystem::path& path, SequenceHeader* header = nullptr);

/// CSV `k,value`.
void write_values(std::span<const double> values, const std::filesystem::path& path);
std::vector<double> read_values(const std::filesystem::path& path);

/// Directory with lowpass.csv, detail_j<j>_n<n>.csv, manifest.txt and residual.csv.
void write_decomposition(const FrameletDecomposition& dec, const std::filesystem::path& dir);

/// Plain key=value lines; blank and '#' lines skipped.
std::map<std::string, std::string> read_manifest(const std::filesystem::path& path);

/// Rebuilds a decomposition; the layout is recreated from the rule specs in the manifest.
FrameletDecomposition read_decomposition(const std::filesystem::path& dir);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace sphframe
