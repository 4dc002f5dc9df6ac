#include "sphframe/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sphframe/error.hpp"

namespace sphframe {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  if (!fs::exists(path)) throw ParseError("file not found: " + path.string());
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  return out;
}

double to_double(const std::string& s, const fs::path& path, int lineno) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + s + "'");
  return v;
}

long to_long(const std::string& s, const fs::path& path, int lineno) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad integer '" + s + "'");
  return v;
}

// Reads data rows after a required header; '#' lines are handed to on_comment.
template <class Row, class Comment>
void read_csv(const fs::path& path, const std::string& header, std::size_t columns, Row on_row,
              Comment on_comment) {
  std::ifstream in = open_in(path);
  std::string line;
  int lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      on_comment(line, lineno);
      continue;
    }
    if (!seen_header) {
      if (line != header) throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected header '" + header + "'");
      seen_header = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != columns)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(columns) +
                       " columns");
    on_row(cells, lineno);
  }
  if (!seen_header) throw ParseError(path.string() + ": missing header '" + header + "'");
}

}  // namespace

void write_harmonics(const HarmonicCoefficients& coeffs, const fs::path& path) {
  auto out = open_out(path);
  out << "ell,m,re,im\n";
  for (int l = 0; l < coeffs.bandlimit(); ++l)
    for (int m = -l; m <= l; ++m) {
      const Complex c = coeffs[flat_index(l, m)];
      out << l << ',' << m << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << '\n';
    }
}

HarmonicCoefficients read_harmonics(const fs::path& path) {
  ComplexVector values;
  read_csv(
      path, "ell,m,re,im", 4,
      [&](const std::vector<std::string>& c, int lineno) {
        const long l = to_long(c[0], path, lineno), m = to_long(c[1], path, lineno);
        if (l < 0 || std::labs(m) > l || flat_index(static_cast<int>(l), static_cast<int>(m)) != values.size())
          throw ParseError(path.string() + ":" + std::to_string(lineno) + ": coefficient rows out of flat order");
        values.emplace_back(to_double(c[2], path, lineno), to_double(c[3], path, lineno));
      },
      [](const std::string&, int) {});
  const int L = static_cast<int>(std::lround(std::sqrt(static_cast<double>(values.size()))));
  if (static_cast<std::size_t>(L) * L != values.size())
    throw ParseError(path.string() + ": coefficient count is not a perfect square");
  return HarmonicCoefficients(L, std::move(values));
}

void write_sequence(const CoefficientSequence& seq, const fs::path& path) {
  auto out = open_out(path);
  out << "# level=" << seq.level() << " N=" << seq.size() << " rule=" << seq.rule()->tag() << '\n';
  out << "k,re,im\n";
  const auto v = seq.values();
  for (std::size_t k = 0; k < v.size(); ++k)
    out << k << ',' << format_double(v[k].real()) << ',' << format_double(v[k].imag()) << '\n';
}

ComplexVector read_sequence(const fs::path& path, SequenceHeader* header) {
  ComplexVector values;
  SequenceHeader h;
  bool have_header = false;
  read_csv(
      path, "k,re,im", 3,
      [&](const std::vector<std::string>& c, int lineno) {
        if (to_long(c[0], path, lineno) != static_cast<long>(values.size()))
          throw ParseError(path.string() + ":" + std::to_string(lineno) + ": node index out of order");
        values.emplace_back(to_double(c[1], path, lineno), to_double(c[2], path, lineno));
      },
      [&](const std::string& line, int lineno) {
        if (have_header) return;
        std::istringstream ss(line.substr(1));
        std::string kv;
        while (ss >> kv) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) continue;
          const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
          if (key == "level") h.level = static_cast<int>(to_long(val, path, lineno));
          else if (key == "N") h.count = static_cast<std::size_t>(to_long(val, path, lineno));
          else if (key == "rule") h.rule = val;
        }
        have_header = true;
      });
  if (have_header && h.count != values.size())
    throw ShapeError(path.string() + ": header declares N=" + std::to_string(h.count) + " but file has " +
                     std::to_string(values.size()) + " rows");
  if (header) *header = h;
  return values;
}

void write_values(std::span<const double> values, const fs::path& path) {
  auto out = open_out(path);
  out << "k,value\n";
  for (std::size_t k = 0; k < values.size(); ++k) out << k << ',' << format_double(values[k]) << '\n';
}

std::vector<double> read_values(const fs::path& path) {
  std::vector<double> values;
  read_csv(
      path, "k,value", 2,
      [&](const std::vector<std::string>& c, int lineno) {
        if (to_long(c[0], path, lineno) != static_cast<long>(values.size()))
          throw ParseError(path.string() + ":" + std::to_string(lineno) + ": node index out of order");
        values.push_back(to_double(c[1], path, lineno));
      },
      [](const std::string&, int) {});
  return values;
}

namespace {

std::string detail_name(int j, int n) { return "detail_j" + std::to_string(j) + "_n" + std::to_string(n) + ".csv"; }

}  // namespace

void write_decomposition(const FrameletDecomposition& dec, const fs::path& dir) {
  fs::create_directories(dir);
  write_sequence(dec.lowpass, dir / "lowpass.csv");
  for (int j = dec.J0; j < dec.J; ++j)
    for (int n = 1; n <= dec.r(); ++n) write_sequence(dec.detail(j, n), dir / detail_name(j, n));
  auto out = open_out(dir / "manifest.txt");
  out << "J=" << dec.J << "\nJ0=" << dec.J0 << "\nr=" << dec.r() << "\nbank=" << dec.bank.name << '\n';
  for (int j = dec.J0; j <= dec.J; ++j) out << "rule_j" << j << '=' << dec.layout.at(j).rule->tag() << '\n';
  out << "total_size=" << dec.total_size() << '\n';
  auto res = open_out(dir / "residual.csv");
  res << "stage,level,iterations,residual\n";
  for (const auto& s : dec.log)
    res << s.stage << ',' << s.level << ',' << s.iterations << ',' << format_double(s.residual) << '\n';
}

std::map<std::string, std::string> read_manifest(const fs::path& path) {
  std::ifstream in = open_in(path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path.string() + ": malformed manifest line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

FrameletDecomposition read_decomposition(const fs::path& dir) {
  const fs::path mpath = dir / "manifest.txt";
  const auto kv = read_manifest(mpath);
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(mpath.string() + ": missing key '" + key + "'");
    return it->second;
  };
  const int J = static_cast<int>(to_long(get("J"), mpath, 0));
  const int J0 = static_cast<int>(to_long(get("J0"), mpath, 0));
  if (J0 < 1 || J <= J0) throw ParseError(mpath.string() + ": invalid levels J0=" + std::to_string(J0) + " J=" + std::to_string(J));
  FilterBank bank = bank_by_name(get("bank"));
  if (std::to_string(bank.r()) != get("r")) throw ParseError(mpath.string() + ": r does not match bank");
  std::vector<RulePtr> rules;
  for (int j = J0; j <= J; ++j)
    rules.push_back(std::make_shared<const QuadratureRule>(make_rule(get("rule_j" + std::to_string(j)))));
  LevelLayout layout(J0, rules);

  auto load = [&](const fs::path& path, int expected_level) {
    SequenceHeader h;
    ComplexVector v = read_sequence(path, &h);
    if (h.level != expected_level)
      throw ShapeError(path.string() + ": level " + std::to_string(h.level) + ", expected " +
                       std::to_string(expected_level));
    const RulePtr& rule = layout.at(expected_level).rule;
    if (v.size() != rule->size())
      throw ShapeError(path.string() + ": " + std::to_string(v.size()) + " values, rule " + rule->tag() + " has " +
                       std::to_string(rule->size()) + " nodes");
    return CoefficientSequence(expected_level, rule, std::move(v));
  };
  FrameletDecomposition dec{J, J0, load(dir / "lowpass.csv", J0), {}, std::move(bank), layout, {}};
  for (int j = J0; j < J; ++j) {
    dec.details.emplace_back();
    for (int n = 1; n <= dec.bank.r(); ++n) dec.details.back().push_back(load(dir / detail_name(j, n), j + 1));
  }
  return dec;
}

}  // namespace sphframe
