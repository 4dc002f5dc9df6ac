// Command-line front end: signal generation, multi-level transforms,
// denoising, validation, benchmarking and curve export.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sphframe/error.hpp"
#include "sphframe/filterbank.hpp"
#include "sphframe/fmt.hpp"
#include "sphframe/io.hpp"
#include "sphframe/kernels.hpp"
#include "sphframe/signals.hpp"

using namespace sphframe;
namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitInput = 2;
constexpr int kExitConvergence = 3;

class ValidationFailure : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string rule;          // finest-level rule spec, empty = layout default
  std::string layout = "gl"; // gl | sp
  std::string levels = "4:6";
  std::string bank = "s2";
  std::string wendland = "normalized";
  std::string input, output, reference, dir;
  double theta = 0.1;
  double sigma = -1.0;
  double threshold_scale = 1.0;
  std::uint64_t seed = 0;
  double cg_tol = 1e-12;
  int max_iter = 200;
  double tol = 1e-10;
};

std::pair<int, int> parse_levels(const std::string& text, const std::string& flag) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    std::size_t a = 0, b = 0;
    const int lo = std::stoi(text.substr(0, colon), &a);
    const int hi = std::stoi(text.substr(colon + 1), &b);
    if (a != colon || b != text.size() - colon - 1 || lo < 1 || hi <= lo) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::exception&) {
    throw ParseError(flag + ": expected <lo>:<hi> with 1 <= lo < hi, got '" + text + "'");
  }
}

WendlandKind parse_wendland(const std::string& s) {
  if (s == "normalized") return WendlandKind::normalized;
  if (s == "original") return WendlandKind::original;
  throw ParseError("--wendland: expected normalized or original, got '" + s + "'");
}

LevelLayout build_layout(const RunConfig& cfg, int j_min, int j_max) {
  LevelLayout layout = [&] {
    if (cfg.layout == "gl") return LevelLayout::gauss_legendre(j_min, j_max);
    if (cfg.layout == "sp") return LevelLayout::spiral(j_min, j_max);
    throw ParseError("--layout: expected gl or sp, got '" + cfg.layout + "'");
  }();
  if (!cfg.rule.empty()) layout = layout.with_rule(j_max, std::make_shared<const QuadratureRule>(make_rule(cfg.rule)));
  return layout;
}

CgOptions cg_options(const RunConfig& cfg) { return CgOptions{cfg.cg_tol, cfg.max_iter}; }

std::vector<double> load_values_for(const fs::path& path, const QuadratureRule& rule, const std::string& flag) {
  std::vector<double> v;
  try {
    v = read_values(path);
  } catch (const ParseError& e) {
    throw ParseError(flag + ": " + e.what());
  }
  if (v.size() != rule.size())
    throw ShapeError(flag + ": " + path.string() + " has " + std::to_string(v.size()) + " values, rule " + rule.tag() +
                     " has " + std::to_string(rule.size()) + " nodes");
  return v;
}

RulePtr rule_for_signal(const RunConfig& cfg, int level) {
  if (!cfg.rule.empty()) return std::make_shared<const QuadratureRule>(make_rule(cfg.rule));
  return build_layout(cfg, level, level + 1).at(level).rule;
}

// Real band-limited random field values on the rule nodes.
std::vector<double> random_field(const QuadratureRule& rule, int l_lo, int l_hi, std::uint64_t seed) {
  GaussianSource g(seed);
  HarmonicCoefficients c(l_hi);
  for (int l = l_lo; l < l_hi; ++l) {
    c.at(l, 0) = g();
    for (int m = 1; m <= l; ++m) {
      const Complex z(g() / std::sqrt(2.0), g() / std::sqrt(2.0));
      c.at(l, m) = z;
      c.at(l, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(z);
    }
  }
  return unweight(synth_values(c, rule), rule);
}

// ---- commands ----

int cmd_gen_signal(const RunConfig& cfg, const std::string& function, int n, int level, int bandlimit,
                   double texture, bool add_noise_flag) {
  const RulePtr rule = rule_for_signal(cfg, level);
  std::vector<double> values;
  if (function == "wendland") {
    values = sample_test_function(n, *rule, parse_wendland(cfg.wendland));
    if (texture > 0.0) {
      const int L = LevelLayout::bandlimit(level);
      const std::vector<double> t = random_field(*rule, std::max(1, L / 2), L, cfg.seed + 1);
      const double peak = std::abs(*std::max_element(t.begin(), t.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
      }));
      for (std::size_t k = 0; k < values.size(); ++k) values[k] += texture * t[k] / peak;
    }
  } else if (function == "random") {
    const int L = bandlimit > 0 ? bandlimit : LevelLayout::bandlimit(level);
    values = random_field(*rule, 0, L, cfg.seed);
  } else {
    throw ParseError("--function: expected wendland or random, got '" + function + "'");
  }
  if (add_noise_flag) {
    const NoisySignal noisy = add_noise(values, cfg.theta, cfg.seed);
    values = noisy.values;
    std::cerr << "sigma=" << format_double(noisy.sigma) << '\n';
  }
  if (cfg.output.empty()) throw ParseError("--out is required");
  write_values(values, cfg.output);
  std::cout << "wrote " << values.size() << " values on " << rule->tag() << " to " << cfg.output << '\n';
  return 0;
}

int cmd_decompose(const RunConfig& cfg) {
  const auto [J0, J] = parse_levels(cfg.levels, "--levels");
  const LevelLayout layout = build_layout(cfg, J0, J);
  const LevelInfo& top = layout.at(J);
  if (cfg.input.empty()) throw ParseError("--input is required");
  const std::vector<double> values = load_values_for(cfg.input, *top.rule, "--input");
  const FilterBank bank = bank_by_name(cfg.bank);
  const ComplexVector raw = weight(values, *top.rule);
  ProjectionResult proj = project(raw, top.rule, top.bandlimit, cg_options(cfg), J);
  FrameletDecomposition dec = decompose(proj.sequence, bank, layout, J0, cg_options(cfg));
  const double raw_norm = norm(raw);
  dec.log.insert(dec.log.begin(), StageResidual{"projection", J, proj.iterations,
                                                raw_norm > 0.0 ? norm(proj.residual) / raw_norm : 0.0});
  if (cfg.output.empty()) throw ParseError("--out is required");
  write_decomposition(dec, cfg.output);
  write_sequence(CoefficientSequence(J, top.rule, proj.residual), fs::path(cfg.output) / "projection_residual.csv");
  std::cout << "levels " << J0 << ".." << J << ", bank " << bank.name << ", " << dec.total_size()
            << " coefficients, projection residual " << format_double(dec.log.front().residual) << '\n';
  return 0;
}

int cmd_reconstruct(const RunConfig& cfg) {
  if (cfg.dir.empty()) throw ParseError("--dir is required");
  if (!fs::is_directory(cfg.dir)) throw ParseError("--dir: not a directory: " + cfg.dir);
  const FrameletDecomposition dec = read_decomposition(cfg.dir);
  StageLog log;
  const CoefficientSequence v = reconstruct(dec, cg_options(cfg), &log);
  if (cfg.output.empty()) throw ParseError("--out is required");
  write_values(unweight(v.values(), *v.rule()), cfg.output);
  double worst = 0.0;
  for (const auto& s : log) worst = std::max(worst, s.residual);
  std::cout << "reconstructed level " << dec.J << " on " << v.rule()->tag() << " (" << v.size()
            << " nodes), worst stage residual " << format_double(worst) << '\n';
  return 0;
}

void write_report(const DenoiseReport& rep, const RunConfig& cfg, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "bank=" << cfg.bank << "\ntheta=" << format_double(cfg.theta) << "\nseed=" << cfg.seed
      << "\nlevels=" << cfg.levels << "\nthreshold=" << format_double(rep.threshold)
      << "\nprojection_iterations=" << rep.projection_iterations
      << "\nprojection_residual=" << format_double(rep.projection_residual) << '\n';
  if (rep.snr_noisy) out << "snr_noisy_db=" << format_double(*rep.snr_noisy) << '\n';
  if (rep.snr_restored) out << "snr_restored_db=" << format_double(*rep.snr_restored) << '\n';
  for (const auto& k : rep.kills)
    out << "zeroed_j" << k.level << "_n" << k.band << '=' << k.zeroed << '/' << k.total << '\n';
  for (const auto& s : rep.log)
    out << "stage " << s.stage << " level=" << s.level << " iterations=" << s.iterations
        << " residual=" << format_double(s.residual) << '\n';
}

int cmd_denoise(const RunConfig& cfg) {
  const auto [J0, J] = parse_levels(cfg.levels, "--levels");
  const LevelLayout layout = build_layout(cfg, J0, J);
  const RulePtr rule = layout.at(J).rule;
  std::vector<double> clean, noisy;
  double sigma = cfg.sigma;
  if (!cfg.reference.empty()) clean = load_values_for(cfg.reference, *rule, "--reference");
  if (cfg.input.empty()) {
    if (clean.empty()) clean = sample_test_function(4, *rule, parse_wendland(cfg.wendland));
    const NoisySignal ns = add_noise(clean, cfg.theta, cfg.seed);
    noisy = ns.values;
    if (sigma < 0.0) sigma = ns.sigma;
  } else {
    noisy = load_values_for(cfg.input, *rule, "--input");
    if (sigma < 0.0) {
      if (clean.empty()) throw ParseError("--sigma or --reference is required with --input");
      sigma = cfg.theta * *std::max_element(clean.begin(), clean.end());
    }
  }
  DenoiseConfig dc;
  dc.theta = cfg.theta;
  dc.seed = cfg.seed;
  dc.J = J;
  dc.J0 = J0;
  dc.bank = bank_by_name(cfg.bank);
  dc.sigma = sigma;
  dc.threshold_scale = cfg.threshold_scale;
  dc.cg = cg_options(cfg);
  std::optional<std::span<const double>> ref;
  if (!clean.empty()) ref = std::span<const double>(clean);
  const DenoiseResult res = denoise(noisy, dc, layout, ref);
  if (cfg.output.empty()) throw ParseError("--out is required");
  fs::create_directories(cfg.output);
  write_values(res.restored, fs::path(cfg.output) / "restored.csv");
  write_values(noisy, fs::path(cfg.output) / "noisy.csv");
  write_report(res.report, cfg, fs::path(cfg.output) / "report.txt");
  std::cout << "threshold " << format_double(res.report.threshold);
  if (res.report.snr_restored)
    std::cout << ", SNR noisy " << format_double(*res.report.snr_noisy) << " dB, restored "
              << format_double(*res.report.snr_restored) << " dB";
  std::cout << '\n';
  return 0;
}

int cmd_approx_error(const RunConfig& cfg, int level, const std::vector<int>& ns) {
  const std::string spec = cfg.rule.empty() ? "gl:255" : cfg.rule;
  const RulePtr rule = std::make_shared<const QuadratureRule>(make_rule(spec));
  const int L = 1 << level;
  const WendlandKind kind = parse_wendland(cfg.wendland);
  std::ostringstream table;
  table << "n,relative_error,iterations\n";
  for (const int n : ns) {
    const std::vector<double> f = sample_test_function(n, *rule, kind);
    const ProjectionResult p = project(weight(f, *rule), rule, L, cg_options(cfg), level);
    const std::vector<double> back = unweight(p.sequence.values(), *rule);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      num += (f[k] - back[k]) * (f[k] - back[k]);
      den += f[k] * f[k];
    }
    table << n << ',' << format_double(std::sqrt(num / den)) << ',' << p.iterations << '\n';
  }
  std::cout << "# rule=" << rule->tag() << " N=" << rule->size() << " bandlimit=" << L << '\n' << table.str();
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output);
    if (!out) throw ParseError("--out: cannot write " + cfg.output);
    out << table.str();
  }
  return 0;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Mean time per call, repeating until min_time has elapsed.
template <class F>
double time_it(F&& f, double min_time) {
  int reps = 0;
  const auto t0 = std::chrono::steady_clock::now();
  do {
    f();
    ++reps;
  } while (seconds_since(t0) < min_time);
  return seconds_since(t0) / reps;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += std::log(x[i]), my += std::log(y[i]);
  mx /= n, my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

int cmd_bench(const RunConfig& cfg, int j0, double min_time) {
  const auto [lo, hi] = parse_levels(cfg.levels, "--levels");
  if (j0 < 1) j0 = std::max(1, lo - 1);
  if (j0 >= lo) throw ParseError("--j0 must be below the lowest benchmarked level");
  const FilterBank bank = bank_by_name(cfg.bank);
  const LevelLayout layout = build_layout(cfg, j0, hi);
  std::vector<double> ns, t_total, t_symbol, t_transform;
  std::ostringstream table;
  table << "J,N,t_decompose,t_reconstruct,t_total,ratio_total,t_symbol,ratio_symbol,t_transform,ratio_transform\n";
  for (int J = lo; J <= hi; ++J) {
    const LevelInfo& top = layout.at(J);
    GaussianSource g(cfg.seed + J);
    HarmonicCoefficients c(top.bandlimit);
    for (auto& z : c.values()) z = Complex(g(), g());
    const CoefficientSequence v(J, top.rule, synth_values(c, *top.rule));
    std::optional<FrameletDecomposition> dec;
    const double td = time_it([&] { dec = decompose(v, bank, layout, j0, cg_options(cfg)); }, min_time);
    const double tr = time_it([&] { reconstruct(*dec, cg_options(cfg)); }, min_time);
    const double ts = time_it([&] {
      HarmonicCoefficients x = c;
      for (int j = J; j > j0; --j) {
        for (const auto& b : bank.highpass) apply_symbol(x, b, true, j);
        x = apply_symbol(x, bank.lowpass, true, j).resized(layout.at(j - 1).bandlimit);
      }
    }, min_time);
    const double tt = time_it([&] { adjoint_values(synth_values(c, *top.rule), *top.rule, top.bandlimit); }, min_time);
    const double total = td + tr;
    auto ratio = [&](const std::vector<double>& prev, double now) {
      return prev.empty() ? std::string{} : format_double(now / prev.back());
    };
    table << J << ',' << top.rule->size() << ',' << format_double(td) << ',' << format_double(tr) << ','
          << format_double(total) << ',' << ratio(t_total, total) << ',' << format_double(ts) << ','
          << ratio(t_symbol, ts) << ',' << format_double(tt) << ',' << ratio(t_transform, tt) << '\n';
    ns.push_back(static_cast<double>(top.rule->size()));
    t_total.push_back(total);
    t_symbol.push_back(ts);
    t_transform.push_back(tt);
  }
  std::ostringstream summary;
  summary << "# exponent_total=" << format_double(loglog_slope(ns, t_total))
          << " exponent_symbol=" << format_double(loglog_slope(ns, t_symbol))
          << " exponent_transform=" << format_double(loglog_slope(ns, t_transform)) << '\n';
  std::cout << table.str() << summary.str();
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output);
    if (!out) throw ParseError("--out: cannot write " + cfg.output);
    out << table.str() << summary.str();
  }
  return 0;
}

int cmd_validate(const RunConfig& cfg, double perturb) {
  const auto [J0, J] = parse_levels(cfg.levels, "--levels");
  FilterBank bank = bank_by_name(cfg.bank);
  if (perturb != 1.0) {
    const SymbolProfile b = bank.highpass.front();
    bank.highpass.front() = SymbolProfile(b.name() + "*", [b, perturb](double xi) { return perturb * b(xi); },
                                          b.support_lo(), b.support_hi(), ProfileKind::mask);
  }
  const LevelLayout layout = build_layout(cfg, J0, J);
  bool ok = true;
  auto report = [&](const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    if (!pass && ok) {
      ok = false;
      std::cerr << "first failing condition: " << name << '\n';
    }
  };
  const ValidationReport uep = validate_uep(bank, 1e-4, cfg.tol);
  report("UEP", uep.pass, "max deviation " + format_double(uep.max_deviation) + " at xi=" + format_double(uep.worst_xi));
  std::vector<double> eig;
  for (int l = 0; l < LevelLayout::bandlimit(J); ++l) eig.push_back(eigenvalue(l));
  const ValidationReport part = validate_partition_limit(bank, 0, J + 4, eig, cfg.tol);
  report("partition", part.pass, "max deviation " + format_double(part.max_deviation));
  const ValidationReport ref = validate_refinement(bank, 1e-4, std::max(cfg.tol, 1e-12));
  report("refinement", ref.pass, "max deviation " + format_double(ref.max_deviation));
  for (int j = J0; j <= J; ++j) {
    const LevelInfo& info = layout.at(j);
    const int degree = 1 << j;
    if (info.rule->family() == RuleFamily::GL && info.rule->exactness_degree() >= degree) {
      report("exactness level " + std::to_string(j), true, info.rule->tag() + " exact by construction");
      continue;
    }
    try {
      const ExactnessReport ex = verify_exactness(*info.rule, degree, cfg.tol);
      report("exactness level " + std::to_string(j), ex.pass,
             info.rule->tag() + " degree " + std::to_string(degree) + " max_error " + format_double(ex.max_error));
    } catch (const ResourceError& e) {
      report("exactness level " + std::to_string(j), false, info.rule->tag() + ": " + e.what());
    }
  }
  return ok ? 0 : kExitValidation;
}

int cmd_emit_filter_curves(const RunConfig& cfg, double step, double xi_max) {
  const FilterBank bank = bank_by_name(cfg.bank);
  if (!(step > 0.0)) throw ParseError("--step must be positive");
  std::ostringstream out;
  out << "xi,a";
  for (int n = 1; n <= bank.r(); ++n) out << ",b" << n;
  out << ",phi";
  for (int n = 1; n <= bank.r(); ++n) out << ",psi" << n;
  out << '\n';
  const int count = static_cast<int>(std::floor(xi_max / step + 1e-9));
  for (int i = 0; i <= count; ++i) {
    const double xi = i * step;
    out << format_double(xi) << ',' << format_double(bank.lowpass(xi).real());
    for (const auto& b : bank.highpass) out << ',' << format_double(b(xi).real());
    out << ',' << format_double(bank.scaling(xi).real());
    for (const auto& p : bank.wavelets) out << ',' << format_double(p(xi).real());
    out << '\n';
  }
  if (cfg.output.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(cfg.output);
    if (!f) throw ParseError("--out: cannot write " + cfg.output);
    f << out.str();
  }
  return 0;
}

int cmd_emit_framelet(const RunConfig& cfg, int j, const std::string& kind, const std::string& node_at,
                      const std::string& grid, int n_theta, int n_phi) {
  const FilterBank bank = bank_by_name(cfg.bank);
  FrameletKind fk;
  if (kind == "phi" || kind == "lowpass") {
    fk = FrameletKind::lowpass();
  } else if (kind.size() > 1 && kind[0] == 'b') {
    try {
      fk = FrameletKind::highpass(std::stoi(kind.substr(1)));
    } catch (const std::exception&) {
      throw ParseError("--kind: expected phi or b<n>, got '" + kind + "'");
    }
    if (fk.band < 1 || fk.band > bank.r()) throw ParseError("--kind: bank '" + bank.name + "' has no band " + kind);
  } else {
    throw ParseError("--kind: expected phi or b<n>, got '" + kind + "'");
  }
  const SymbolProfile& profile = fk.band == 0 ? bank.scaling : bank.wavelets[fk.band - 1];
  std::function<double(const SphericalPoint&)> value;
  if (node_at == "north") {
    const KernelSpec spec(profile, j);
    const SphericalPoint y = SphericalPoint::from_unit_vector(0.0, 0.0, 1.0);
    value = [spec, y](const SphericalPoint& x) { return eval_kernel(spec, x, y).real(); };
  } else {
    std::size_t k = 0;
    try {
      k = std::stoul(node_at);
    } catch (const std::exception&) {
      throw ParseError("--node-at: expected north or a node index, got '" + node_at + "'");
    }
    const LevelLayout layout = build_layout(cfg, std::max(1, j), j + 1);
    value = [=](const SphericalPoint& x) { return eval_framelet(j, k, fk, x, layout, bank).real(); };
  }
  std::ostringstream out;
  if (grid == "theta") {
    out << "theta,value\n";
    for (int i = 0; i < n_theta; ++i) {
      const double theta = kPi * i / (n_theta - 1);
      out << format_double(theta) << ',' << format_double(value(SphericalPoint::from_angles(theta, 0.0))) << '\n';
    }
  } else if (grid == "latlon") {
    out << "theta,phi,value\n";
    for (int i = 0; i < n_theta; ++i)
      for (int p = 0; p < n_phi; ++p) {
        const double theta = kPi * i / (n_theta - 1), phi = kTwoPi * p / n_phi;
        out << format_double(theta) << ',' << format_double(phi) << ','
            << format_double(value(SphericalPoint::from_angles(theta, phi))) << '\n';
      }
  } else {
    throw ParseError("--grid: expected theta or latlon, got '" + grid + "'");
  }
  if (cfg.output.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(cfg.output);
    if (!f) throw ParseError("--out: cannot write " + cfg.output);
    f << out.str();
  }
  return 0;
}

void add_layout_flags(CLI::App* cmd, RunConfig& cfg, const std::string& default_levels) {
  cfg.levels = default_levels;
  cmd->add_option("--rule", cfg.rule, "Finest-level rule: gl:<degree>, sp:<N>, file:<path>, file-equal:<path>");
  cmd->add_option("--layout", cfg.layout, "Rules for the other levels: gl (gl:2^j) or sp (sp:2^(2j+1))")
      ->capture_default_str();
  cmd->add_option("--levels", cfg.levels, "Level range J0:J")->capture_default_str();
}

void add_cg_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--cg-tol", cfg.cg_tol, "Relative tolerance of the least-squares solver")->capture_default_str();
  cmd->add_option("--max-iter", cfg.max_iter, "Iteration cap of the least-squares solver")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tight framelet transforms on the sphere"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* gen = app.add_subcommand("gen-signal", "Sample a test signal on a rule and write k,value CSV");
  std::string function = "wendland";
  int n = 2, level = 6, bandlimit = 0;
  double texture = 0.0;
  bool noise = false;
  gen->add_option("--function", function, "wendland or random")->capture_default_str();
  gen->add_option("--n", n, "Wendland smoothness index 0..4")->capture_default_str();
  gen->add_option("--wendland", cfg.wendland, "normalized or original")->capture_default_str();
  gen->add_option("--rule", cfg.rule, "Rule spec; default is the layout rule of --level");
  gen->add_option("--layout", cfg.layout, "gl or sp")->capture_default_str();
  gen->add_option("--level", level, "Level whose layout rule and bandlimit are used")->capture_default_str();
  gen->add_option("--bandlimit", bandlimit, "Bandlimit of the random field (default 2^(level-1))");
  gen->add_option("--texture", texture, "Amplitude of added high-frequency texture (wendland only)");
  gen->add_flag("--noise", noise, "Add Gaussian noise with sigma = theta * max");
  gen->add_option("--theta", cfg.theta, "Noise fraction")->capture_default_str();
  gen->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  gen->add_option("--out", cfg.output, "Output CSV")->required();

  auto* dec = app.add_subcommand("decompose", "Project node values and run the multi-level decomposition");
  add_layout_flags(dec, cfg, "4:6");
  add_cg_flags(dec, cfg);
  dec->add_option("--input", cfg.input, "k,value CSV on the finest rule")->required();
  dec->add_option("--bank", cfg.bank, "s2, eta1, eta2 or eta3")->capture_default_str();
  dec->add_option("--out", cfg.output, "Output directory")->required();

  auto* rec = app.add_subcommand("reconstruct", "Rebuild finest-level values from a decomposition directory");
  add_cg_flags(rec, cfg);
  rec->add_option("--dir", cfg.dir, "Decomposition directory")->required();
  rec->add_option("--out", cfg.output, "Output k,value CSV")->required();

  auto* den = app.add_subcommand("denoise", "Hard-threshold denoising of noisy node values");
  add_layout_flags(den, cfg, "4:6");
  add_cg_flags(den, cfg);
  den->add_option("--theta", cfg.theta, "Noise fraction theta")->capture_default_str();
  den->add_option("--seed", cfg.seed, "Noise seed")->capture_default_str();
  den->add_option("--bank", cfg.bank, "s2, eta1, eta2 or eta3")->capture_default_str();
  den->add_option("--input", cfg.input, "Noisy k,value CSV; default adds noise to f_4");
  den->add_option("--reference", cfg.reference, "Clean k,value CSV used for sigma and SNR");
  den->add_option("--sigma", cfg.sigma, "Noise level; default theta * max(reference)");
  den->add_option("--threshold-scale", cfg.threshold_scale, "Threshold as a multiple of sigma")->capture_default_str();
  den->add_option("--wendland", cfg.wendland, "normalized or original (generated f_4)")->capture_default_str();
  den->add_option("--out", cfg.output, "Output directory")->required();

  auto* apx = app.add_subcommand("approx-error", "Relative projection error of the Wendland test functions");
  std::vector<int> ns{0, 1, 2, 3, 4};
  int apx_level = 7;
  add_cg_flags(apx, cfg);
  apx->add_option("--rule", cfg.rule, "Rule spec (default gl:255)");
  apx->add_option("--level", apx_level, "J; the projection keeps l < 2^J")->capture_default_str();
  apx->add_option("--n", ns, "Wendland indices")->capture_default_str();
  apx->add_option("--wendland", cfg.wendland, "normalized or original")->capture_default_str();
  apx->add_option("--out", cfg.output, "Optional CSV output");

  auto* bench = app.add_subcommand("bench", "Time decomposition and reconstruction across levels");
  int bench_j0 = 0;
  double min_time = 0.2;
  add_layout_flags(bench, cfg, "4:8");
  bench->add_option("--j0", bench_j0, "Coarsest level (default: lowest benchmarked level - 1)");
  bench->add_option("--bank", cfg.bank, "s2, eta1, eta2 or eta3")->capture_default_str();
  bench->add_option("--min-time", min_time, "Seconds of repetition per measurement")->capture_default_str();
  bench->add_option("--seed", cfg.seed, "Seed of the random input")->capture_default_str();
  bench->add_option("--out", cfg.output, "Optional CSV output");

  auto* val = app.add_subcommand("validate", "Check filter bank identities and per-level rule exactness");
  double perturb = 1.0;
  add_layout_flags(val, cfg, "4:6");
  val->add_option("--bank", cfg.bank, "s2, eta1, eta2 or eta3")->capture_default_str();
  val->add_option("--tol", cfg.tol, "Tolerance")->capture_default_str();
  val->add_option("--perturb-highpass", perturb, "Scale the first high-pass symbol (fault injection)");

  auto* curves = app.add_subcommand("emit-filter-curves", "Write mask and generator profiles as CSV");
  double step = 1e-3, xi_max = 1.0;
  curves->add_option("--bank", cfg.bank, "s2, eta1, eta2 or eta3")->capture_default_str();
  curves->add_option("--step", step, "Grid step")->capture_default_str();
  curves->add_option("--max", xi_max, "Largest xi")->capture_default_str();
  curves->add_option("--out", cfg.output, "Output CSV (default stdout)");

  auto* fr = app.add_subcommand("emit-framelet", "Sample one framelet on a theta profile or lat-lon grid");
  int fj = 6, n_theta = 181, n_phi = 360;
  std::string kind = "phi", node_at = "north", grid = "theta";
  fr->add_option("--j", fj, "Scale j")->capture_default_str();
  fr->add_option("--kind", kind, "phi or b<n>")->capture_default_str();
  fr->add_option("--node-at", node_at, "north (kernel centred at the pole) or a node index")->capture_default_str();
  fr->add_option("--bank", cfg.bank, "s2, eta1, eta2 or eta3")->capture_default_str();
  fr->add_option("--layout", cfg.layout, "gl or sp, for node-indexed framelets")->capture_default_str();
  fr->add_option("--grid", grid, "theta or latlon")->capture_default_str();
  fr->add_option("--n-theta", n_theta, "Colatitude samples")->capture_default_str();
  fr->add_option("--n-phi", n_phi, "Longitude samples (latlon grid)")->capture_default_str();
  fr->add_option("--out", cfg.output, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*gen) return cmd_gen_signal(cfg, function, n, level, bandlimit, texture, noise);
    if (*dec) return cmd_decompose(cfg);
    if (*rec) return cmd_reconstruct(cfg);
    if (*den) return cmd_denoise(cfg);
    if (*apx) return cmd_approx_error(cfg, apx_level, ns);
    if (*bench) return cmd_bench(cfg, bench_j0, min_time);
    if (*val) return cmd_validate(cfg, perturb);
    if (*curves) return cmd_emit_filter_curves(cfg, step, xi_max);
    if (*fr) return cmd_emit_framelet(cfg, fj, kind, node_at, grid, n_theta, n_phi);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const ValidationFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
