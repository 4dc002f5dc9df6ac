#include "sphframe/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sphframe/error.hpp"
#include "sphframe/legendre.hpp"

namespace sphframe {

std::string to_string(RuleFamily family) {
  switch (family) {
    case RuleFamily::GL: return "GL";
    case RuleFamily::SD: return "SD";
    case RuleFamily::SP: return "SP";
    case RuleFamily::GENERIC: return "GENERIC";
  }
  return "GENERIC";
}

QuadratureRule::QuadratureRule(std::vector<SphericalPoint> points, std::vector<double> weights,
                               int exactness_degree, RuleFamily family, std::string tag,
                               std::optional<LatLonGrid> grid)
    : points_(std::move(points)),
      weights_(std::move(weights)),
      exactness_degree_(exactness_degree),
      family_(family),
      tag_(std::move(tag)),
      grid_(std::move(grid)) {
  if (points_.empty()) throw ShapeError("quadrature rule needs at least one point");
  if (points_.size() != weights_.size()) throw ShapeError("point and weight counts differ");
  if (exactness_degree_ < 0) throw ShapeError("exactness degree must be non-negative");
  sqrt_weights_.resize(weights_.size());
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    if (!(weights_[k] > 0.0) || !std::isfinite(weights_[k]))
      throw ShapeError("quadrature weights must be positive (index " + std::to_string(k) + ")");
    sqrt_weights_[k] = std::sqrt(weights_[k]);
  }
  if (grid_ && static_cast<std::size_t>(grid_->n_lat) * grid_->n_lon != points_.size())
    throw ShapeError("lat-lon grid does not match point count");
}

QuadratureRule QuadratureRule::certified(int degree) const {
  return QuadratureRule(points_, weights_, degree, family_, tag_, grid_);
}

void gauss_legendre_nodes(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw ShapeError("Gauss-Legendre node count must be >= 1");
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= count; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int l = 2; l <= count; ++l) {
      const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p2;
    }
    dp = count * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = x;
    nodes[count - 1 - i] = -x;
    weights[i] = weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) nodes[count / 2] = 0.0;
}

QuadratureRule gauss_legendre_rule(int degree) {
  if (degree < 1) throw ShapeError("Gauss-Legendre degree must be >= 1");
  LatLonGrid grid;
  grid.n_lat = (degree - 1) / 2 + 1;
  grid.n_lon = degree;
  std::vector<double> gw;
  gauss_legendre_nodes(grid.n_lat, grid.cos_theta, gw);
  grid.lat_weight.resize(grid.n_lat);
  std::vector<SphericalPoint> points;
  std::vector<double> weights;
  points.reserve(static_cast<std::size_t>(grid.n_lat) * grid.n_lon);
  weights.reserve(points.capacity());
  for (int i = 0; i < grid.n_lat; ++i) {
    const double theta = std::acos(grid.cos_theta[i]);
    grid.lat_weight[i] = gw[i] / (2.0 * grid.n_lon);
    for (int p = 0; p < grid.n_lon; ++p) {
      points.push_back(SphericalPoint::from_angles(theta, kTwoPi * p / grid.n_lon));
      weights.push_back(grid.lat_weight[i]);
    }
  }
  return QuadratureRule(std::move(points), std::move(weights), degree, RuleFamily::GL,
                        "gl:" + std::to_string(degree), std::move(grid));
}

QuadratureRule spiral_rule(int count) {
  if (count < 1) throw ShapeError("spiral point count must be >= 1");
  std::vector<SphericalPoint> points;
  points.reserve(count);
  const double n = count;
  const double turn = 1.8 * std::sqrt(n);
  for (int k = 1; k <= count; ++k) {
    const double theta = std::acos(std::clamp(1.0 - (2.0 * k - 1.0) / n, -1.0, 1.0));
    points.push_back(SphericalPoint::from_angles(theta, turn * theta));
  }
  std::vector<double> weights(count, 1.0 / n);
  return QuadratureRule(std::move(points), std::move(weights), 0, RuleFamily::SP,
                        "sp:" + std::to_string(count));
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

QuadratureRule load_pointset(const std::filesystem::path& path, WeightMode mode) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open point-set file " + path.string());
  std::vector<SphericalPoint> points;
  std::vector<double> weights;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ss(t);
    std::vector<double> cols;
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        cols.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
      }
    }
    if (cols.size() != 3 && cols.size() != 4)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 3 or 4 columns");
    if (mode == WeightMode::from_file && cols.size() != 4)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": weight column missing");
    double x = cols[0], y = cols[1], z = cols[2];
    const double r = std::sqrt(x * x + y * y + z * z);
    if (std::abs(r - 1.0) > 1e-8)
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": point is not a unit vector");
    if (std::abs(r - 1.0) > 1e-12) x /= r, y /= r, z /= r;
    points.push_back(SphericalPoint::from_unit_vector(x, y, z));
    if (mode == WeightMode::from_file) {
      if (!(cols[3] > 0.0))
        throw ParseError(path.string() + ":" + std::to_string(lineno) + ": weight must be positive");
      weights.push_back(cols[3]);
    }
  }
  if (points.empty()) throw ParseError("point-set file " + path.string() + " contains no points");
  if (mode == WeightMode::equal) {
    weights.assign(points.size(), 1.0 / static_cast<double>(points.size()));
  } else {
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-12)
      for (double& w : weights) w /= sum;
  }
  return QuadratureRule(std::move(points), std::move(weights), 0, RuleFamily::GENERIC,
                        "file:" + path.string());
}

void save_pointset(const QuadratureRule& rule, const std::filesystem::path& path,
                   bool include_weights) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write point-set file " + path.string());
  char buf[128];
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const auto& p = rule.points()[k];
    if (include_weights)
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", p.x(), p.y(), p.z(),
                    rule.weights()[k]);
    else
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  if (!out) throw ParseError("failed writing point-set file " + path.string());
}

namespace {

int parse_positive(const std::string& text, const std::string& spec) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size() || v < 1) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ParseError("invalid rule spec '" + spec + "'");
  }
}

// First data line decides between 3 and 4 columns.
bool file_has_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open point-set file " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ss(t);
    std::string tok;
    int n = 0;
    while (ss >> tok) ++n;
    return n == 4;
  }
  return false;
}

}  // namespace

QuadratureRule make_rule(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("invalid rule spec '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "gl") return gauss_legendre_rule(parse_positive(arg, spec));
  if (kind == "sp") return spiral_rule(parse_positive(arg, spec));
  if (kind == "file")
    return load_pointset(arg, file_has_weights(arg) ? WeightMode::from_file : WeightMode::equal);
  if (kind == "file-equal") return load_pointset(arg, WeightMode::equal);
  throw ParseError("unknown rule family in spec '" + spec + "'");
}

namespace {

// Rows of sqrt(w_k) Y_lm(x_k) in flat harmonic order, split into real and imaginary planes.
struct WeightedHarmonics {
  std::size_t n_points = 0;
  std::vector<double> re, im;  // [flat][k]
};

WeightedHarmonics weighted_harmonics(const QuadratureRule& rule, int bandlimit) {
  WeightedHarmonics h;
  h.n_points = rule.size();
  const std::size_t dim = static_cast<std::size_t>(bandlimit) * bandlimit;
  h.re.assign(dim * h.n_points, 0.0);
  h.im.assign(dim * h.n_points, 0.0);
  LegendreRecurrence rec(bandlimit);
  std::vector<double> q(rec.size());
  for (std::size_t k = 0; k < h.n_points; ++k) {
    const auto& p = rule.points()[k];
    rec.evaluate(p.cos_theta(), p.sin_theta(), q);
    const double sw = rule.sqrt_weights()[k];
    for (int m = 0; m < bandlimit; ++m) {
      const double c = std::cos(m * p.phi()), s = std::sin(m * p.phi());
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      for (int l = m; l < bandlimit; ++l) {
        const double v = sw * q[rec.offset(m) + (l - m)];
        const std::size_t fp = static_cast<std::size_t>(l) * l + l + m;
        h.re[fp * h.n_points + k] = v * c;
        h.im[fp * h.n_points + k] = v * s;
        if (m > 0) {
          const std::size_t fn = static_cast<std::size_t>(l) * l + l - m;
          h.re[fn * h.n_points + k] = sign * v * c;
          h.im[fn * h.n_points + k] = -sign * v * s;
        }
      }
    }
  }
  return h;
}

std::complex<double> gram_entry(const WeightedHarmonics& h, std::size_t a, std::size_t b) {
  const double* ar = &h.re[a * h.n_points];
  const double* ai = &h.im[a * h.n_points];
  const double* br = &h.re[b * h.n_points];
  const double* bi = &h.im[b * h.n_points];
  double sr = 0.0, si = 0.0;
  for (std::size_t k = 0; k < h.n_points; ++k) {
    sr += ar[k] * br[k] + ai[k] * bi[k];
    si += ai[k] * br[k] - ar[k] * bi[k];
  }
  return {sr, si};
}

void guard_memory(const QuadratureRule& rule, int bandlimit, std::size_t bound) {
  const double dim = static_cast<double>(bandlimit) * bandlimit;
  const double bytes = std::max(dim * dim * 16.0, dim * rule.size() * 16.0);
  if (bytes > static_cast<double>(bound))
    throw ResourceError("Gram computation for degree " + std::to_string(bandlimit) +
                        " exceeds the memory bound");
}

}  // namespace

ExactnessReport verify_exactness(const QuadratureRule& rule, int degree, double tol,
                                 std::size_t memory_bound) {
  if (degree < 1) throw ShapeError("exactness degree must be >= 1");
  guard_memory(rule, degree, memory_bound);
  const WeightedHarmonics h = weighted_harmonics(rule, degree);
  ExactnessReport rep;
  rep.degree = degree;
  for (int l1 = 0; l1 < degree; ++l1) {
    for (int m1 = -l1; m1 <= l1; ++m1) {
      const std::size_t a = static_cast<std::size_t>(l1) * l1 + l1 + m1;
      for (int l2 = 0; l1 + l2 < degree; ++l2) {
        for (int m2 = -l2; m2 <= l2; ++m2) {
          const std::size_t b = static_cast<std::size_t>(l2) * l2 + l2 + m2;
          if (b < a) continue;  // Hermitian: the mirrored pair is visited too
          std::complex<double> u = gram_entry(h, a, b);
          if (a == b) u -= 1.0;
          const double err = std::abs(u);
          if (err > rep.max_error) {
            rep.max_error = err;
            rep.worst_l1 = l1, rep.worst_m1 = m1, rep.worst_l2 = l2, rep.worst_m2 = m2;
          }
        }
      }
    }
  }
  rep.pass = rep.max_error <= tol;
  return rep;
}

std::vector<std::complex<double>> gram_matrix(const QuadratureRule& rule, int bandlimit,
                                              std::size_t memory_bound) {
  if (bandlimit < 1) throw ShapeError("bandlimit must be >= 1");
  guard_memory(rule, bandlimit, memory_bound);
  const WeightedHarmonics h = weighted_harmonics(rule, bandlimit);
  const std::size_t dim = static_cast<std::size_t>(bandlimit) * bandlimit;
  std::vector<std::complex<double>> u(dim * dim);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = a; b < dim; ++b) {
      const auto e = gram_entry(h, a, b);
      u[a * dim + b] = e;
      u[b * dim + a] = std::conj(e);
    }
  }
  return u;
}

}  // namespace sphframe
