#include "dunkl/thinsets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "dunkl/report.hpp"

namespace dunkl {

SetUnion::SetUnion(int d, std::vector<Box> pieces) : d_(d), pieces_(std::move(pieces)) {
  if (d < 1) throw std::invalid_argument("SetUnion: dimension must be >= 1");
  for (const Box& b : pieces_) {
    if (static_cast<int>(b.lo.size()) != d || static_cast<int>(b.hi.size()) != d) {
      throw std::invalid_argument("SetUnion: box dimension mismatch");
    }
    for (int j = 0; j < d; ++j) {
      if (!(b.lo[j] < b.hi[j])) throw std::invalid_argument("SetUnion: empty or inverted piece");
    }
  }
  std::sort(pieces_.begin(), pieces_.end(), [](const Box& a, const Box& b) { return a.lo < b.lo; });
  if (d == 1) {
    for (std::size_t i = 1; i < pieces_.size(); ++i) {
      if (!(pieces_[i - 1].hi[0] < pieces_[i].lo[0])) {
        throw std::invalid_argument("SetUnion: pieces overlap or touch");
      }
    }
  }
}

SetUnion SetUnion::intervals(std::vector<std::pair<double, double>> pieces) {
  std::vector<Box> boxes;
  boxes.reserve(pieces.size());
  for (const auto& [a, b] : pieces) boxes.push_back({{a}, {b}});
  return SetUnion(1, std::move(boxes));
}

SetUnion SetUnion::cube(int d, double half_width) {
  return SetUnion(d, {Box{std::vector<double>(d, -half_width), std::vector<double>(d, half_width)}});
}

bool SetUnion::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != d_) throw std::invalid_argument("SetUnion::contains: dimension mismatch");
  if (d_ == 1) return contains(x[0]);
  for (const Box& b : pieces_) {
    bool in = true;
    for (int j = 0; j < d_ && in; ++j) in = b.lo[j] <= x[j] && x[j] <= b.hi[j];
    if (in) return true;
  }
  return false;
}

bool SetUnion::contains(double x) const {
  if (d_ != 1) throw std::invalid_argument("SetUnion::contains(double): 1D sets only");
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x,
                             [](const Box& b, double v) { return b.hi[0] < v; });
  return it != pieces_.end() && it->lo[0] <= x;
}

double SetUnion::measure(const RootSystemConfig& cfg) const {
  if (cfg.dim() != d_) throw std::invalid_argument("SetUnion::measure: dimension mismatch");
  double total = 0.0;
  for (const Box& b : pieces_) {
    double m = 1.0;
    for (int j = 0; j < d_; ++j) m *= interval_measure(b.lo[j], b.hi[j], cfg.multiplicity(j));
    total += m;
  }
  return total;
}

double SetUnion::intersection_measure(double a, double b, double k) const {
  if (d_ != 1) throw std::invalid_argument("intersection_measure: 1D sets only");
  double total = 0.0;
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), a,
                             [](const Box& p, double v) { return p.hi[0] < v; });
  for (; it != pieces_.end() && it->lo[0] < b; ++it) {
    const double lo = std::max(a, it->lo[0]);
    const double hi = std::min(b, it->hi[0]);
    if (hi > lo) total += interval_measure(lo, hi, k);
  }
  return total;
}

std::vector<double> SetUnion::endpoints() const {
  if (d_ != 1) throw std::invalid_argument("endpoints: 1D sets only");
  std::vector<double> e;
  e.reserve(2 * pieces_.size());
  for (const Box& b : pieces_) {
    e.push_back(b.lo[0]);
    e.push_back(b.hi[0]);
  }
  return e;
}

SetUnion SetUnion::complement_within(double lo, double hi) const {
  if (d_ != 1) throw std::invalid_argument("complement_within: 1D sets only");
  std::vector<std::pair<double, double>> out;
  double cursor = lo;
  for (const Box& b : pieces_) {
    if (b.hi[0] <= lo || b.lo[0] >= hi) continue;
    if (b.lo[0] > cursor) out.emplace_back(cursor, b.lo[0]);
    cursor = std::max(cursor, b.hi[0]);
  }
  if (cursor < hi) out.emplace_back(cursor, hi);
  return intervals(std::move(out));
}

SetUnion SetUnion::reflected() const {
  std::vector<Box> out;
  for (const Box& b : pieces_) {
    Box r{b.lo, b.hi};
    for (int j = 0; j < d_; ++j) {
      r.lo[j] = -b.hi[j];
      r.hi[j] = -b.lo[j];
    }
    out.push_back(std::move(r));
  }
  return SetUnion(d_, std::move(out));
}

nlohmann::ordered_json SetUnion::to_json() const {
  auto arr = nlohmann::ordered_json::array();
  for (const Box& b : pieces_) {
    if (d_ == 1) {
      arr.push_back({b.lo[0], b.hi[0]});
    } else {
      arr.push_back({b.lo, b.hi});
    }
  }
  return arr;
}

SetUnion SetUnion::from_json(const nlohmann::json& j, int d) {
  if (!j.is_array()) throw std::invalid_argument("SetUnion JSON: expected a list of pieces");
  std::vector<Box> boxes;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw std::invalid_argument("SetUnion JSON: piece must be [a, b]");
    if (d == 1) {
      boxes.push_back({{p[0].get<double>()}, {p[1].get<double>()}});
    } else {
      boxes.push_back({p[0].get<std::vector<double>>(), p[1].get<std::vector<double>>()});
    }
  }
  return SetUnion(d, std::move(boxes));
}

SetUnion dilate(const SetUnion& s, double lam) {
  if (!(lam > 0.0)) throw std::invalid_argument("dilate: lambda must be > 0");
  std::vector<Box> out;
  for (const Box& b : s.pieces()) {
    Box r = b;
    for (auto& v : r.lo) v *= lam;
    for (auto& v : r.hi) v *= lam;
    out.push_back(std::move(r));
  }
  return SetUnion(s.dim(), std::move(out));
}

double rho(double x) { return std::min(1.0, 1.0 / std::abs(x)); }

double rho(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::min(1.0, 1.0 / std::sqrt(r2));
}

double density_ratio(const SetUnion& s, double x, double k) {
  const double r = rho(x);
  const double ball = interval_measure(x - r, x + r, k);
  return s.intersection_measure(x - r, x + r, k) / ball;
}

nlohmann::ordered_json ThinnessReport::to_json() const {
  nlohmann::ordered_json j;
  j["epsilon_hat"] = epsilon_hat;
  j["argmax"] = argmax;
  j["sample_grid"] = {{"r_check", r_check},
                      {"samples_per_rho", samples_per_rho},
                      {"count", sample_count}};
  return j;
}

namespace {

// All x with x + sign * rho(x) = e.
void kink_points(double e, double sign, std::vector<double>& out) {
  // |x| <= 1: rho = 1.
  const double inner = e - sign;
  if (std::abs(inner) <= 1.0) out.push_back(inner);
  // x > 1: x + sign/x = e  ->  x^2 - e x + sign = 0.
  // x < -1: x - sign/x = e ->  x^2 - e x - sign = 0.
  for (double c : {sign, -sign}) {
    const double disc = e * e - 4.0 * c;
    if (disc < 0.0) continue;
    for (double root : {(e + std::sqrt(disc)) / 2.0, (e - std::sqrt(disc)) / 2.0}) {
      const bool positive_branch = c == sign;
      if (positive_branch && root > 1.0) out.push_back(root);
      if (!positive_branch && root < -1.0) out.push_back(root);
    }
  }
}

}  // namespace

std::vector<double> thinness_samples(const SetUnion& s, double r_check, int samples_per_rho) {
  if (!(r_check > 0.0) || samples_per_rho < 1) {
    throw std::invalid_argument("thinness_samples: need r_check > 0 and samples_per_rho >= 1");
  }
  std::vector<double> xs;
  for (double x = -r_check; x < r_check; x += rho(x) / samples_per_rho) xs.push_back(x);
  xs.push_back(r_check);
  std::vector<double> special;
  for (double e : s.endpoints()) {
    special.push_back(e);
    kink_points(e, 1.0, special);
    kink_points(e, -1.0, special);
  }
  for (double p : special) {
    if (std::abs(p) > r_check) continue;
    const double h = 1e-9 * std::max(1.0, std::abs(p));
    xs.push_back(p);
    xs.push_back(p - h);
    xs.push_back(p + h);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

ThinnessReport thinness_check(const SetUnion& s, const RootSystemConfig& cfg, double r_check,
                              int samples_per_rho) {
  if (cfg.dim() != 1 || s.dim() != 1) {
    throw std::invalid_argument("thinness_check: only d = 1 is supported");
  }
  const double k = cfg.multiplicity(0);
  ThinnessReport rep;
  rep.r_check = r_check;
  rep.samples_per_rho = samples_per_rho;
  const auto xs = thinness_samples(s, r_check, samples_per_rho);
  rep.sample_count = xs.size();
  for (double x : xs) {
    const double r = density_ratio(s, x, k);
    if (r > rep.epsilon_hat) {
      rep.epsilon_hat = r;
      rep.argmax = x;
    }
  }
  rep.epsilon_hat = std::min(rep.epsilon_hat, 1.0);
  return rep;
}

CombResult generate_comb(double eps_target, int extent, const RootSystemConfig& cfg,
                         std::uint64_t seed, const CombOptions& options) {
  if (!(eps_target > 0.0 && eps_target < 1.0)) {
    throw std::invalid_argument("generate_comb: eps_target must lie in (0, 1)");
  }
  if (extent < 1) throw std::invalid_argument("generate_comb: extent must be >= 1");
  if (cfg.dim() != 1) throw std::invalid_argument("generate_comb: only d = 1 is supported");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> centers;
  for (int m = 1; m <= extent; ++m) centers.push_back(m + options.jitter * rho(m) * unit(rng));

  double scale = options.width_scale;
  ThinnessReport last;
  for (int it = 0; it <= options.max_iterations; ++it) {
    std::vector<std::pair<double, double>> pieces;
    for (int m = 1; m <= extent; ++m) {
      const double c = centers[m - 1];
      const double hw = scale * eps_target * rho(m);
      pieces.emplace_back(c - hw, c + hw);
      pieces.emplace_back(-c - hw, -c + hw);
    }
    SetUnion set = SetUnion::intervals(std::move(pieces));
    last = thinness_check(set, cfg, 2.0 * extent, options.samples_per_rho);
    if (last.epsilon_hat <= eps_target) return {std::move(set), last, it};
    scale *= options.shrink;
  }
  throw ConvergenceError("generate_comb: no certified comb after " +
                         std::to_string(options.max_iterations) + " shrink iterations (last epsilon_hat " +
                         std::to_string(last.epsilon_hat) + " at x = " + std::to_string(last.argmax) + ")");
}

Eigen::VectorXd node_mask(const QuadratureGrid& grid, const SetUnion& s) {
  if (grid.dim() != s.dim()) throw std::invalid_argument("node_mask: dimension mismatch");
  Eigen::VectorXd m(grid.size());
  for (int i = 0; i < grid.size(); ++i) m[i] = s.contains(grid.node(i)) ? 1.0 : 0.0;
  return m;
}

}  // namespace dunkl
