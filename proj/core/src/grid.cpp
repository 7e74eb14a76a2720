#include "dunkl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dunkl {

namespace {

GaussLegendreRule compute_gauss_legendre(int order) {
  GaussLegendreRule rule;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    long double t = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (order + 0.5L));
    long double dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L;
      long double p1 = t;
      for (int m = 2; m <= order; ++m) {
        const long double p2 = ((2.0L * m - 1.0L) * t * p1 - (m - 1.0L) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (t * p1 - p0) / (t * t - 1.0L);
      const long double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-19L) break;
    }
    long double p0 = 1.0L;
    long double p1 = t;
    for (int m = 2; m <= order; ++m) {
      const long double p2 = ((2.0L * m - 1.0L) * t * p1 - (m - 1.0L) * p0) / m;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (t * p1 - p0) / (t * t - 1.0L);
    const long double w = 2.0L / ((1.0L - t * t) * dp * dp);
    // Ascending order, exactly antisymmetric nodes.
    rule.nodes[order - 1 - i] = static_cast<double>(t);
    rule.nodes[i] = -static_cast<double>(t);
    rule.weights[i] = rule.weights[order - 1 - i] = static_cast<double>(w);
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

std::vector<Panel> axis_panels(double R, int n, double k, const GridOptions& opt) {
  const int per_half = n / (2 * opt.panel_order);
  const int levels = k > 0.0 ? std::min(opt.refine_levels, per_half - 1) : 0;
  const double h = R / (per_half - levels);

  std::vector<Panel> positive;
  if (levels > 0) {
    double left = 0.0;
    for (int l = levels; l >= 1; --l) {
      const double right = std::ldexp(h, -l);
      positive.push_back({left, right, opt.panel_order});
      left = right;
    }
    positive.push_back({left, h, opt.panel_order});
  } else {
    positive.push_back({0.0, h, opt.panel_order});
  }
  for (int p = 1; p < per_half - levels; ++p) {
    const double a = p * h;
    const double b = (p + 1 == per_half - levels) ? R : (p + 1) * h;
    positive.push_back({a, b, opt.panel_order});
  }

  std::vector<double> cuts;
  for (double b : opt.breakpoints) {
    if (std::abs(b) < R) cuts.push_back(std::abs(b));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Panel> split;
  for (const Panel& p : positive) {
    const double len = p.b - p.a;
    const double tol = 1e-12 * len;
    std::vector<double> edges{p.a};
    for (double c : cuts) {
      if (c > p.a + tol && c < p.b - tol) edges.push_back(c);
    }
    edges.push_back(p.b);
    if (edges.size() == 2) {
      split.push_back(p);
      continue;
    }
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      const double piece = edges[e + 1] - edges[e];
      const int order = std::max(
          opt.min_split_order, static_cast<int>(std::ceil(p.order * piece / len)));
      split.push_back({edges[e], edges[e + 1], order});
    }
  }

  std::vector<Panel> all;
  all.reserve(2 * split.size());
  for (auto it = split.rbegin(); it != split.rend(); ++it) all.push_back({-it->b, -it->a, it->order});
  for (const Panel& p : split) all.push_back(p);
  return all;
}

struct AxisRule {
  std::vector<double> x;
  std::vector<double> w;
};

AxisRule axis_rule(const std::vector<Panel>& panels) {
  AxisRule rule;
  for (const Panel& p : panels) {
    const auto& gl = gauss_legendre(p.order);
    const double mid = 0.5 * (p.a + p.b);
    const double half = 0.5 * (p.b - p.a);
    for (int q = 0; q < p.order; ++q) {
      rule.x.push_back(mid + half * gl.nodes[q]);
      rule.w.push_back(half * gl.weights[q]);
    }
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

QuadratureGrid::QuadratureGrid(double R, int n, RootSystemConfig cfg, GridOptions options,
                               std::vector<std::vector<Panel>> axes)
    : R_(R), n_(n), cfg_(std::move(cfg)), options_(std::move(options)), axes_(std::move(axes)) {
  assemble();
}

GridPtr QuadratureGrid::build(double R, int n, const RootSystemConfig& cfg,
                              const GridOptions& options) {
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw std::invalid_argument("build_grid: R must be positive");
  }
  if (n < 32 || n % 32 != 0) {
    throw std::invalid_argument("build_grid: n must be a positive multiple of 32 (got " +
                                std::to_string(n) + ")");
  }
  if (options.panel_order < 2 || options.refine_levels < 0 || options.min_split_order < 1) {
    throw std::invalid_argument("build_grid: invalid panel options");
  }
  if (n % (2 * options.panel_order) != 0) {
    throw std::invalid_argument("build_grid: n must be a multiple of twice the panel order");
  }
  if (!options.breakpoints.empty() && cfg.dim() != 1) {
    throw std::invalid_argument("build_grid: breakpoints are supported in 1D only");
  }
  GridOptions opt = options;
  std::sort(opt.breakpoints.begin(), opt.breakpoints.end());
  std::vector<std::vector<Panel>> axes;
  for (int j = 0; j < cfg.dim(); ++j) axes.push_back(axis_panels(R, n, cfg.multiplicity(j), opt));
  return GridPtr(new QuadratureGrid(R, n, cfg, std::move(opt), std::move(axes)));
}

void QuadratureGrid::assemble() {
  const int d = dim();
  std::vector<AxisRule> rules;
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) {
    rules.push_back(axis_rule(axes_[j]));
    total *= rules.back().x.size();
  }
  coords_.assign(total * d, 0.0);
  weights_.resize(static_cast<Eigen::Index>(total));
  lebesgue_.resize(static_cast<Eigen::Index>(total));
  mirror_.assign(total, 0);

  std::vector<std::size_t> idx(d, 0);
  for (std::size_t i = 0; i < total; ++i) {
    // Row-major tensor index: the last axis varies fastest.
    std::size_t rem = i;
    for (int j = d - 1; j >= 0; --j) {
      idx[j] = rem % rules[j].x.size();
      rem /= rules[j].x.size();
    }
    double geo = 1.0;
    double dens = 1.0;
    std::size_t mirror = 0;
    for (int j = 0; j < d; ++j) {
      const double xj = rules[j].x[idx[j]];
      coords_[i * d + j] = xj;
      geo *= rules[j].w[idx[j]];
      dens *= axis_density(xj, cfg_.multiplicity(j));
      mirror = mirror * rules[j].x.size() + (rules[j].x.size() - 1 - idx[j]);
    }
    lebesgue_[static_cast<Eigen::Index>(i)] = geo;
    weights_[static_cast<Eigen::Index>(i)] = geo * dens;
    mirror_[i] = static_cast<int>(mirror);
  }
  for (std::size_t i = 0; i < total; ++i) {
    for (int j = 0; j < d; ++j) {
      if (coords_[static_cast<std::size_t>(mirror_[i]) * d + j] != -coords_[i * d + j]) {
        throw std::logic_error("QuadratureGrid: node set is not symmetric");
      }
    }
  }
}

std::vector<double> QuadratureGrid::axis_nodes(int axis) const {
  return axis_rule(axes_.at(axis)).x;
}

double QuadratureGrid::max_panel_length() const {
  double m = 0.0;
  for (const auto& axis : axes_) {
    for (const Panel& p : axis) m = std::max(m, p.b - p.a);
  }
  return m;
}

bool QuadratureGrid::operator==(const QuadratureGrid& other) const {
  return R_ == other.R_ && n_ == other.n_ && cfg_ == other.cfg_ && axes_ == other.axes_;
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

nlohmann::ordered_json QuadratureGrid::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = kJsonVersion;
  j["d"] = dim();
  j["multiplicities"] = cfg_.multiplicities();
  j["R"] = R_;
  j["n"] = n_;
  j["panel_order"] = options_.panel_order;
  j["refine_levels"] = options_.refine_levels;
  j["min_split_order"] = options_.min_split_order;
  j["breakpoints"] = options_.breakpoints;
  auto axes = nlohmann::ordered_json::array();
  for (const auto& axis : axes_) {
    auto panels = nlohmann::ordered_json::array();
    for (const Panel& p : axis) panels.push_back({p.a, p.b, p.order});
    axes.push_back(std::move(panels));
  }
  j["panels"] = std::move(axes);
  return j;
}

GridPtr QuadratureGrid::from_json(const nlohmann::json& j) {
  const int version = j.at("version").get<int>();
  if (version != kJsonVersion) {
    throw std::invalid_argument("grid JSON: unsupported version " + std::to_string(version));
  }
  RootSystemConfig cfg(j.at("multiplicities").get<std::vector<double>>());
  if (j.at("d").get<int>() != cfg.dim()) throw std::invalid_argument("grid JSON: d mismatch");
  GridOptions opt;
  opt.panel_order = j.at("panel_order").get<int>();
  opt.refine_levels = j.at("refine_levels").get<int>();
  opt.min_split_order = j.at("min_split_order").get<int>();
  opt.breakpoints = j.at("breakpoints").get<std::vector<double>>();
  std::vector<std::vector<Panel>> axes;
  for (const auto& axis : j.at("panels")) {
    std::vector<Panel> panels;
    for (const auto& p : axis) {
      panels.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<int>()});
    }
    axes.push_back(std::move(panels));
  }
  if (static_cast<int>(axes.size()) != cfg.dim()) {
    throw std::invalid_argument("grid JSON: panel axes do not match d");
  }
  return GridPtr(new QuadratureGrid(j.at("R").get<double>(), j.at("n").get<int>(), cfg,
                                    std::move(opt), std::move(axes)));
}

}  // namespace dunkl
