#include "dunkl/measure.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dunkl {

RootSystemConfig::RootSystemConfig(std::vector<double> multiplicities)
    : multiplicities_(std::move(multiplicities)) {
  if (multiplicities_.empty()) {
    throw std::invalid_argument("RootSystemConfig: dimension must be positive");
  }
  for (double k : multiplicities_) {
    if (!(k >= 0.0) || !std::isfinite(k)) {
      throw std::invalid_argument("RootSystemConfig: multiplicities must be finite and >= 0");
    }
    gamma_ += k;
  }
}

nlohmann::ordered_json RootSystemConfig::to_json() const {
  nlohmann::ordered_json j;
  j["d"] = dim();
  j["multiplicities"] = multiplicities_;
  return j;
}

RootSystemConfig RootSystemConfig::from_json(const nlohmann::json& j) {
  auto ks = j.at("multiplicities").get<std::vector<double>>();
  if (j.contains("d") && j.at("d").get<int>() != static_cast<int>(ks.size())) {
    throw std::invalid_argument("root system: d does not match the number of multiplicities");
  }
  return RootSystemConfig(std::move(ks));
}

double axis_density(double t, double k) {
  if (k == 0.0) return 1.0;
  return std::pow(2.0, k) * std::pow(std::abs(t), 2.0 * k);
}

double weight_density(std::span<const double> x, const RootSystemConfig& cfg) {
  if (static_cast<int>(x.size()) != cfg.dim()) {
    throw std::invalid_argument("weight_density: point dimension mismatch");
  }
  double h2 = 1.0;
  for (int j = 0; j < cfg.dim(); ++j) h2 *= axis_density(x[j], cfg.multiplicity(j));
  return h2;
}

double normalization_constant(const RootSystemConfig& cfg) {
  double inv = 1.0;
  for (double k : cfg.multiplicities()) {
    inv *= std::pow(2.0, 2.0 * k + 0.5) * std::tgamma(k + 0.5);
  }
  return 1.0 / inv;
}

double normalization_constant_quadrature(const RootSystemConfig& cfg) {
  using boost::math::quadrature::gauss_kronrod;
  double inv = 1.0;
  for (double k : cfg.multiplicities()) {
    auto f = [k](double t) { return axis_density(t, k) * std::exp(-0.5 * t * t); };
    // Split so the panel edge sits on the only non-smooth point t = 0.
    double half = gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14) +
                  gauss_kronrod<double, 61>::integrate(f, 1.0, 60.0, 15, 1e-14);
    inv *= 2.0 * half;
  }
  return 1.0 / inv;
}

namespace {

// Antiderivative of |t|^{2k}: sign(t) |t|^{2k+1} / (2k+1).
double power_antiderivative(double t, double k) {
  const double p = 2.0 * k + 1.0;
  const double v = std::pow(std::abs(t), p) / p;
  return t < 0.0 ? -v : v;
}

double ball_measure_recursive(std::span<const double> c, double r,
                              std::span<const double> ks) {
  if (ks.size() == 1) return interval_measure(c[0] - r, c[0] + r, ks[0]);
  using boost::math::quadrature::gauss_kronrod;
  const double k = ks[0];
  auto inner = [&](double t) {
    const double dt = t - c[0];
    const double h2 = r * r - dt * dt;
    if (h2 <= 0.0) return 0.0;
    return axis_density(t, k) *
           ball_measure_recursive(c.subspan(1), std::sqrt(h2), ks.subspan(1));
  };
  const double a = c[0] - r;
  const double b = c[0] + r;
  if (k > 0.0 && a < 0.0 && b > 0.0) {
    return gauss_kronrod<double, 31>::integrate(inner, a, 0.0, 12, 1e-11) +
           gauss_kronrod<double, 31>::integrate(inner, 0.0, b, 12, 1e-11);
  }
  return gauss_kronrod<double, 31>::integrate(inner, a, b, 12, 1e-11);
}

}  // namespace

double interval_measure(double a, double b, double k) {
  if (b <= a) return 0.0;
  if (k == 0.0) return b - a;
  return std::pow(2.0, k) * (power_antiderivative(b, k) - power_antiderivative(a, k));
}

double ball_measure(std::span<const double> x, double r, const RootSystemConfig& cfg) {
  if (!(r > 0.0)) throw std::invalid_argument("ball_measure: radius must be positive");
  if (static_cast<int>(x.size()) != cfg.dim()) {
    throw std::invalid_argument("ball_measure: point dimension mismatch");
  }
  const auto& ks = cfg.multiplicities();
  return ball_measure_recursive(x, r, std::span<const double>(ks.data(), ks.size()));
}

BallComparability ball_measure_bound(std::span<const double> x, double r,
                                     const RootSystemConfig& cfg) {
  BallComparability out;
  double v = std::pow(r, cfg.dim());
  for (int j = 0; j < cfg.dim(); ++j) {
    const double k = cfg.multiplicity(j);
    v *= std::pow(std::sqrt(2.0) * std::abs(x[j]) + r, 2.0 * k);
  }
  out.comparability = v;
  out.measure = ball_measure(x, r, cfg);
  out.ratio = out.measure / v;
  return out;
}

}  // namespace dunkl
