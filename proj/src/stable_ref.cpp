#include "geopot/stable_ref.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "geopot/quadrature.hpp"
#include "geopot/renewal.hpp"

namespace geopot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("alpha must lie in (0, 2]");
}

}  // namespace

double V_alpha(double alpha, double x) {
  check_alpha(alpha);
  if (!(x >= 0.0)) throw std::invalid_argument("V_alpha: x must be nonnegative");
  return std::pow(x, 0.5 * alpha);
}

RenewalFn stable_renewal(double alpha) {
  check_alpha(alpha);
  return [alpha](double x) { return std::pow(x, 0.5 * alpha); };
}

RenewalFn geometric_renewal(const RenewalEvaluator& v) {
  return [&v](double x) { return v.V(x); };
}

double green_brownian_halfline(double x, double y) {
  if (!(x >= 0.0 && y >= 0.0)) throw std::invalid_argument("green_brownian_halfline: points must be >= 0");
  return std::min(x, y);
}

double green_brownian_interval(double R, double x, double y) {
  if (!(R > 0.0 && x >= 0.0 && x <= R && y >= 0.0 && y <= R))
    throw std::invalid_argument("green_brownian_interval: points must lie in [0, R]");
  return std::min(x * (R - y), y * (R - x)) / R;
}

double green_stable_halfline(double alpha, double x, double y) {
  check_alpha(alpha);
  if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("green_stable_halfline: x, y must be positive");
  const double m = std::min(x, y);
  const double d = std::abs(x - y);
  if (alpha == 2.0) return m;
  const double h = 0.5 * alpha;
  if (d == 0.0) {
    if (alpha <= 1.0) return kInf;
    return h * h * std::pow(m, alpha - 1.0) / (alpha - 1.0);
  }
  // w = u^{alpha/2} turns u^{alpha/2-1} du into (2/alpha) dw; the remaining
  // factor is bounded, with a kink near w = d^{alpha/2}.
  auto f = [&](double w) { return std::pow(d + std::pow(w, 1.0 / h), h - 1.0); };
  QuadOptions opt;
  opt.rel_tol = 1e-12;
  const double top = std::pow(m, h);
  const double knee = std::pow(d, h);
  QuadResult r = knee < top ? integrate(f, 0.0, knee, opt) + integrate(f, knee, top, opt)
                            : integrate(f, 0.0, top, opt);
  return h * r.value;
}

double delta_R(double R, double x) { return std::min(x, R - x); }

double ghat_halfline(double alpha, const RenewalFn& V, double x, double y) {
  check_alpha(alpha);
  if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("ghat_halfline: x, y must be positive");
  const double d = std::abs(x - y);
  if (alpha == 2.0) return V(std::min(x, y));
  const double vv = V(x) * V(y);
  if (alpha > 1.0) {
    const double a = std::pow(x * y, 0.5 * (alpha - 1.0));
    return d == 0.0 ? a : std::min(a, vv / d);
  }
  if (d == 0.0) return kInf;
  const double vd = V(d);
  if (alpha == 1.0) return std::log1p(vv / (vd * vd));
  return std::min(1.0, vv / (vd * vd)) * std::pow(d, alpha - 1.0);
}

double ghat_interval(double alpha, const RenewalFn& V, double R, double x, double y) {
  check_alpha(alpha);
  if (!(R > 0.0 && x > 0.0 && x < R && y > 0.0 && y < R))
    throw std::invalid_argument("ghat_interval: points must lie in (0, R)");
  const double d = std::abs(x - y);
  if (alpha == 2.0) return std::min(V(x) * V(R - y), V(R - x) * V(y)) / R;
  const double dx = delta_R(R, x), dy = delta_R(R, y);
  const double vv = V(dx) * V(dy);
  if (alpha > 1.0) {
    const double a = vv / std::sqrt(dx * dy);
    return d == 0.0 ? a : std::min(a, vv / d);
  }
  if (d == 0.0) return kInf;
  if (alpha == 1.0) return std::log1p(vv / d);
  return std::min(std::pow(d, alpha - 1.0), vv / d);
}

double poisson_stable_constant(double alpha) {
  check_alpha(alpha);
  if (alpha == 2.0) throw std::invalid_argument("poisson_stable_constant: alpha = 2 has no jump exit");
  static std::mutex mutex;
  static std::map<double, double> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(alpha); it != cache.end()) return it->second;
  // With |z| = x e^s the unnormalized mass is int e^{(1-alpha/2)s}/(1+e^s) ds,
  // independent of x.
  const double h = 0.5 * alpha;
  auto f = [h](double s) { return std::exp((1.0 - h) * s - std::log1p(std::exp(s))); };
  QuadOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-300;
  const double lo = std::log(1e-16) / (1.0 - h);
  const double hi = -std::log(1e-16) / h;
  const double mass = integrate(f, lo, 0.0, opt).value + integrate(f, 0.0, hi, opt).value;
  const double c = 1.0 / mass;
  cache.emplace(alpha, c);
  return c;
}

double poisson_stable_halfline(double alpha, double x, double z) {
  check_alpha(alpha);
  if (alpha == 2.0) throw std::invalid_argument("poisson_stable_halfline: alpha = 2 has no jump exit");
  if (!(z < 0.0 && x > 0.0)) throw std::invalid_argument("poisson_stable_halfline: requires z < 0 < x");
  return poisson_stable_constant(alpha) * std::pow(x / -z, 0.5 * alpha) / (x - z);
}

}  // namespace geopot
