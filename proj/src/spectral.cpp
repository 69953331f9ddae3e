#include "geopot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace geopot {
namespace {

constexpr double kPi = std::numbers::pi;

// Node layout of the log psi_dagger table, in t = log xi.
constexpr double kTableLo = -80.0;
constexpr double kTableHi = 240.0;
constexpr double kTableStep = 0.05;

// Upper limit of the angular variable r in theta = (pi/4) e^{-r}; the
// integrand carries a factor theta, so beyond this the remainder is < 1e-20.
constexpr double kAngleCut = 60.0;

// log(log(1 + e^a)).
double log_softplus(double a) {
  if (a < -35.0) return a;
  if (a > 35.0) return std::log(a + std::exp(-a));
  return std::log(std::log1p(std::exp(a)));
}

// d log(log(1 + e^a)) / da.
double log_softplus_slope(double a) {
  if (a < -35.0) return 1.0;
  if (a > 35.0) return 1.0 / a;
  return 1.0 / ((1.0 + std::exp(-a)) * std::log1p(std::exp(a)));
}

// The exponent integral folded onto theta in (0, pi/4]:
//   (1/pi) int_0^{pi/4} [f(t + log tan theta) + f(t - log tan theta)] dtheta,
// with theta = (pi/4) e^{-r}, which turns the log singularity at theta = 0
// into exponential decay in r.
template <class F>
QuadResult folded_angle_integral(F&& f, double t, double abs_tol) {
  auto integrand = [&](double r) {
    const double theta = 0.25 * kPi * std::exp(-r);
    const double l = std::log(std::tan(theta));
    return theta * (f(t + l) + f(t - l));
  };
  QuadOptions opt;
  opt.abs_tol = abs_tol;
  opt.rel_tol = 0.0;
  QuadResult res = integrate(integrand, 0.0, kAngleCut, opt);
  res.value /= kPi;
  res.abs_error /= kPi;
  return res;
}

}  // namespace

void ProcessSpec::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("alpha must lie in (0, 2]");
  if (!(quad_tol > 0.0 && quad_tol <= 1e-2)) throw std::invalid_argument("quad_tol must lie in (0, 1e-2]");
  if (!(xi_cutoff_factor > 0.0)) throw std::invalid_argument("xi_cutoff_factor must be positive");
}

double drift_coefficient(const ProcessSpec& spec) { return spec.alpha == 2.0 ? 1.0 : 0.0; }

double psi(const ProcessSpec& spec, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("psi: lambda must be nonnegative");
  const double p = std::pow(lambda, 0.5 * spec.alpha);
  return spec.is_geometric() ? std::log1p(p) : p;
}

double big_psi(const ProcessSpec& spec, double xi) {
  const double p = std::pow(std::abs(xi), spec.alpha);
  return spec.is_geometric() ? std::log1p(p) : p;
}

double log_big_psi_at_log(const ProcessSpec& spec, double t) {
  const double a = spec.alpha * t;
  return spec.is_geometric() ? log_softplus(a) : a;
}

double log_big_psi_slope_at_log(const ProcessSpec& spec, double t) {
  if (!spec.is_geometric()) return spec.alpha;
  return spec.alpha * log_softplus_slope(spec.alpha * t);
}

double im_recip(const ProcessSpec& spec, double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("im_recip: xi must be positive");
  if (spec.is_geometric() && spec.alpha == 2.0) {
    if (xi <= 1.0) return 0.0;
    const double l = std::log((xi - 1.0) * (xi + 1.0));
    return kPi / (kPi * kPi + l * l);
  }
  return im_recip_at_log(spec, std::log(xi));
}

double im_recip_at_log(const ProcessSpec& spec, double t) {
  const double alpha = spec.alpha;
  if (!spec.is_geometric()) {
    if (alpha == 2.0) return 0.0;
    return std::exp(-alpha * t) * std::sin(0.5 * alpha * kPi);
  }
  if (alpha == 2.0) {
    if (t <= 0.0) return 0.0;
    const double l = t > 20.0 ? 2.0 * t + std::log1p(-std::exp(-2.0 * t)) : std::log(std::expm1(2.0 * t));
    return kPi / (kPi * kPi + l * l);
  }
  const double c = std::cos(0.5 * alpha * kPi);
  const double s = std::sin(0.5 * alpha * kPi);
  const double a = alpha * t;
  if (a < -30.0) {
    // z = 1 + w e^{i alpha pi/2} with w < 1e-13: Im(1/log z) = s/w to relative O(w).
    return s * std::exp(-a);
  }
  double log_mod, arg;
  if (a <= 0.0) {
    const double w = std::exp(a);
    log_mod = 0.5 * std::log1p(w * (2.0 * c + w));
    arg = std::atan2(w * s, 1.0 + w * c);
  } else {
    const double v = std::exp(-a);
    log_mod = a + 0.5 * std::log1p(v * (2.0 * c + v));
    arg = std::atan2(s, v + c);
  }
  return arg / (arg * arg + log_mod * log_mod);
}

QuadResult log_psi_dagger_direct(const ProcessSpec& spec, double t) {
  if (!spec.is_geometric() && spec.exact_oracle) return {0.5 * spec.alpha * t, 0.0, 0};
  auto f = [&spec](double u) { return log_big_psi_at_log(spec, u); };
  return folded_angle_integral(f, t, 0.1 * spec.quad_tol);
}

double log_psi_dagger_slope_direct(const ProcessSpec& spec, double t) {
  if (!spec.is_geometric()) return 0.5 * spec.alpha;
  auto g = [&spec](double u) { return log_big_psi_slope_at_log(spec, u); };
  return folded_angle_integral(g, t, 0.1 * spec.quad_tol).value;
}

PsiDagger::PsiDagger(const ProcessSpec& spec) : spec_(spec) {
  spec_.validate();
  if (!spec_.is_geometric() && spec_.exact_oracle) return;
  const auto n = static_cast<std::size_t>(std::lround((kTableHi - kTableLo) / kTableStep)) + 1;
  std::vector<double> values(n), slopes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = kTableLo + kTableStep * static_cast<double>(i);
    values[i] = log_psi_dagger_direct(spec_, t).value;
    slopes[i] = log_psi_dagger_slope_direct(spec_, t);
  }
  table_ = HermiteTable(kTableLo, kTableStep, std::move(values), std::move(slopes));
  // Probe a subsample of midpoints; the difference in log is a relative error.
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < n; i += 7) {
    const double t = kTableLo + kTableStep * (static_cast<double>(i) + 0.5);
    worst = std::max(worst, std::abs(table_(t) - log_psi_dagger_direct(spec_, t).value));
  }
  table_rel_error_ = 2.0 * worst + 0.1 * spec_.quad_tol;
}

double PsiDagger::log_at(double t) const {
  if (!spec_.is_geometric() && spec_.exact_oracle) return 0.5 * spec_.alpha * t;
  if (table_.contains(t)) return table_(t);
  return log_psi_dagger_direct(spec_, t).value;
}

double PsiDagger::operator()(double xi) const {
  if (!(xi > 0.0)) throw std::invalid_argument("psi_dagger: xi must be positive");
  return std::exp(log_at(std::log(xi)));
}

Estimate PsiDagger::evaluate(double xi) const {
  if (!(xi > 0.0)) throw std::invalid_argument("psi_dagger: xi must be positive");
  const double t = std::log(xi);
  if (!spec_.is_geometric() && spec_.exact_oracle) return {std::exp(0.5 * spec_.alpha * t), 0.0};
  if (table_.contains(t)) {
    const double v = std::exp(table_(t));
    return {v, v * table_rel_error_};
  }
  const QuadResult r = log_psi_dagger_direct(spec_, t);
  const double v = std::exp(r.value);
  return {v, v * std::expm1(r.abs_error)};
}

double PsiDagger::mu_at_log(double t) const {
  const double im = im_recip_at_log(spec_, t);
  if (im == 0.0) return 0.0;
  return std::exp(log_at(t)) * im;
}

double PsiDagger::mu(double xi) const {
  if (!(xi > 0.0)) throw std::invalid_argument("mu: xi must be positive");
  const double im = im_recip(spec_, xi);
  if (im == 0.0) return 0.0;
  return (*this)(xi)*im;
}

Estimate psi_dagger(const ProcessSpec& spec, double xi) {
  spec.validate();
  if (!(xi > 0.0)) throw std::invalid_argument("psi_dagger: xi must be positive");
  const QuadResult r = log_psi_dagger_direct(spec, std::log(xi));
  const double v = std::exp(r.value);
  return {v, v * std::expm1(r.abs_error)};
}

double mu_integrand(const ProcessSpec& spec, double xi) {
  const double im = im_recip(spec, xi);
  if (im == 0.0) return 0.0;
  return psi_dagger(spec, xi).value * im;
}

}  // namespace geopot
