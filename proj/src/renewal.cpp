#include "geopot/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace geopot {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Table layout in s = log x.
constexpr double kTableLo = -100.0;
constexpr double kTableHi = 36.0;
constexpr double kTableStep = 0.05;

enum Kernel { kV = 0, kFirst = 1, kSecond = 2 };

// 1 - e^{-w}, w e^{-w}, w^2 e^{-w} at w = e^q.
double kernel_at(int kernel, double q) {
  const double w = std::exp(q);
  switch (kernel) {
    case kV:
      return -std::expm1(-w);
    case kFirst:
      return std::exp(q - w);
    default:
      return std::exp(2.0 * q - w);
  }
}

// int_0^W w^{-a/2-1} K(w) dw * W^{a/2}, as a convergent power series in W <= e^{-10}.
double lower_tail_series(int kernel, double alpha, double W) {
  const double h = 0.5 * alpha;
  double sum = 0.0;
  double term = 1.0;  // W^j / j!
  for (int j = 0; j < 40; ++j) {
    if (j > 0) term *= W / j;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    double piece;
    switch (kernel) {
      case kV:  // k = j + 1: (-1)^j W^{j+1} / ((j+1)! (j+1-h))
        piece = sign * term * W / (static_cast<double>(j + 1) * (j + 1 - h));
        break;
      case kFirst:
        piece = sign * term * W / (j + 1 - h);
        break;
      default:
        piece = sign * term * W * W / (j + 2 - h);
        break;
    }
    sum += piece;
    if (std::abs(piece) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

RenewalEvaluator::RenewalEvaluator(const ProcessSpec& spec)
    : spec_(spec),
      b_(drift_coefficient(spec)),
      norm_(spec.is_geometric() ? 1.0 : std::tgamma(1.0 + 0.5 * spec.alpha)),
      psi_dagger_(spec) {
  const auto n = static_cast<std::size_t>(std::lround((kTableHi - kTableLo) / kTableStep)) + 1;
  std::vector<double> lv(n), lv_slope(n), lp(n), lp_slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = kTableLo + kTableStep * static_cast<double>(i);
    const double x = std::exp(s);
    const double v = norm_ * (b_ * x + kernel_integral(kV, s).value);
    const double xvp = norm_ * (b_ * x + kernel_integral(kFirst, s).value);
    const double x2vpp = -norm_ * kernel_integral(kSecond, s).value;
    lv[i] = std::log(v);
    lv_slope[i] = xvp / v;
    lp[i] = std::log(xvp);
    lp_slope[i] = 1.0 + x2vpp / xvp;
  }
  log_v_ = HermiteTable(kTableLo, kTableStep, std::move(lv), std::move(lv_slope));
  log_xvp_ = HermiteTable(kTableLo, kTableStep, std::move(lp), std::move(lp_slope));

  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < n; i += 13) {
    const double s = kTableLo + kTableStep * (static_cast<double>(i) + 0.5);
    const double x = std::exp(s);
    const double v = norm_ * (b_ * x + kernel_integral(kV, s).value);
    const double xvp = norm_ * (b_ * x + kernel_integral(kFirst, s).value);
    worst = std::max(worst, std::abs(std::exp(log_v_(s)) / v - 1.0));
    worst = std::max(worst, std::abs(std::exp(log_xvp_(s)) / xvp - 1.0));
  }
  table_rel_error_ = 2.0 * worst + spec_.quad_tol;
}

std::shared_ptr<const RenewalEvaluator> RenewalEvaluator::shared(const ProcessSpec& spec) {
  using Key = std::tuple<double, int, double, double, bool>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const RenewalEvaluator>> cache;
  const Key key{spec.alpha, static_cast<int>(spec.mode), spec.quad_tol, spec.xi_cutoff_factor,
                spec.exact_oracle};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto made = std::make_shared<const RenewalEvaluator>(spec);
  cache.emplace(key, made);
  return made;
}

QuadResult RenewalEvaluator::kernel_integral(int kernel, double s) const {
  const double alpha = spec_.alpha;
  if (!spec_.is_geometric() && alpha == 2.0) return {};

  QuadOptions opt;
  opt.rel_tol = 0.1 * spec_.quad_tol;
  auto f = [&](double t) {
    const double m = psi_dagger_.mu_at_log(t);
    return m == 0.0 ? 0.0 : m * kernel_at(kernel, t + s);
  };

  QuadResult total;
  double t_min;
  if (alpha == 2.0) {
    t_min = 0.0;  // the boundary density vanishes on xi <= 1
  } else {
    t_min = std::min(-40.0, -s - 10.0);
    // Below t_min, mu(e^t) = mu(e^{t_min}) e^{-alpha (t - t_min)/2} to relative
    // O(e^{alpha t_min}); the kernel is integrated termwise.
    const double tail = psi_dagger_.mu_at_log(t_min) * lower_tail_series(kernel, alpha, std::exp(t_min + s));
    total.value += tail;
    total.abs_error += std::abs(tail) * std::exp(std::min(alpha, 1.0) * t_min) * 10.0;
  }

  double t_end;
  if (kernel == kV) {
    t_end = std::max({-s + 4.0, t_min + 1.0, 1.0});
  } else {
    t_end = -s + std::log(spec_.xi_cutoff_factor);
    if (t_end <= t_min) {
      total.value /= kPi;
      total.abs_error /= kPi;
      return total;
    }
  }

  std::vector<double> cuts{t_min, t_end};
  for (double c : {-s, 0.0})
    if (c > t_min && c < t_end) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total = total + integrate(f, cuts[i], cuts[i + 1], opt);

  if (kernel == kV) {
    // mu decays like t^{-3/2} (geometric) or exponentially (pure stable).
    total = total + integrate_algebraic_tail(f, t_end, std::max(1.0, t_end), opt);
  }
  total.value /= kPi;
  total.abs_error /= kPi;
  return total;
}

Estimate RenewalEvaluator::evaluate_V(double x) const {
  if (!(x >= 0.0)) throw std::invalid_argument("V: x must be nonnegative");
  if (x == 0.0) return {0.0, 0.0};
  const QuadResult r = kernel_integral(kV, std::log(x));
  return {norm_ * (b_ * x + r.value), norm_ * r.abs_error};
}

Estimate RenewalEvaluator::evaluate_Vprime(double x) const {
  if (!(x >= 0.0)) throw std::invalid_argument("V': x must be nonnegative");
  if (x == 0.0) return {(!spec_.is_geometric() && spec_.alpha == 2.0) ? 1.0 : kInf, 0.0};
  const QuadResult r = kernel_integral(kFirst, std::log(x));
  return {norm_ * (b_ + r.value / x), norm_ * r.abs_error / x};
}

Estimate RenewalEvaluator::evaluate_x2_Vsecond(double x) const {
  if (!(x > 0.0)) throw std::invalid_argument("V'': x must be positive");
  const QuadResult r = kernel_integral(kSecond, std::log(x));
  return {-norm_ * r.value, norm_ * r.abs_error};
}

double RenewalEvaluator::V(double x) const {
  if (!(x >= 0.0)) throw std::invalid_argument("V: x must be nonnegative");
  if (x == 0.0) return 0.0;
  const double s = std::log(x);
  if (log_v_.contains(s)) return std::exp(log_v_(s));
  return evaluate_V(x).value;
}

double RenewalEvaluator::xvp_from_log(double s) const {
  if (log_xvp_.contains(s)) return std::exp(log_xvp_(s));
  const double x = std::exp(s);
  return norm_ * (b_ * x + kernel_integral(kFirst, s).value);
}

double RenewalEvaluator::x_Vprime(double x) const {
  if (!(x >= 0.0)) throw std::invalid_argument("V': x must be nonnegative");
  if (x == 0.0) return 0.0;
  return xvp_from_log(std::log(x));
}

double RenewalEvaluator::Vprime(double x) const {
  if (!(x >= 0.0)) throw std::invalid_argument("V': x must be nonnegative");
  if (x == 0.0) return evaluate_Vprime(0.0).value;
  return xvp_from_log(std::log(x)) / x;
}

Estimate RenewalEvaluator::V_with_error(double x) const {
  if (x > 0.0 && log_v_.contains(std::log(x))) {
    const double v = V(x);
    return {v, v * table_rel_error_};
  }
  return evaluate_V(x);
}

Estimate RenewalEvaluator::Vprime_with_error(double x) const {
  if (x > 0.0 && log_xvp_.contains(std::log(x))) {
    const double v = Vprime(x);
    return {v, v * table_rel_error_};
  }
  return evaluate_Vprime(x);
}

double V_comparator(double alpha, double x) { return 1.0 / std::sqrt(std::log1p(std::pow(x, -alpha))); }

double Vprime_comparator(double alpha, double x) {
  return 1.0 / (x * std::pow(std::log1p(std::pow(x, -alpha / 3.0)), 1.5));
}

IntegralIdentities int_identities(const RenewalEvaluator& v, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("int_identities: x must be positive");
  QuadOptions opt;
  opt.rel_tol = 1e-9;
  const double lx = std::log(x);
  IntegralIdentities out;

  {
    auto f = [&](double s) { return v.V(std::exp(s)) * std::exp(s); };
    const QuadResult r = integrate(f, lx - 50.0, lx, opt);
    out.int1 = {r.value, x * v.V(x), r.abs_error + x * v.V(x) * 1e-20, true, ""};
  }
  if (x >= 2.0) {
    auto f = [&](double s) { return v.V(std::exp(s)); };
    const QuadResult r = integrate(f, 0.0, lx, opt);
    out.int2 = {r.value, v.V(x), r.abs_error, true, ""};
  } else {
    out.int2.skip_reason = "requires x >= 2";
  }
  if (x <= 0.5) {
    auto f = [&](double s) { return v.V(std::exp(s)); };
    const QuadResult r3 = integrate(f, lx, 0.0, opt);
    out.int3 = {r3.value, 1.0 / v.V(x), r3.abs_error, true, ""};
    for (int beta : {3, 6}) {
      auto g = [&](double s) { return std::pow(v.V(std::exp(s)), beta) * std::exp(-s); };
      const QuadResult r4 = integrate(g, lx, 0.0, opt);
      IdentityPair p{r4.value, std::pow(v.V(x), beta) / x, r4.abs_error, true, ""};
      (beta == 3 ? out.int4_beta3 : out.int4_beta6) = p;
    }
  } else {
    out.int3.skip_reason = out.int4_beta3.skip_reason = out.int4_beta6.skip_reason = "requires x <= 1/2";
  }
  return out;
}

}  // namespace geopot
