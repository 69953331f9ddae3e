#include "geopot/levy.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace geopot {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Sum of (-1)^k b_k by the Cohen-Rodriguez Villegas-Zagier acceleration.
double cvz_alternating(const std::vector<double>& b) {
  const auto n = static_cast<double>(b.size());
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double bb = -1.0, c = -d, s = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double kk = static_cast<double>(k);
    c = bb - c;
    s += c * b[k];
    bb = (kk + n) * (kk - n) * bb / ((kk + 0.5) * (kk + 1.0));
  }
  return s / d;
}

// int_0^inf trig(v) g(v) dv with trig = cos (zeros at pi/2 + k pi) or sin
// (zeros at k pi). Pieces between zeros are summed directly; once the
// envelope is slow the remaining alternating tail goes through CVZ.
template <class G>
double oscillatory_integral(G&& g, bool cosine, double envelope_scale) {
  QuadOptions opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-300;
  auto piece = [&](double a, double b) {
    auto f = [&](double v) { return (cosine ? std::cos(v) : std::sin(v)) * g(v); };
    return integrate(f, a, b, opt).value;
  };
  const double first_zero = cosine ? 0.5 * kPi : kPi;
  double sum = piece(0.0, first_zero);
  constexpr int kDirect = 60;
  constexpr int kAccel = 40;
  int k = 0;
  for (; k < kDirect; ++k) {
    const double a = first_zero + k * kPi;
    const double p = piece(a, a + kPi);
    sum += p;
    if (a > envelope_scale && std::abs(p) <= 1e-17 * std::abs(sum)) return sum;
  }
  std::vector<double> b(kAccel);
  for (int j = 0; j < kAccel; ++j) {
    const double a = first_zero + (k + j) * kPi;
    b[j] = std::abs(piece(a, a + kPi));
  }
  // Sign of the first accelerated piece follows the alternation pattern.
  const double a0 = first_zero + k * kPi;
  const double sign = (cosine ? std::cos(a0 + 0.5 * kPi) : std::sin(a0 + 0.5 * kPi)) >= 0.0 ? 1.0 : -1.0;
  return sum + sign * cvz_alternating(b);
}

}  // namespace

StableDensity::StableDensity(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("StableDensity: alpha must lie in (0, 2]");
  if (alpha == 2.0 || alpha == 1.0) {
    stitch_ = alpha == 1.0 ? 100.0 : kInf;
    c_stitch_ = alpha == 1.0 ? s1(stitch_) * stitch_ * stitch_ : 0.0;
    c_limit_ = alpha == 1.0 ? s1_asymptotic(1e12) * 1e24 : 0.0;
    return;
  }
  small_cut_ = 1e-3;
  // Scan upward for the first of three consecutive points where quadrature
  // and the asymptotic series agree to 1e-6.
  int run = 0;
  double w = 1.5;
  for (int j = 0; j < 400 && run < 3; ++j, w *= 1.05) {
    const double q = s1_quadrature(w);
    const double a = s1_asymptotic(w);
    if (std::abs(q / a - 1.0) < 1e-6) {
      if (run++ == 0) stitch_ = w;
    } else {
      run = 0;
    }
  }
  if (run < 3) throw std::runtime_error("StableDensity: no stitching point found");

  constexpr double kStep = 0.02;
  const double lo = std::log(small_cut_);
  const auto n = static_cast<std::size_t>(std::ceil((std::log(stitch_) - lo) / kStep)) + 1;
  const double step = (std::log(stitch_) - lo) / static_cast<double>(n - 1);
  std::vector<double> values(n), slopes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lw = lo + step * static_cast<double>(i);
    const double ww = std::exp(lw);
    const double v = s1_quadrature(ww);
    values[i] = std::log(v);
    slopes[i] = ww * s1_derivative_quadrature(ww) / v;
  }
  log_s1_ = HermiteTable(lo, step, std::move(values), std::move(slopes));
  c_stitch_ = s1(stitch_) * std::pow(stitch_, 1.0 + alpha_);
  c_limit_ = s1_asymptotic(1e12) * std::pow(1e12, 1.0 + alpha_);
}

std::shared_ptr<const StableDensity> StableDensity::shared(double alpha) {
  static std::mutex mutex;
  static std::map<double, std::shared_ptr<const StableDensity>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[alpha];
  if (!slot) slot = std::make_shared<const StableDensity>(alpha);
  return slot;
}

double StableDensity::series_coefficient(int k) const {
  const double s = std::sin(0.5 * kPi * alpha_ * k);
  const double mag = std::exp(std::lgamma(alpha_ * k + 1.0) - std::lgamma(k + 1.0));
  return ((k % 2 == 1) ? 1.0 : -1.0) * mag * s / kPi;
}

double StableDensity::series_envelope(int k, double w) const {
  return std::exp(std::lgamma(alpha_ * k + 1.0) - std::lgamma(k + 1.0) - (alpha_ * k + 1.0) * std::log(w)) / kPi;
}

int StableDensity::series_terms(double w) const {
  // Truncate where the sine-free envelope stops decreasing or is negligible.
  double prev = kInf;
  const double first = series_envelope(1, w);
  int k = 1;
  for (; k < 200; ++k) {
    const double mag = series_envelope(k, w);
    if (mag > prev || mag < 1e-17 * first) break;
    prev = mag;
  }
  return k - 1;
}

double StableDensity::s1_asymptotic(double w) const {
  const int n = series_terms(w);
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) sum += series_coefficient(k) * std::pow(w, -alpha_ * k - 1.0);
  return sum;
}

double StableDensity::s1_derivative_asymptotic(double w) const {
  const int n = series_terms(w);
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double p = -alpha_ * k - 1.0;
    sum += series_coefficient(k) * p * std::pow(w, p - 1.0);
  }
  return sum;
}

double StableDensity::s1_quadrature(double w) const {
  w = std::abs(w);
  if (w == 0.0) return std::tgamma(1.0 + 1.0 / alpha_) / kPi;
  const double a = alpha_;
  auto g = [w, a](double v) { return std::exp(-std::pow(v / w, a)); };
  return oscillatory_integral(g, true, w * std::pow(45.0, 1.0 / a)) / (kPi * w);
}

double StableDensity::s1_derivative_quadrature(double w) const {
  w = std::abs(w);
  if (w == 0.0) return 0.0;
  const double a = alpha_;
  auto g = [w, a](double v) { return v * std::exp(-std::pow(v / w, a)); };
  return -oscillatory_integral(g, false, w * std::pow(45.0, 1.0 / a)) / (kPi * w * w);
}

double StableDensity::s1_small(double w) const {
  // (1/(pi alpha)) sum_k (-1)^k Gamma((2k+1)/alpha) w^{2k} / (2k)!
  double sum = 0.0, prev = kInf;
  for (int k = 0; k < 12; ++k) {
    const double mag = std::exp(std::lgamma((2.0 * k + 1.0) / alpha_) - std::lgamma(2.0 * k + 1.0)) *
                       std::pow(w, 2.0 * k);
    if (mag > prev) break;
    sum += (k % 2 == 0 ? 1.0 : -1.0) * mag;
    prev = mag;
    if (mag < 1e-17 * sum) break;
  }
  return sum / (kPi * alpha_);
}

double StableDensity::s1_derivative_small(double w) const {
  double sum = 0.0, prev = kInf;
  for (int k = 1; k < 12; ++k) {
    const double mag = std::exp(std::lgamma((2.0 * k + 1.0) / alpha_) - std::lgamma(2.0 * k)) *
                       std::pow(w, 2.0 * k - 1.0);
    if (mag > prev) break;
    sum += (k % 2 == 0 ? 1.0 : -1.0) * mag;
    prev = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return sum / (kPi * alpha_);
}

double StableDensity::s1(double w) const {
  w = std::abs(w);
  if (alpha_ == 2.0) return std::exp(-0.25 * w * w) / std::sqrt(4.0 * kPi);
  if (alpha_ == 1.0) return 1.0 / (kPi * (1.0 + w * w));
  if (w < small_cut_) return s1_small(w);
  if (w <= stitch_) return std::exp(log_s1_(std::log(w)));
  return s1_asymptotic(w);
}

double StableDensity::s1_derivative(double w) const {
  const double sign = w < 0.0 ? -1.0 : 1.0;
  w = std::abs(w);
  double d;
  if (alpha_ == 2.0) {
    d = -0.5 * w * s1(w);
  } else if (alpha_ == 1.0) {
    d = -2.0 * w / (kPi * (1.0 + w * w) * (1.0 + w * w));
  } else if (w < small_cut_) {
    d = s1_derivative_small(w);
  } else if (w <= stitch_) {
    const double lw = std::log(w);
    d = log_s1_.derivative(lw) * std::exp(log_s1_(lw)) / w;
  } else {
    d = s1_derivative_asymptotic(w);
  }
  return sign * d;
}

double StableDensity::operator()(double u, double x) const {
  if (!(u > 0.0)) throw std::invalid_argument("stable density: u must be positive");
  const double scale = std::pow(u, -1.0 / alpha_);
  return scale * s1(scale * x);
}

double stable_density(double u, double x, double alpha) { return (*StableDensity::shared(alpha))(u, x); }

double gamma_density(double t, double u) {
  if (!(t > 0.0 && u > 0.0)) throw std::invalid_argument("gamma_density: t and u must be positive");
  return std::exp((t - 1.0) * std::log(u) - u - std::lgamma(t));
}

namespace {

constexpr double kUMaxBase = 60.0;
constexpr double kNuTableLo = -28.0;
constexpr double kNuTableStep = 0.02;

}  // namespace

SubordinatedLaw::SubordinatedLaw(double alpha) : alpha_(alpha), stable_(StableDensity::shared(alpha)) {
  if (alpha == 2.0) return;
  far_cut_ = stable_->stitch_point() * std::pow(kUMaxBase, 1.0 / alpha);
  const double hi = std::log(far_cut_);
  const auto n = static_cast<std::size_t>(std::ceil((hi - kNuTableLo) / kNuTableStep)) + 1;
  const double step = (hi - kNuTableLo) / static_cast<double>(n - 1);
  std::vector<double> values(n), slopes(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = kNuTableLo + step * static_cast<double>(i);
    const double x = std::exp(lx);
    const double v = subordinate(x, 0.0, false).value;
    values[i] = std::log(v);
    slopes[i] = x * subordinate(x, 0.0, true).value / v;
  }
  log_nu_ = HermiteTable(kNuTableLo, step, std::move(values), std::move(slopes));
}

std::shared_ptr<const SubordinatedLaw> SubordinatedLaw::shared(double alpha) {
  static std::mutex mutex;
  static std::map<double, std::shared_ptr<const SubordinatedLaw>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[alpha];
  if (!slot) slot = std::make_shared<const SubordinatedLaw>(alpha);
  return slot;
}

namespace {

// x^q gamma(s, U). For tiny x, x^q overflows while gamma(s, U) ~ U^s/s
// underflows, so small U goes through the series
//   gamma(s, U) = U^s e^{-U} sum_n U^n / (s (s+1) ... (s+n))
// with the powers combined in log space.
double power_times_lower_gamma(double x, double q, double s, double U) {
  if (U > 1.0) return std::pow(x, q) * boost::math::tgamma_lower(s, U);
  double sum = 0.0, term = 1.0 / s;
  for (int n = 0; n < 200 && term > 1e-17 * sum; ++n) {
    sum += term;
    term *= U / (s + n + 1);
  }
  return std::exp(q * std::log(x) + s * std::log(U) - U) * sum;
}

}  // namespace

Estimate SubordinatedLaw::subordinate(double x, double shift, bool derivative) const {
  const double ax = std::abs(x);
  const double a = alpha_;
  const double u_max = kUMaxBase + 2.0 * shift;
  // The interpolated s_1 is only C^1 at table nodes, so ask for 1e-10; the
  // derivative only feeds table slopes and its integrand is noisier.
  QuadOptions opt;
  opt.rel_tol = derivative ? 1e-7 : 1e-10;
  opt.abs_tol = 1e-300;
  opt.max_intervals = 20000;

  if (a == 2.0) {
    // Gaussian s_u: the u -> 0 end is killed by exp(-x^2 / 4u).
    auto f = [&](double r) {
      const double u = std::exp(r);
      const double s = std::exp(-0.25 * ax * ax / u) / std::sqrt(4.0 * kPi * u);
      const double w = std::exp(r * shift - u);
      return derivative ? -(ax / (2.0 * u)) * s * w : s * w;
    };
    // For shift > 1/2 the integrand is below e^{r (shift - 1/2)}, so tiny |x|
    // need not drag the lower end out to where the panels underflow.
    double r_lo = std::log(ax * ax / 2800.0);
    if (shift > 0.5) r_lo = std::max(r_lo, -40.0 / (shift - 0.5));
    const double r_hi = std::log(u_max);
    std::vector<double> cuts{r_lo, r_hi};
    for (double c : {std::log(0.25 * ax * ax), 0.0})
      if (c > r_lo && c < r_hi) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    QuadResult total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total = total + integrate(f, cuts[i], cuts[i + 1], opt);
    return {total.value, total.abs_error};
  }

  const StableDensity& st = *stable_;
  // Below U every argument of s_1 lies beyond the stitching point, where the
  // series in u integrates termwise against u^{shift-1} e^{-u}.
  const double U = std::pow(ax / st.stitch_point(), a);
  double series = 0.0;
  const int terms = st.series_terms(st.stitch_point());
  for (int k = 1; k <= terms; ++k) {
    const double c = st.series_coefficient(k);
    if (c == 0.0) continue;
    const double p = -a * k - 1.0;
    const double q = derivative ? p - 1.0 : p;
    const double term = power_times_lower_gamma(ax, q, k + shift, std::min(U, u_max));
    series += derivative ? c * p * term : c * term;
  }
  if (U >= u_max) return {series, std::abs(series) * 1e-12};

  auto f = [&](double r) {
    const double u = std::exp(r);
    const double scale = std::pow(u, -1.0 / a);
    const double weight = std::exp(r * shift - u);
    return derivative ? scale * scale * st.s1_derivative(ax * scale) * weight : scale * st.s1(ax * scale) * weight;
  };
  const double r_lo = std::log(U);
  const double r_hi = std::log(u_max);
  std::vector<double> cuts{r_lo, r_hi};
  for (double c : {a * std::log(ax), 0.0})
    if (c > r_lo && c < r_hi) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  QuadResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total = total + integrate(f, cuts[i], cuts[i + 1], opt);
  return {series + total.value, total.abs_error + std::abs(series) * 1e-12};
}

double SubordinatedLaw::nu(double x) const {
  if (x == 0.0 || std::isnan(x)) throw std::invalid_argument("levy density: x must be nonzero");
  const double ax = std::abs(x);
  if (alpha_ == 2.0) return std::exp(-ax) / ax;
  const double lx = std::log(ax);
  if (log_nu_.contains(lx)) return std::exp(log_nu_(lx));
  return subordinate(ax, 0.0, false).value;
}

double SubordinatedLaw::nu_derivative(double x) const {
  if (x == 0.0 || std::isnan(x)) throw std::invalid_argument("levy density: x must be nonzero");
  const double ax = std::abs(x);
  if (alpha_ == 2.0) return -std::exp(-ax) * (1.0 / ax + 1.0 / (ax * ax));
  const double lx = std::log(ax);
  if (log_nu_.contains(lx)) return log_nu_.derivative(lx) * std::exp(log_nu_(lx)) / ax;
  return subordinate(ax, 0.0, true).value;
}

Estimate SubordinatedLaw::nu_by_subordination(double x) const {
  if (x == 0.0 || std::isnan(x)) throw std::invalid_argument("levy density: x must be nonzero");
  return subordinate(x, 0.0, false);
}

double SubordinatedLaw::nu_comparator(double x) const {
  const double ax = std::abs(x);
  return 1.0 / (ax * (1.0 + std::pow(ax, alpha_)));
}

Estimate SubordinatedLaw::transition_density(double t, double x) const {
  if (!(t > 0.0)) throw std::invalid_argument("transition density: t must be positive");
  if (x == 0.0) {
    // s_u(0) = u^{-1/alpha} s_1(0) integrates in closed form against g_t.
    if (t <= 1.0 / alpha_) return {kInf, 0.0};
    const double v = stable_->s1(0.0) * std::exp(std::lgamma(t - 1.0 / alpha_) - std::lgamma(t));
    return {v, 0.0};
  }
  const Estimate e = subordinate(x, t, false);
  const double g = std::exp(-std::lgamma(t));
  return {e.value * g, e.abs_error * g};
}

double levy_density(double alpha, double x) { return SubordinatedLaw::shared(alpha)->nu(x); }

Estimate transition_density(double alpha, double t, double x) {
  return SubordinatedLaw::shared(alpha)->transition_density(t, x);
}

}  // namespace geopot
