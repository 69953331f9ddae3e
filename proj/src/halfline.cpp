#include "geopot/halfline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "geopot/stable_ref.hpp"

namespace geopot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Integrates f over consecutive cut points, skipping empty pieces.
QuadResult integrate_pieces(const Integrand& f, std::vector<double> cuts, const QuadOptions& opt) {
  std::sort(cuts.begin(), cuts.end());
  QuadResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) total = total + integrate(f, cuts[i], cuts[i + 1], opt);
  return total;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::Quadrature:
      return "quadrature";
    case Method::ClosedForm:
      return "closed_form";
    default:
      return "comparator";
  }
}

HalfLine::HalfLine(const ProcessSpec& spec) : HalfLine(RenewalEvaluator::shared(spec)) {}

HalfLine::HalfLine(std::shared_ptr<const RenewalEvaluator> v)
    : v_(std::move(v)), alpha_(v_->spec().alpha), geometric_(v_->spec().is_geometric()) {
  if (geometric_)
    law_ = SubordinatedLaw::shared(alpha_);
  else if (alpha_ < 2.0)
    stable_jump_constant_ = std::tgamma(1.0 + alpha_) * std::sin(0.5 * kPi * alpha_) / kPi;
}

double HalfLine::jump_density(double r) const {
  if (!(r > 0.0)) throw std::invalid_argument("jump_density: distance must be positive");
  if (geometric_) return law_->nu(r);
  return stable_jump_constant_ * std::pow(r, -1.0 - alpha_);
}

KernelValue HalfLine::green(double x, double y) const { return green_impl(x, y, 1e-10); }

KernelValue HalfLine::green_impl(double x, double y, double rel_tol) const {
  if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("green: x and y must be positive");
  const double m = std::min(x, y);
  const double d = std::abs(x - y);
  const RenewalEvaluator& v = *v_;
  if (d == 0.0) {
    if (!geometric_ && alpha_ > 1.0)
      return {0.25 * alpha_ * alpha_ * std::pow(m, alpha_ - 1.0) / (alpha_ - 1.0), 0.0, Method::ClosedForm};
    return {kInf, 0.0, Method::Quadrature};
  }
  // Below eps the monotonicity of V' brackets the integral between
  // V(eps) V'(d + eps) and V(eps) V'(d).
  const double eps = 1e-10 * std::min(d, m);
  const double v_eps = v.V(eps);
  const double lo = v_eps * v.Vprime(d + eps);
  const double hi = v_eps * v.Vprime(d);

  QuadOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-300;
  auto f = [&](double s) {
    const double u = std::exp(s);
    return v.x_Vprime(u) * v.Vprime(d + u);
  };
  std::vector<double> cuts{std::log(eps), std::log(m)};
  if (d > eps && d < m) cuts.push_back(std::log(d));
  const QuadResult r = integrate_pieces(f, cuts, opt);
  return {r.value + 0.5 * (lo + hi), r.abs_error + 0.5 * (hi - lo) + 1e-15 * r.value, Method::Quadrature};
}

double HalfLine::ghat(double x, double y) const {
  const RenewalEvaluator& v = *v_;
  return ghat_halfline(alpha_, [&v](double t) { return v.V(t); }, x, y);
}

double HalfLine::green_comparator(double x, double y) const {
  if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("green_comparator: x and y must be positive");
  const double d = std::abs(x - y);
  if (d == 0.0) return kInf;
  const double vd = V(d);
  const double lg = std::log(2.0 + 1.0 / d);
  return std::min(1.0, V(x) * V(y) / (vd * vd)) / (d * lg * lg) + ghat(x, y);
}

double HalfLine::green_comparator_near(double x, double y) const {
  if (!(x > 0.0 && y > 0.0)) throw std::invalid_argument("green_comparator_near: x and y must be positive");
  const double d = std::abs(x - y);
  if (d == 0.0) return kInf;
  const double vd = V(d);
  const double lg = std::log1p(1.0 / d);
  return std::min(1.0, V(x) * V(y) / (vd * vd)) / (d * lg * lg);
}

KernelValue HalfLine::poisson(double x, double z) const { return poisson_impl(x, z, false); }

KernelValue HalfLine::poisson_scaled(double x, double z) const {
  return poisson_impl(x, z, geometric_ && alpha_ == 2.0);
}

KernelValue HalfLine::poisson_impl(double x, double z, bool scaled) const {
  if (!(z < 0.0 && x > 0.0)) throw std::invalid_argument("poisson: requires z < 0 < x");
  if (!geometric_ && alpha_ == 2.0) throw std::invalid_argument("poisson: Brownian motion has no jump exit");
  const RenewalEvaluator& v = *v_;

  // For alpha = 2 the factor e^{z} comes out of nu(y - z) exactly.
  auto jump = [&](double y) { return scaled ? std::exp(-y) / (y - z) : jump_density(y - z); };
  const double inner_tol = 0.1 * poisson_tol_;
  auto g = [&](double y) { return green_impl(x, y, inner_tol).value; };

  QuadOptions opt;
  opt.rel_tol = poisson_tol_;
  opt.abs_tol = 1e-300;
  QuadResult total;
  double extra_error = 0.0;

  // Below y_min, G(x, y) <= V(y) V'(x - y) and nu(y - z) <= nu(-z). The
  // integrand peaks near y ~ |z|, so y_min must sit well below that too.
  const double y_min = 1e-12 * std::min(x, -z);
  extra_error += y_min * v.V(y_min) * v.Vprime(0.5 * x) * jump(0.0);
  total = total + integrate(
                      [&](double s) {
                        const double y = std::exp(s);
                        return y * g(y) * jump(y);
                      },
                      std::log(y_min), std::log(0.5 * x), opt);

  // Around the diagonal G ~ 1/(d log^2 d), so integrate in log |y - x|.
  const double delta = 1e-6 * std::min(1.0, x);
  auto left = [&](double s) {
    const double t = std::exp(s);
    return t * g(x - t) * jump(x - t);
  };
  auto right = [&](double s) {
    const double t = std::exp(s);
    return t * g(x + t) * jump(x + t);
  };
  total = total + integrate(left, std::log(delta), std::log(0.5 * x), opt);
  const double far = x + 1.0;
  total = total + integrate(right, std::log(delta), std::log(far), opt);

  // The window [x - delta, x + delta] in closed form:
  //   int G(x, y) dy = int_0^x V'(u) [V(u + delta) + V(min(u + delta, x)) - 2 V(u)] du,
  // times nu at the centre; nu is monotone in y, which bounds the error.
  {
    // V(b) - V(a) loses digits to cancellation once b - a << a; the midpoint
    // rule is then accurate to ((b - a)/a)^2.
    auto increment = [&](double a, double b) {
      if (b - a < 1e-4 * a) return (b - a) * v.Vprime(0.5 * (a + b));
      return v.V(b) - v.V(a);
    };
    auto h = [&](double u) { return increment(u, u + delta) + increment(u, std::min(u + delta, x)); };
    // On [0, eps], h(u) = 2 V(u + delta) - 2 V(u) and int_0^eps V' V = V(eps)^2/2,
    // leaving 2 int_0^eps V'(u) V(u + delta) du between 2 V(eps) V(delta) and
    // 2 V(eps) V(delta + eps).
    const double eps = 1e-10 * delta;
    const double v_eps = v.V(eps);
    const double w_lo = 2.0 * v_eps * v.V(delta) - v_eps * v_eps;
    const double w_hi = 2.0 * v_eps * v.V(delta + eps) - v_eps * v_eps;
    QuadOptions wopt;
    wopt.rel_tol = 1e-9;
    wopt.abs_tol = 1e-300;
    auto f = [&](double s) {
      const double u = std::exp(s);
      return v.x_Vprime(u) * h(u);
    };
    const QuadResult w = integrate_pieces(f, {std::log(eps), std::log(delta), std::log(x - delta), std::log(x)}, wopt);
    const double W = w.value + 0.5 * (w_lo + w_hi);
    const double jc = jump(x);
    const double jvar = std::max(std::abs(jump(x - delta) - jc), std::abs(jump(x + delta) - jc));
    total.value += jc * W;
    extra_error += jc * (w.abs_error + 0.5 * (w_hi - w_lo)) + jvar * W;
  }

  // Tail beyond 2x + 1, where nu(y - z) decays like a power (or e^{-y}).
  const double tail_start = x + far;
  const double scale = std::max(tail_start, -z);
  total = total + integrate_to_infinity([&](double y) { return g(y) * jump(y); }, tail_start, scale, opt);

  return {total.value, total.abs_error + extra_error + inner_tol * total.value, Method::Quadrature};
}

double HalfLine::poisson_comparator(double x, double z) const {
  const double c = poisson_comparator_scaled(x, z);
  return alpha_ == 2.0 ? std::exp(z) * c : c;
}

double HalfLine::poisson_comparator_scaled(double x, double z) const {
  if (!(z < 0.0 && x > 0.0)) throw std::invalid_argument("poisson_comparator: requires z < 0 < x");
  const double r = x - z;
  if (alpha_ == 2.0) return V(std::min(x, 1.0)) / V(-z) / (r * std::log1p(1.0 / r));
  return V(x) / V(-z) / (r * std::log(2.0 + 1.0 / r));
}

double HalfLine::poisson_comparator_far(double x, double z) const {
  const double c = poisson_comparator_far_scaled(x, z);
  return alpha_ == 2.0 ? std::exp(z) * c : c;
}

double HalfLine::poisson_comparator_far_scaled(double x, double z) const {
  if (!(z < 0.0 && x > 0.0)) throw std::invalid_argument("poisson_comparator_far: requires z < 0 < x");
  if (alpha_ == 2.0) return V(std::min(x, 1.0)) / V(-z);
  return V(x) / V(-z) / (x - z);
}

KernelValue HalfLine::poisson_comparator_near(double x, double z) const {
  if (!(z < 0.0 && x > 0.0)) throw std::invalid_argument("poisson_comparator_near: requires z < 0 < x");
  const double top = 1.75 * std::max(x, -z);
  const double vx = V(x);
  auto kernel = [&](double y, double d) {
    const double vd = V(d);
    const double lg = std::log1p(1.0 / d);
    return std::min(1.0, vx * V(y) / (vd * vd)) / (lg * lg) / (y - z);  // times d already folded in
  };
  QuadOptions opt;
  opt.rel_tol = 1e-8;
  opt.abs_tol = 1e-300;
  // Below eps on either side the factor tends to 1 and int_0^eps dd/(d log^2(1+1/d)) ~ 1/log(1+1/eps).
  const double eps = 1e-12 * x;
  QuadResult r;
  r = r + integrate([&](double s) { const double d = std::exp(s); return kernel(x - d, d); }, std::log(eps), std::log(x), opt);
  if (top > x)
    r = r + integrate([&](double s) { const double d = std::exp(s); return kernel(x + d, d); }, std::log(eps),
                      std::log(top - x), opt);
  const double near = 2.0 / std::log1p(1.0 / eps) / (x - z);
  return {r.value + near, r.abs_error + 1e-3 * near, Method::Comparator};
}

KernelValue HalfLine::occupation(double x, double R) const {
  if (!(x > 0.0 && R > 0.0)) throw std::invalid_argument("occupation: x and R must be positive");
  const RenewalEvaluator& v = *v_;
  QuadOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-300;
  if (R >= x) {
    // g(v) = V(R - x + v) is increasing, so V(eps) g(0) <= int_0^eps V' g <= V(eps) g(eps).
    const double c = R - x;
    auto g = [&](double t) { return v.V(c + t); };
    const double eps = 1e-10 * (c > 0.0 ? std::min(x, c) : x);
    const double v_eps = v.V(eps);
    // At c = 0 the piece is int_0^eps V' V = V(eps)^2/2 exactly.
    const double lo = c > 0.0 ? v_eps * g(0.0) : 0.5 * v_eps * v_eps;
    const double hi = c > 0.0 ? v_eps * g(eps) : lo;
    auto f = [&](double s) {
      const double t = std::exp(s);
      return v.x_Vprime(t) * g(t);
    };
    std::vector<double> cuts{std::log(eps), std::log(x)};
    if (c > eps && c < x) cuts.push_back(std::log(c));
    const QuadResult r = integrate_pieces(f, cuts, opt);
    return {r.value + 0.5 * (lo + hi), r.abs_error + 0.5 * (hi - lo), Method::Quadrature};
  }
  // R < x: only v in (x - R, x] contributes; with w = v - (x - R) the factor
  // V(w) vanishes at w = 0 and V' is bounded there.
  const double shift = x - R;
  auto f = [&](double s) {
    const double w = std::exp(s);
    return w * v.Vprime(shift + w) * v.V(w);
  };
  const double eps = 1e-14 * R;
  const QuadResult r = integrate(f, std::log(eps), std::log(R), opt);
  return {r.value, r.abs_error + eps * v.V(eps) * v.Vprime(shift), Method::Quadrature};
}

Bounds HalfLine::exit_time_bounds(double x, double R, double C1) const {
  if (!(x > 0.0 && x < R)) throw std::invalid_argument("exit_time_bounds: requires 0 < x < R");
  const double upper = V(std::min(x, R - x)) * V(R);
  return {std::pow(C1, 4) / 16.0 * upper, upper};
}

Bounds HalfLine::exit_prob_bounds(double x, double R, double C1) const {
  if (!(x > 0.0 && x <= R)) throw std::invalid_argument("exit_prob_bounds: requires 0 < x <= R");
  const double upper = V(x) / V(R);
  return {C1 * C1 / 4.0 * upper, upper};
}

double HalfLine::survival_lower(double x, double t) const {
  if (!(x > 0.0 && t > 0.0)) throw std::invalid_argument("survival_lower: x and t must be positive");
  return std::min(1.0, V(x) / std::sqrt(t));
}

}  // namespace geopot
