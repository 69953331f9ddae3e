#pragma once

#include <memory>

#include "geopot/levy.hpp"
#include "geopot/renewal.hpp"

namespace geopot {

enum class Method { Quadrature, ClosedForm, Comparator };
const char* method_name(Method m);

struct KernelValue {
  double value = 0.0;
  double abs_error = 0.0;
  Method method = Method::Quadrature;
};

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Green function, Poisson kernel and exit functionals of (0, inf), computed
/// from the renewal function by exact quadrature formulas.
///
/// In PureStable mode the jump density is |x|^{-1-alpha} Gamma(1+alpha)
/// sin(pi alpha/2)/pi and V = x^{alpha/2}, so every quantity reproduces the
/// stable kernels scaled by Gamma(1+alpha/2)^2.
class HalfLine {
 public:
  explicit HalfLine(const ProcessSpec& spec);
  explicit HalfLine(std::shared_ptr<const RenewalEvaluator> v);

  const RenewalEvaluator& renewal() const { return *v_; }
  double alpha() const { return alpha_; }
  double V(double x) const { return v_->V(x); }

  /// Jump density at distance r > 0.
  double jump_density(double r) const;

  /// G(x, y) = int_0^{x^y} V'(u) V'(|y-x|+u) du; +inf on the diagonal unless
  /// the integral converges there (PureStable, alpha > 1).
  KernelValue green(double x, double y) const;
  /// (1 ^ V(x)V(y)/V^2(d)) / (d log^2(2 + 1/d)) + G-hat(x, y), d = |y - x|.
  double green_comparator(double x, double y) const;
  /// Same singular factor with log^2(1 + 1/d) and no G-hat term (x, y < 4).
  double green_comparator_near(double x, double y) const;
  /// G-hat with this process's V.
  double ghat(double x, double y) const;

  /// P(x, z) = int_0^inf G(x, y) nu(y - z) dy for z < 0 < x.
  KernelValue poisson(double x, double z) const;
  /// e^{-z} P(x, z) when alpha = 2 (GeometricStable), P(x, z) otherwise;
  /// stays representable for very negative z.
  KernelValue poisson_scaled(double x, double z) const;
  double poisson_comparator(double x, double z) const;
  /// Form valid when x v |z| >= 1.
  double poisson_comparator_far(double x, double z) const;
  /// The two comparators without their e^{z} factor when alpha = 2, to pair
  /// with poisson_scaled.
  double poisson_comparator_scaled(double x, double z) const;
  double poisson_comparator_far_scaled(double x, double z) const;
  /// Integral form for -1 < z < 0 < x < 1.
  KernelValue poisson_comparator_near(double x, double z) const;

  /// E^x int_0^tau 1_{[0,R]}(X_t) dt = int_0^x V'(v) V((R - x + v)^+) dv.
  KernelValue occupation(double x, double R) const;

  /// (C1^4/16) V(d) V(R) <= E^x tau_(0,R) <= V(d) V(R), d = x ^ (R - x).
  Bounds exit_time_bounds(double x, double R, double C1) const;
  /// (C1^2/4) V(x)/V(R) <= P^x(tau_(0,R) < tau) <= V(x)/V(R).
  Bounds exit_prob_bounds(double x, double R, double C1) const;
  /// 1 ^ V(x)/sqrt(t); the survival probability is at least C1 times this.
  double survival_lower(double x, double t) const;

  /// Relative tolerance for the outer Poisson quadrature (default 1e-7).
  void set_poisson_tolerance(double rel) { poisson_tol_ = rel; }

 private:
  KernelValue green_impl(double x, double y, double rel_tol) const;
  KernelValue poisson_impl(double x, double z, bool scaled) const;

  std::shared_ptr<const RenewalEvaluator> v_;
  std::shared_ptr<const SubordinatedLaw> law_;
  double alpha_;
  bool geometric_;
  double stable_jump_constant_ = 0.0;
  double poisson_tol_ = 1e-7;
};

}  // namespace geopot
