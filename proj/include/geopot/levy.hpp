#pragma once

#include <memory>

#include "geopot/interp.hpp"
#include "geopot/spectral.hpp"

namespace geopot {

/// Symmetric alpha-stable density with E exp(i xi Y_u) = exp(-u |xi|^alpha).
///
/// s_1 is closed form for alpha in {1, 2}. Otherwise it is tabulated from the
/// cosine transform for |x| up to a stitching point, beyond which the
/// asymptotic series in |x|^{-alpha} takes over. The stitching point is the
/// first scanned |x| where both agree to 1e-6.
class StableDensity {
 public:
  explicit StableDensity(double alpha);
  static std::shared_ptr<const StableDensity> shared(double alpha);

  double alpha() const { return alpha_; }
  /// s_1(w), w = |x|.
  double s1(double w) const;
  double s1_derivative(double w) const;
  /// s_u(x) = u^{-1/alpha} s_1(u^{-1/alpha} |x|).
  double operator()(double u, double x) const;

  /// Cosine-transform quadrature, bypassing table and tail.
  double s1_quadrature(double w) const;
  double s1_derivative_quadrature(double w) const;
  /// Asymptotic series at large w, truncated at its smallest term.
  double s1_asymptotic(double w) const;
  double s1_derivative_asymptotic(double w) const;
  /// k-th coefficient c_k of s_1(w) ~ sum_k c_k w^{-alpha k - 1}.
  double series_coefficient(int k) const;
  /// |c_k| w^{-alpha k - 1} without the oscillating sine factor.
  double series_envelope(int k, double w) const;
  /// Number of series terms used at w (truncation at the smallest envelope).
  int series_terms(double w) const;

  double stitch_point() const { return stitch_; }
  /// s_1(w) w^{1+alpha} measured at the stitching point.
  double tail_constant_at_stitch() const { return c_stitch_; }
  /// lim s_1(w) w^{1+alpha}, read off the stitched tail far out.
  double tail_constant() const { return c_limit_; }

 private:
  double s1_small(double w) const;
  double s1_derivative_small(double w) const;

  double alpha_;
  double stitch_ = 0.0;
  double small_cut_ = 0.0;
  double c_stitch_ = 0.0;
  double c_limit_ = 0.0;
  HermiteTable log_s1_;  // log s_1 against log w
};

double stable_density(double u, double x, double alpha);

/// Gamma subordinator density g_t(u) = u^{t-1} e^{-u} / Gamma(t).
double gamma_density(double t, double u);

/// Jump density nu and transition density p_t of the geometric stable
/// process, through the subordination integrals against s_u.
class SubordinatedLaw {
 public:
  explicit SubordinatedLaw(double alpha);
  static std::shared_ptr<const SubordinatedLaw> shared(double alpha);

  double alpha() const { return alpha_; }
  /// nu(x); exact for alpha = 2, cached subordination quadrature otherwise.
  double nu(double x) const;
  /// d nu / d|x| (nonpositive).
  double nu_derivative(double x) const;
  /// nu(x) by direct subordination quadrature for any alpha, with error.
  Estimate nu_by_subordination(double x) const;
  /// Closed-form comparator 1/(|x| (1 + |x|^alpha)).
  double nu_comparator(double x) const;
  /// p_t(x); +inf at x = 0 when t <= 1/alpha.
  Estimate transition_density(double t, double x) const;

  const StableDensity& stable() const { return *stable_; }

 private:
  // int_0^inf s_u(x) u^{shift-1} e^{-u} du (derivative=true: d/d|x|).
  Estimate subordinate(double x, double shift, bool derivative) const;

  double alpha_;
  std::shared_ptr<const StableDensity> stable_;
  HermiteTable log_nu_;  // log nu against log |x|
  double far_cut_ = 0.0;
};

/// nu(x) for the given alpha (shared cached law).
double levy_density(double alpha, double x);
Estimate transition_density(double alpha, double t, double x);

}  // namespace geopot
