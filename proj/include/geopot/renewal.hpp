#pragma once

#include <memory>

#include "geopot/interp.hpp"
#include "geopot/spectral.hpp"

namespace geopot {

/// Renewal function V of the ascending ladder height process and its
/// derivative, from the Bernstein-function integral representation.
///
/// In PureStable mode the output is rescaled by Gamma(1 + alpha/2) so that
/// V(x) = x^{alpha/2} exactly; with the kappa(z, 0) = sqrt(z) local time the
/// raw integral gives x^{alpha/2} / Gamma(1 + alpha/2). GeometricStable output
/// is never rescaled.
class RenewalEvaluator {
 public:
  explicit RenewalEvaluator(const ProcessSpec& spec);

  /// Evaluators are expensive to build; this returns one cached per spec.
  static std::shared_ptr<const RenewalEvaluator> shared(const ProcessSpec& spec);

  const ProcessSpec& spec() const { return spec_; }
  double b() const { return b_; }
  double normalization() const { return norm_; }
  const PsiDagger& psi_dagger() const { return psi_dagger_; }

  /// Direct quadrature with error estimate.
  Estimate evaluate_V(double x) const;
  Estimate evaluate_Vprime(double x) const;
  /// x^2 V''(x) (nonpositive) by direct quadrature.
  Estimate evaluate_x2_Vsecond(double x) const;

  /// Table-interpolated values; direct quadrature outside the table.
  double V(double x) const;
  double Vprime(double x) const;
  /// x V'(x); bounded where V' itself blows up.
  double x_Vprime(double x) const;
  Estimate V_with_error(double x) const;
  Estimate Vprime_with_error(double x) const;

  /// Relative error bound of the interpolated values inside the table.
  double table_rel_error() const { return table_rel_error_; }

 private:
  // (1/pi) int mu(e^t) K(t + s) dt for the three kernels at s = log x.
  QuadResult kernel_integral(int kernel, double s) const;
  double xvp_from_log(double s) const;

  ProcessSpec spec_;
  double b_;
  double norm_;
  PsiDagger psi_dagger_;
  HermiteTable log_v_;
  HermiteTable log_xvp_;
  double table_rel_error_ = 0.0;
};

/// Closed-form comparators: V(x) ~ 1/log^{1/2}(1 + x^{-alpha}) and
/// V'(x) ~ 1/(x log^{3/2}(1 + x^{-alpha/3})).
double V_comparator(double alpha, double x);
double Vprime_comparator(double alpha, double x);

struct IdentityPair {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;
  bool valid = false;
  const char* skip_reason = "";
  double ratio() const { return lhs / rhs; }
};

/// The four integral identities for V:
///   (1) int_0^x V          vs x V(x);
///   (2) int_1^x V(y)/y dy  vs V(x),           x >= 2;
///   (3) int_x^1 V(y)/y dy  vs 1/V(x),         x <= 1/2;
///   (4) int_x^1 V^b/y^2 dy vs V^b(x)/x,       x <= 1/2, b in {3, 6}.
struct IntegralIdentities {
  IdentityPair int1, int2, int3, int4_beta3, int4_beta6;
};

IntegralIdentities int_identities(const RenewalEvaluator& v, double x);

}  // namespace geopot
