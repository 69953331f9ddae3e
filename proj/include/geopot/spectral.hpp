#pragma once

#include <memory>

#include "geopot/interp.hpp"
#include "geopot/quadrature.hpp"

namespace geopot {

enum class Mode { GeometricStable, PureStable };

/// Process description shared by every evaluator. PureStable exists only as
/// an oracle whose ladder quantities are known in closed form.
struct ProcessSpec {
  double alpha = 1.0;
  Mode mode = Mode::GeometricStable;
  double quad_tol = 1e-8;
  double xi_cutoff_factor = 50.0;
  /// PureStable only: use psi_dagger(xi) = xi^{alpha/2} instead of quadrature.
  bool exact_oracle = false;

  static ProcessSpec geometric(double alpha) { return {alpha, Mode::GeometricStable}; }
  static ProcessSpec pure(double alpha, bool exact = false) {
    ProcessSpec s{alpha, Mode::PureStable};
    s.exact_oracle = exact;
    return s;
  }

  /// Throws std::invalid_argument when alpha or quad_tol is out of range.
  void validate() const;
  bool is_geometric() const { return mode == Mode::GeometricStable; }
};

/// Drift of the ladder height process: 1 exactly when alpha = 2, else 0.
double drift_coefficient(const ProcessSpec& spec);

/// Laplace exponent of the subordinator: log(1 + lambda^{alpha/2}), or
/// lambda^{alpha/2} in PureStable mode.
double psi(const ProcessSpec& spec, double lambda);

/// Characteristic exponent Psi(xi) = psi(xi^2).
double big_psi(const ProcessSpec& spec, double xi);

/// log Psi(e^t), accurate for any t without overflow.
double log_big_psi_at_log(const ProcessSpec& spec, double t);

/// d log Psi / d log xi at xi = e^t; lies in [0, alpha].
double log_big_psi_slope_at_log(const ProcessSpec& spec, double t);

/// Im(-1/psi^+(-xi^2)), the density part of the boundary measure (the atom
/// at zero is carried by the drift coefficient instead).
double im_recip(const ProcessSpec& spec, double xi);

/// im_recip at xi = e^t; avoids forming xi^alpha explicitly.
double im_recip_at_log(const ProcessSpec& spec, double t);

/// log psi_dagger(e^t) by direct quadrature of the Cauchy-kernel exponent
/// integral; abs_error refers to the logarithm.
QuadResult log_psi_dagger_direct(const ProcessSpec& spec, double t);

/// d log psi_dagger / d log xi at xi = e^t by quadrature; lies in (0, alpha].
double log_psi_dagger_slope_direct(const ProcessSpec& spec, double t);

/// Value with its absolute error estimate.
struct Estimate {
  double value = 0.0;
  double abs_error = 0.0;
};

/// Ladder-height Laplace exponent psi_dagger(xi) = kappa(0, xi), computed from
/// a cached table in log xi with direct quadrature outside the table.
class PsiDagger {
 public:
  explicit PsiDagger(const ProcessSpec& spec);

  double operator()(double xi) const;
  /// log psi_dagger(e^t).
  double log_at(double t) const;
  /// Value with error estimate (table interpolation error plus quadrature error).
  Estimate evaluate(double xi) const;

  /// mu(xi) = psi_dagger(xi) * im_recip(xi), evaluated at xi = e^t.
  double mu_at_log(double t) const;
  double mu(double xi) const;

  const ProcessSpec& spec() const { return spec_; }
  double table_lo() const { return table_.lo(); }
  double table_hi() const { return table_.hi(); }
  /// Largest relative interpolation error observed at table midpoints.
  double table_rel_error() const { return table_rel_error_; }

 private:
  ProcessSpec spec_;
  HermiteTable table_;
  double table_rel_error_ = 0.0;
};

/// Convenience: psi_dagger by direct quadrature (no table), value and error.
Estimate psi_dagger(const ProcessSpec& spec, double xi);

/// mu(xi) = psi_dagger(xi) * im_recip(xi) by direct quadrature.
double mu_integrand(const ProcessSpec& spec, double xi);

}  // namespace geopot
