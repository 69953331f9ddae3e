#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace geopot {

/// Thrown when an adaptive integrator exhausts its subdivision budget before
/// meeting the requested tolerance. Carries the best estimate reached.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double value, double abs_error)
      : std::runtime_error(what), value_(value), abs_error_(abs_error) {}
  double value() const noexcept { return value_; }
  double abs_error() const noexcept { return abs_error_; }

 private:
  double value_;
  double abs_error_;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
};

struct QuadOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
  /// When false, a budget overrun returns the partial result instead of throwing.
  bool throw_on_failure = true;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval [a, b].
/// Integrable endpoint singularities are handled by bisection; nodes never
/// touch the endpoints.
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opt = {});

/// Integral over [a, inf) through t = a + scale * (1 - u) / u, u in (0, 1].
QuadResult integrate_to_infinity(const Integrand& f, double a, double scale,
                                 const QuadOptions& opt = {});

/// Integral over [a, inf) for an integrand decaying like t^{-p}, p > 1, slowly;
/// uses t = a + scale * (u^{-2} - 1), which maps t^{-3/2} tails to bounded ones.
QuadResult integrate_algebraic_tail(const Integrand& f, double a, double scale,
                                    const QuadOptions& opt = {});

inline QuadResult operator+(QuadResult lhs, const QuadResult& rhs) {
  lhs.value += rhs.value;
  lhs.abs_error += rhs.abs_error;
  lhs.evaluations += rhs.evaluations;
  return lhs;
}

}  // namespace geopot
