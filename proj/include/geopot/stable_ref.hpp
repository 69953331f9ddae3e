#pragma once

#include <functional>

namespace geopot {

class RenewalEvaluator;

/// Renewal function of a one-sided scale: V(x) for x >= 0.
using RenewalFn = std::function<double(double)>;

/// Stable renewal function x^{alpha/2}.
double V_alpha(double alpha, double x);
RenewalFn stable_renewal(double alpha);
RenewalFn geometric_renewal(const RenewalEvaluator& v);

/// Brownian Green functions (clock running at twice the usual speed).
double green_brownian_halfline(double x, double y);
double green_brownian_interval(double R, double x, double y);

/// Half-line Green function obtained from the convolution formula with
/// V = x^{alpha/2}:
///   (alpha^2/4) int_0^{x^y} u^{alpha/2-1} (|y-x|+u)^{alpha/2-1} du.
/// +inf on the diagonal when alpha <= 1.
double green_stable_halfline(double alpha, double x, double y);

/// Comparator functions G-hat for the half-line and for (0, R), built from
/// the supplied renewal function.
double ghat_halfline(double alpha, const RenewalFn& V, double x, double y);
double ghat_interval(double alpha, const RenewalFn& V, double R, double x, double y);

/// x ^ (R - x).
double delta_R(double R, double x);

/// Half-line stable Poisson kernel C_alpha (x/|z|)^{alpha/2} / (x - z), z < 0 < x.
double poisson_stable_halfline(double alpha, double x, double z);

/// C_alpha, resolved once per alpha by requiring the kernel to integrate to
/// one over z < 0 (the stable process leaves (0, inf) almost surely).
double poisson_stable_constant(double alpha);

}  // namespace geopot
