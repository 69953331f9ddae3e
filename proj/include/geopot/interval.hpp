#pragma once

#include <stdexcept>
#include <string>

#include "geopot/halfline.hpp"
#include "geopot/montecarlo.hpp"

namespace geopot {

/// Small intervals (R < 4) use the singular-factor comparator; large ones
/// (R >= 4) switch to half-line Greens near the diagonal and G-hat elsewhere.
enum class IntervalRegime { Small, Large };
IntervalRegime interval_regime(double R);

/// Raised for (R, x, z) where no Poisson comparator is available.
class UncoveredRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Which half-line Green the large-interval comparator uses for |x - y| <= 1.
enum class HalfLineGreen { Exact, Comparator };

/// Comparators for the Green function and Poisson kernel of (0, R), built on
/// a half-line evaluator for the same process.
class IntervalComparators {
 public:
  explicit IntervalComparators(const HalfLine& halfline) : h_(halfline) {}

  /// (1 ^ V(dx)V(dy)/V^2(d)) / (d log^2(1 + 1/d)) with dx = x ^ (R - x).
  double green_small(double R, double x, double y) const;
  /// min of the two half-line Greens for |x - y| <= 1, G-hat_(0,R) beyond.
  double green_large(double R, double x, double y, HalfLineGreen which = HalfLineGreen::Exact) const;
  /// Dispatches on interval_regime(R). x != y.
  double green(double R, double x, double y, HalfLineGreen which = HalfLineGreen::Exact) const;

  /// P_(0,R)(x, z) comparator for z outside [0, R]; z > R is reflected to
  /// (R - x, R - z). Throws UncoveredRegime where none applies (alpha = 2,
  /// 2 < R < 4, and x > 2 or 2 < |z| < R).
  double poisson(double R, double x, double z) const;
  /// Name of the branch poisson() would use, or "uncovered".
  std::string poisson_branch(double R, double x, double z) const;

  const HalfLine& halfline() const { return h_; }

 private:
  double poisson_left(double R, double x, double z) const;

  const HalfLine& h_;
};

struct PoissonBounds {
  double lower = 0.0;
  double upper = 0.0;
  /// |z| = r: the upper bound is infinite.
  bool upper_infinite = false;
};

/// E^x tau nu(|z| + 2r) <= P_(-r,r)(x, z) <= E^x tau nu(|z| - r) for |x| < r <= |z|,
/// given the mean exit time of (-r, r) (or bounds on it).
PoissonBounds poisson_interval_bounds(const HalfLine& h, double r, double x, double z, double exit_time);
PoissonBounds poisson_interval_bounds(const HalfLine& h, double r, double x, double z, Bounds exit_time);

/// Exit-time envelope of (0, R) started at x: (C1^4/16) V(d)V(R), V(d)V(R).
Bounds exit_time_envelope(const HalfLine& h, double R, double x, double C1);

struct IntervalExitTime {
  McEstimate mc;
  Bounds envelope;
  double censored_fraction = 0.0;
};

/// Monte Carlo mean exit time of (0, R) bundled with its envelope.
IntervalExitTime exit_time_interval(const HalfLine& h, double R, double x, const SimConfig& config, double C1);

}  // namespace geopot
