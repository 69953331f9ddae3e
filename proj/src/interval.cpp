#include "geopot/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "geopot/stable_ref.hpp"

namespace geopot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_interior(double R, double x, const char* who) {
  if (!(R > 0.0)) throw std::invalid_argument(std::string(who) + ": R must be positive");
  if (!(x > 0.0 && x < R)) throw std::invalid_argument(std::string(who) + ": x must lie in (0, R)");
}

}  // namespace

IntervalRegime interval_regime(double R) {
  if (!(R > 0.0)) throw std::invalid_argument("interval_regime: R must be positive");
  return R < 4.0 ? IntervalRegime::Small : IntervalRegime::Large;
}

double IntervalComparators::green_small(double R, double x, double y) const {
  check_interior(R, x, "green_small");
  check_interior(R, y, "green_small");
  const double d = std::abs(x - y);
  if (d == 0.0) return kInf;
  const double vd = h_.V(d);
  const double ratio = h_.V(delta_R(R, x)) * h_.V(delta_R(R, y)) / (vd * vd);
  const double l = std::log1p(1.0 / d);
  return std::min(1.0, ratio) / (d * l * l);
}

double IntervalComparators::green_large(double R, double x, double y, HalfLineGreen which) const {
  check_interior(R, x, "green_large");
  check_interior(R, y, "green_large");
  const double d = std::abs(x - y);
  if (d == 0.0) return kInf;
  if (d <= 1.0) {
    auto g = [&](double a, double b) {
      return which == HalfLineGreen::Exact ? h_.green(a, b).value : h_.green_comparator(a, b);
    };
    return std::min(g(x, y), g(R - x, R - y));
  }
  return ghat_interval(h_.alpha(), [this](double t) { return h_.V(t); }, R, x, y);
}

double IntervalComparators::green(double R, double x, double y, HalfLineGreen which) const {
  return interval_regime(R) == IntervalRegime::Small ? green_small(R, x, y) : green_large(R, x, y, which);
}

std::string IntervalComparators::poisson_branch(double R, double x, double z) const {
  check_interior(R, x, "poisson_branch");
  if (z >= 0.0 && z <= R) throw std::invalid_argument("poisson_branch: z must lie outside [0, R]");
  if (z > R) return poisson_branch(R, R - x, R - z);
  const double a = -z;
  const double cap = std::min(2.0, R);
  if (x <= cap && a <= cap) return "near";
  if (h_.alpha() < 2.0) return "far";
  if (R >= 4.0) return "gaussian-large";
  if (a >= R) return "gaussian-small";
  return "uncovered";
}

double IntervalComparators::poisson(double R, double x, double z) const {
  check_interior(R, x, "poisson_interval_comparator");
  if (z >= 0.0 && z <= R) throw std::invalid_argument("poisson_interval_comparator: z must lie outside [0, R]");
  if (h_.alpha() == 2.0 && !h_.renewal().spec().is_geometric())
    throw std::invalid_argument("poisson_interval_comparator: Brownian motion exits continuously");
  if (z > R) return poisson_left(R, R - x, R - z);
  return poisson_left(R, x, z);
}

double IntervalComparators::poisson_left(double R, double x, double z) const {
  const double a = -z;
  const std::string branch = poisson_branch(R, x, z);
  const double vv = h_.V(x) * h_.V(R - x);
  if (branch == "near") return vv / (h_.V(a) * h_.V(R + a)) / ((x - z) * std::log(2.0 + 1.0 / (x - z)));
  if (branch == "far") return vv / (h_.V(a) * h_.V(R + a)) / (x - z);
  if (branch == "gaussian-large") return std::exp(-a) * h_.V(std::min(x, 1.0)) * h_.V(R - x) / (R * h_.V(a));
  if (branch == "gaussian-small") return std::exp(-a) * vv / a;
  throw UncoveredRegime("poisson_interval_comparator: no comparator for alpha = 2 with 2 < R < 4 and "
                        "(x > 2 or 2 < |z| < R)");
}

PoissonBounds poisson_interval_bounds(const HalfLine& h, double r, double x, double z, Bounds exit_time) {
  if (!(r > 0.0)) throw std::invalid_argument("poisson_interval_bounds: r must be positive");
  if (!(std::abs(x) < r)) throw std::invalid_argument("poisson_interval_bounds: requires |x| < r");
  const double a = std::abs(z);
  if (a < r) throw std::invalid_argument("poisson_interval_bounds: requires |z| >= r");
  PoissonBounds b;
  b.lower = exit_time.lower * h.jump_density(a + 2.0 * r);
  if (a == r) {
    b.upper = kInf;
    b.upper_infinite = true;
  } else {
    b.upper = exit_time.upper * h.jump_density(a - r);
  }
  return b;
}

PoissonBounds poisson_interval_bounds(const HalfLine& h, double r, double x, double z, double exit_time) {
  return poisson_interval_bounds(h, r, x, z, Bounds{exit_time, exit_time});
}

Bounds exit_time_envelope(const HalfLine& h, double R, double x, double C1) {
  check_interior(R, x, "exit_time_envelope");
  return h.exit_time_bounds(x, R, C1);
}

IntervalExitTime exit_time_interval(const HalfLine& h, double R, double x, const SimConfig& config, double C1) {
  IntervalExitTime out;
  out.envelope = exit_time_envelope(h, R, x, C1);
  SimConfig cfg = config;
  cfg.alpha = h.alpha();
  cfg.mode = h.renewal().spec().mode;
  const ExitBatch batch = run_exit(Domain::interval(R), x, cfg);
  out.mc = estimate_exit_time(batch);
  out.censored_fraction = batch.censored_fraction();
  return out;
}

}  // namespace geopot
