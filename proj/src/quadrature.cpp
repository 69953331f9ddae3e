#include "geopot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace geopot {
namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv1[7], fv2[7];
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    const double sum = fv1[j] + fv2[j];
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  // QUADPACK qk15 error heuristic.
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  asc *= std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && error != 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  error = std::max(error, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod * half));
  if (!std::isfinite(kronrod)) error = std::numeric_limits<double>::infinity();
  return {a, b, kronrod * half, error};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opt) {
  QuadResult out;
  if (a == b) return out;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::priority_queue<Panel> panels;
  Panel first = kronrod15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  panels.push(first);
  int evals = 15;
  int count = 1;
  constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();
  while (true) {
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (total_err <= tol) break;
    if (count >= opt.max_intervals) {
      if (opt.throw_on_failure)
        throw NonConvergence("adaptive quadrature did not converge", sign * total, total_err);
      break;
    }
    Panel worst = panels.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      if (worst.error <= kRoundoff * std::abs(total)) break;
      if (opt.throw_on_failure)
        throw NonConvergence("quadrature panel underflow", sign * total, total_err);
      break;
    }
    panels.pop();
    Panel left = kronrod15(f, worst.a, mid);
    Panel right = kronrod15(f, mid, worst.b);
    evals += 30;
    ++count;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    if (!std::isfinite(total)) {
      throw NonConvergence("non-finite integrand value", total, total_err);
    }
  }
  // Recompute the sums to shed accumulated cancellation in the running totals.
  double value = 0.0, err = 0.0;
  std::vector<Panel> all;
  all.reserve(panels.size());
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  for (const auto& p : all) {
    value += p.value;
    err += p.error;
  }
  out.value = sign * value;
  out.abs_error = err;
  out.evaluations = evals;
  return out;
}

QuadResult integrate_to_infinity(const Integrand& f, double a, double scale, const QuadOptions& opt) {
  auto g = [&](double u) {
    const double t = a + scale * (1.0 - u) / u;
    const double jac = scale / (u * u);
    const double v = f(t);
    return v == 0.0 ? 0.0 : v * jac;
  };
  return integrate(g, 0.0, 1.0, opt);
}

QuadResult integrate_algebraic_tail(const Integrand& f, double a, double scale, const QuadOptions& opt) {
  auto g = [&](double u) {
    const double t = a + scale * (1.0 / (u * u) - 1.0);
    const double jac = 2.0 * scale / (u * u * u);
    const double v = f(t);
    return v == 0.0 ? 0.0 : v * jac;
  };
  return integrate(g, 0.0, 1.0, opt);
}

}  // namespace geopot
