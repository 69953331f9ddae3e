#include "geopot/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geopot {

HermiteTable::HermiteTable(double lo, double step, std::vector<double> values, std::vector<double> slopes,
                           bool monotone_limit)
    : lo_(lo), step_(step), values_(std::move(values)), slopes_(std::move(slopes)) {
  if (values_.size() < 2 || values_.size() != slopes_.size() || !(step_ > 0.0))
    throw std::invalid_argument("HermiteTable: need >= 2 nodes, matching slopes and positive step");
  if (!monotone_limit) return;
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
    const double secant = (values_[i + 1] - values_[i]) / step_;
    if (secant == 0.0) {
      slopes_[i] = slopes_[i + 1] = 0.0;
      continue;
    }
    const double a = slopes_[i] / secant;
    const double b = slopes_[i + 1] / secant;
    if (a < 0.0) slopes_[i] = 0.0;
    if (b < 0.0) slopes_[i + 1] = 0.0;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      slopes_[i] = tau * a * secant;
      slopes_[i + 1] = tau * b * secant;
    }
  }
}

double HermiteTable::operator()(double t) const {
  const double pos = (t - lo_) / step_;
  const auto last = static_cast<double>(values_.size() - 1);
  const double clamped = std::clamp(pos, 0.0, last);
  auto i = static_cast<std::size_t>(std::min(std::floor(clamped), last - 1.0));
  const double s = pos - static_cast<double>(i);
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * values_[i] + h10 * step_ * slopes_[i] + h01 * values_[i + 1] + h11 * step_ * slopes_[i + 1];
}

double HermiteTable::derivative(double t) const {
  const double pos = (t - lo_) / step_;
  const auto last = static_cast<double>(values_.size() - 1);
  const double clamped = std::clamp(pos, 0.0, last);
  auto i = static_cast<std::size_t>(std::min(std::floor(clamped), last - 1.0));
  const double s = pos - static_cast<double>(i);
  const double s2 = s * s;
  const double d00 = 6 * s2 - 6 * s;
  const double d10 = 3 * s2 - 4 * s + 1;
  const double d01 = -6 * s2 + 6 * s;
  const double d11 = 3 * s2 - 2 * s;
  return (d00 * values_[i] + d01 * values_[i + 1]) / step_ + d10 * slopes_[i] + d11 * slopes_[i + 1];
}

HermiteTable make_pchip(double lo, double step, std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw std::invalid_argument("make_pchip: need >= 2 nodes");
  std::vector<double> secant(n - 1), slopes(n);
  for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (values[i + 1] - values[i]) / step;
  slopes[0] = secant[0];
  slopes[n - 1] = secant[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (secant[i - 1] * secant[i] <= 0.0) {
      slopes[i] = 0.0;
    } else {
      slopes[i] = 2.0 / (1.0 / secant[i - 1] + 1.0 / secant[i]);
    }
  }
  return HermiteTable(lo, step, std::move(values), std::move(slopes), true);
}

}  // namespace geopot
