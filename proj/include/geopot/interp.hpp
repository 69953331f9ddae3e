#pragma once

#include <cstddef>
#include <vector>

namespace geopot {

/// Cubic Hermite interpolant on a uniform grid with caller-supplied node
/// slopes. When `monotone_limit` is set, slopes are clipped with the
/// Fritsch-Carlson condition so monotone data stays monotone.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(double lo, double step, std::vector<double> values, std::vector<double> slopes,
               bool monotone_limit = false);

  double operator()(double t) const;
  double derivative(double t) const;

  double lo() const { return lo_; }
  double hi() const { return lo_ + step_ * static_cast<double>(values_.size() - 1); }
  double step() const { return step_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  bool contains(double t) const { return !values_.empty() && t >= lo() && t <= hi(); }

 private:
  double lo_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// Piecewise-cubic Hermite with Fritsch-Carlson slopes computed from the data
/// (PCHIP); used where exact derivatives are not available.
HermiteTable make_pchip(double lo, double step, std::vector<double> values);

}  // namespace geopot
