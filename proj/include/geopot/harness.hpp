#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "geopot/halfline.hpp"
#include "geopot/interval.hpp"
#include "geopot/montecarlo.hpp"

namespace geopot {

struct HarnessConfig {
  double band_lo = 1e-2;
  double band_hi = 1e2;
  /// Largest allowed change of a per-decade extremum between adjacent decades.
  double decade_factor = 4.0;
  /// Largest allowed relative error of any swept value.
  double max_rel_error = 0.1;
  double grid_lo = 1e-3;
  double grid_hi = 1e3;
  int grid_n = 61;
  /// Explicit sweep axis for quadrature sweeps; empty means the log grid above.
  std::vector<double> grid;
  std::size_t max_points = 10000;
  /// Monte Carlo settings for every simulation-backed check; alpha and mode
  /// are overwritten per run.
  SimConfig mc = default_mc();
  /// Paths far out on a half-line are censored here.
  double halfline_escape = 1e3;
  /// Lower-bound constant for checks that need one; 0 means measure it.
  double C1 = 0.0;

  static SimConfig default_mc();
};

enum class EstimateKind { Quadrature, MonteCarlo };

struct EstimateInfo {
  std::string id;
  std::string statement;
  EstimateKind kind;
};

/// Closed list of comparability statements that can be swept.
const std::vector<EstimateInfo>& estimate_registry();
bool is_registered(const std::string& id);

struct RatioPoint {
  std::vector<double> at;
  /// Coordinate that defines the decade of this point.
  double scale = 0.0;
  double computed = 0.0;
  double computed_error = 0.0;
  double comparator = 0.0;
  double comparator_error = 0.0;
  double ratio = 0.0;
  /// Non-empty when the point was not evaluated (outside the statement's
  /// region, diagonal, uncovered regime).
  std::string note;
};

struct DecadeExtrema {
  int decade = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t count = 0;
};

struct RatioReport {
  std::string estimate_id;
  std::string statement;
  double alpha = 0.0;
  std::vector<std::string> axes;
  std::vector<RatioPoint> points;
  std::vector<RatioPoint> skipped;
  double inf_ratio = 0.0;
  double sup_ratio = 0.0;
  std::vector<double> arg_inf;
  std::vector<double> arg_sup;
  double band_lo = 0.0;
  double band_hi = 0.0;
  double decade_factor = 0.0;
  std::vector<DecadeExtrema> per_decade;
  bool in_band = false;
  bool decade_stable = false;
  bool errors_ok = false;
  /// In band with every combined error below the limit; decade stability
  /// is reported separately and checked by accepted().
  bool pass = false;

  bool accepted() const { return pass && decade_stable; }
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// Builds a report from evaluated points: ratios, extrema, per-decade
/// stability and the pass flag. Points carrying a note go to `skipped`.
RatioReport make_ratio_report(const std::string& id, double alpha, std::vector<std::string> axes,
                              std::vector<RatioPoint> points, const HarnessConfig& config);

struct InequalityCheck {
  std::string name;
  std::string statement;
  double alpha = 0.0;
  std::string at;
  /// The check is lhs <= rhs + slack.
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  std::size_t cases = 1;
  bool pass = false;
  bool skipped = false;
  std::string skip_reason;
};

struct InequalityReport {
  std::vector<InequalityCheck> checks;
  bool pass() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct C1Report {
  double alpha = 0.0;
  double C1 = 0.0;
  /// Same measurement with a quarter of the step parameter.
  double C1_refined = 0.0;
  struct Row {
    double x, t, survival, std_error, lower_shape, ratio;
  };
  std::vector<Row> rows;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct McValue {
  double mean = 0.0;
  double std_error = 0.0;
};

struct HarnackRow {
  double r = 0.0;
  std::string target;
  std::vector<double> x;
  std::vector<McValue> h;
  double sup_over_inf = 0.0;
  bool conclusive = false;
  /// int_{|z| > p r} h nu, and h / (V^2(r) * that) over x.
  double tail = 0.0;
  double normalized_min = 0.0;
  double normalized_max = 0.0;
};

struct HarnackReport {
  double alpha = 0.0;
  double p = 1.5;
  std::vector<HarnackRow> rows;
  /// Per target set: max over r of sup/inf divided by the min over r.
  std::map<std::string, double> spread;
  double constant = 0.0;
  /// Tail-functional form: extremes over conclusive rows of h / (V^2(r) tail),
  /// times e^{5r/2} (lower) and e^{-2r} (upper) when alpha = 2.
  double tail_lower = 0.0;
  double tail_upper = 0.0;
  double spread_limit = 4.0;
  bool pass = false;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct BhpRow {
  double r = 0.0;
  std::string target;
  double x = 0.0;
  McValue h;
  double h_ratio = 0.0;
  double v_ratio = 0.0;
  /// (h(x)/h(r)) / (V(x)/V(r)).
  double q = 0.0;
};

struct BhpReport {
  double alpha = 0.0;
  std::vector<BhpRow> rows;
  double q_min = 0.0;
  double q_max = 0.0;
  /// 10, widened by e^{4r} for alpha = 2.
  double spread_limit = 10.0;
  bool pass = false;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct InteriorConstantReport {
  double alpha = 0.0;
  double R = 0.0;
  /// Largest tried a for which every check passed; 0 if none did.
  double a = 0.0;
  struct Row {
    double a, x, y_lo, y_hi, interval_mc, std_error, halfline_half;
    bool pass;
  };
  std::vector<Row> rows;
  nlohmann::json to_json() const;
};

struct CrossCheck {
  std::string name;
  double quadrature = 0.0;
  double quadrature_error = 0.0;
  double mc = 0.0;
  double mc_error = 0.0;
  double bias = 0.0;
  bool pass = false;
};

/// Verification driver. Evaluators and Monte Carlo batches are cached, so
/// checks that share simulations reuse them.
class Harness {
 public:
  explicit Harness(HarnessConfig config = {});

  const HarnessConfig& config() const { return config_; }
  const HalfLine& halfline(double alpha) const;

  RatioReport ratio_sweep(const std::string& id, double alpha) const;
  InequalityReport inequality_suite(const std::vector<double>& alphas) const;
  C1Report measure_C1(double alpha) const;
  HarnackReport check_harnack(const std::vector<double>& r_list, double alpha, double p = 1.5) const;
  BhpReport check_bhp(const std::vector<double>& r_list, double alpha) const;
  InteriorConstantReport search_interior_constant(double alpha, double R) const;

  /// Window-averaged half-line Poisson kernel vs Monte Carlo harmonic measure
  /// of [z - w/2, z + w/2] from x.
  CrossCheck cross_check_poisson(double alpha, double x, double z, double w) const;
  /// Half-line occupation of [0, R] vs Monte Carlo.
  CrossCheck cross_check_occupation(double alpha, double x, double R) const;

  /// Drops cached simulations (they hold every path).
  void clear_batches() const { batches_.clear(); }

  /// Batch of paths from x for the given domain, cached by all inputs.
  const ExitBatch& batch(double alpha, const Domain& domain, double x,
                         const std::vector<std::pair<double, double>>& windows = {}, double eta_scale = 1.0,
                         double max_time = 0.0) const;

 private:
  double C1_for(double alpha) const;
  std::vector<RatioPoint> interval_green_points(double alpha, double R, bool small) const;
  std::vector<RatioPoint> interval_poisson_points(double alpha, double R) const;

  HarnessConfig config_;
  mutable std::map<double, std::unique_ptr<HalfLine>> halflines_;
  mutable std::map<std::string, std::unique_ptr<ExitBatch>> batches_;
  mutable std::map<std::tuple<double, double, double>, KernelValue> poisson_cache_;
  mutable std::map<double, double> c1_cache_;
};

RatioReport ratio_sweep(const std::string& id, double alpha, const HarnessConfig& config = {});

/// Points of a grid spec `log:lo:hi:n`, `lin:lo:hi:n` or a comma list.
std::vector<double> parse_grid(const std::string& spec);
std::vector<double> log_grid(double lo, double hi, int n);

enum class Format { Json, Csv };
Format parse_format(const std::string& name);

/// Writes a report as canonical JSON (sorted keys, trailing newline) or CSV.
template <class Report>
void emit(const Report& report, Format format, const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

template <class Report>
void emit(const Report& report, Format format, const std::filesystem::path& path) {
  write_text(path, format == Format::Json ? report.to_json().dump(2) + "\n" : report.to_csv());
}

}  // namespace geopot
