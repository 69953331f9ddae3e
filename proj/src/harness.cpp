#include "geopot/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "geopot/renewal.hpp"
#include "geopot/stable_ref.hpp"

namespace geopot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no infinities; they are written as strings.
nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

nlohmann::json nums(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double d : v) a.push_back(num(d));
  return a;
}

QuadResult integrate_cut(const Integrand& f, double a, double b, std::vector<double> cuts, double rel) {
  QuadOptions opt;
  opt.rel_tol = rel;
  opt.abs_tol = 1e-300;
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  QuadResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = std::max(a, cuts[i]), hi = std::min(b, cuts[i + 1]);
    if (hi > lo) total = total + integrate(f, lo, hi, opt);
  }
  return total;
}

// Integral of the jump density over [a, b] (b may be infinite), a > 0.
double nu_mass(const HalfLine& h, double a, double b) {
  auto f = [&](double t) { return h.jump_density(t); };
  QuadOptions opt;
  opt.rel_tol = 1e-8;
  opt.abs_tol = 1e-300;
  if (std::isinf(b)) return integrate_to_infinity(f, a, std::max(a, 1.0), opt).value;
  // Integrate in log t: the density is steep near 0.
  auto g = [&](double s) {
    const double t = std::exp(s);
    return t * h.jump_density(t);
  };
  return integrate(g, std::log(a), std::log(b), opt).value;
}

InequalityCheck make_check(std::string name, std::string statement, double alpha, std::string at) {
  InequalityCheck c;
  c.name = std::move(name);
  c.statement = std::move(statement);
  c.alpha = alpha;
  c.at = std::move(at);
  return c;
}

// Short form for labels.
std::string lbl(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

int decade_of(double scale) { return static_cast<int>(std::floor(std::log10(scale) + 1e-9)); }

const std::vector<double> kXFractions{0.05, 0.2, 0.4, 0.6, 0.95};
const std::vector<double> kYFractions{0.1, 0.3, 0.5, 0.7, 0.9};
constexpr double kWindowFraction = 0.05;
const std::vector<double> kZCentres{0.05, 0.2, 0.6, 1.5, 3.0};

}  // namespace

SimConfig HarnessConfig::default_mc() {
  SimConfig c;
  c.step_rule = StepRule::Adaptive;
  c.eta = 0.02;
  c.n_paths = 100000;
  c.seed = 1;
  return c;
}

const std::vector<EstimateInfo>& estimate_registry() {
  static const std::vector<EstimateInfo> registry{
      {"lem4.1-V", "V(x) ~ log^{-1/2}(1 + x^{-alpha})", EstimateKind::Quadrature},
      {"lem4.1-Vprime", "V'(x) ~ 1/(x log^{3/2}(1 + x^{-alpha/3}))", EstimateKind::Quadrature},
      {"prop2.1-psidagger", "psi_dagger(xi) ~ Psi(xi)^{1/2}", EstimateKind::Quadrature},
      {"prop2.1-V", "V(x) ~ Psi(1/x)^{-1/2}", EstimateKind::Quadrature},
      {"prop2.1-Vprime-large", "V'(x) ~ 1/(x Psi(1/x)^{1/2}), x >= 1", EstimateKind::Quadrature},
      {"eq-Vprime-approx", "V'(x) ~ V(x)/(x log(2 + 1/x))", EstimateKind::Quadrature},
      {"lem4.2-IntV1", "int_0^x V ~ x V(x)", EstimateKind::Quadrature},
      {"lem4.2-IntV2", "int_1^x V(y)/y dy ~ V(x), x >= 2", EstimateKind::Quadrature},
      {"lem4.2-IntV3", "int_x^1 V(y)/y dy ~ 1/V(x), x <= 1/2", EstimateKind::Quadrature},
      {"lem4.2-IntV4", "int_x^1 V^b(y)/y^2 dy ~ V^b(x)/x, x <= 1/2, b in {3, 6}", EstimateKind::Quadrature},
      {"eq-GcomphatG", "stable half-line Green ~ G-hat, x, y > 1/2 (and |x - y| > 1/2 if alpha = 1)",
       EstimateKind::Quadrature},
      {"thm4.4-green-halfline", "G(x, y) ~ (1 ^ V(x)V(y)/V^2(d)) / (d log^2(2 + 1/d)) + G-hat(x, y)",
       EstimateKind::Quadrature},
      {"rem4.5-far", "G(x, y) ~ G-hat(x, y) for |x - y| > 1", EstimateKind::Quadrature},
      {"rem4.5-near", "G(x, y) ~ (1 ^ V(x)V(y)/V^2(d)) / (d log^2(1 + 1/d)) for x, y < 4",
       EstimateKind::Quadrature},
      {"lem4.6-poisson-far", "P(x, z) ~ far-field form for x v |z| >= 1", EstimateKind::Quadrature},
      {"thm4.6-poisson-halfline", "P(x, z) ~ V(x)/V(|z|) / ((x - z) log(2 + 1/(x - z))) (alpha = 2: e^z form)",
       EstimateKind::Quadrature},
      {"rem4.7-poisson-near", "P(x, z) ~ truncated singular integral for -1 < z < 0 < x < 1",
       EstimateKind::Quadrature},
      {"thm6.2-green-interval-small", "G_(0,R) ~ singular-factor form, R < 4 (Monte Carlo occupation)",
       EstimateKind::MonteCarlo},
      {"thm6.3-green-interval-large", "G_(0,R) ~ half-line Greens / G-hat_(0,R), R >= 4 (Monte Carlo occupation)",
       EstimateKind::MonteCarlo},
      {"thm6.4-poisson-interval", "P_(0,R)(x, z) ~ interval Poisson comparator (Monte Carlo harmonic measure)",
       EstimateKind::MonteCarlo},
  };
  return registry;
}

bool is_registered(const std::string& id) {
  const auto& r = estimate_registry();
  return std::any_of(r.begin(), r.end(), [&](const EstimateInfo& e) { return e.id == id; });
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi >= lo && n >= 1)) throw std::invalid_argument("log_grid: need 0 < lo <= hi and n >= 1");
  std::vector<double> g(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < n; ++i) g[i] = n == 1 ? lo : std::pow(10.0, a + (b - a) * i / (n - 1));
  return g;
}

std::vector<double> parse_grid(const std::string& spec) {
  auto fail = [&] { return std::invalid_argument("bad grid spec '" + spec + "'"); };
  auto to_d = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw fail();
    }
    if (pos != s.size()) throw fail();
    return v;
  };
  if (spec.rfind("log:", 0) == 0 || spec.rfind("lin:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec.substr(4));
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw fail();
    const double lo = to_d(parts[0]), hi = to_d(parts[1]);
    const double nd = to_d(parts[2]);
    if (nd < 1 || nd != std::floor(nd)) throw fail();
    const int n = static_cast<int>(nd);
    if (spec[1] == 'o') {
      if (!(lo > 0.0 && hi >= lo)) throw fail();
      return log_grid(lo, hi, n);
    }
    if (!(hi >= lo)) throw fail();
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return g;
  }
  std::vector<double> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(to_d(item));
  if (out.empty()) throw fail();
  return out;
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw std::invalid_argument("unknown format '" + name + "' (json or csv)");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Reports

RatioReport make_ratio_report(const std::string& id, double alpha, std::vector<std::string> axes,
                              std::vector<RatioPoint> points, const HarnessConfig& config) {
  RatioReport rep;
  rep.estimate_id = id;
  for (const auto& e : estimate_registry())
    if (e.id == id) rep.statement = e.statement;
  rep.alpha = alpha;
  rep.axes = std::move(axes);
  rep.band_lo = config.band_lo;
  rep.band_hi = config.band_hi;
  rep.decade_factor = config.decade_factor;
  rep.inf_ratio = kInf;
  rep.sup_ratio = -kInf;
  rep.in_band = true;
  rep.errors_ok = true;
  std::map<int, DecadeExtrema> decades;
  for (auto& p : points) {
    if (!p.note.empty()) {
      if (p.comparator != 0.0) p.ratio = p.computed / p.comparator;
      rep.skipped.push_back(p);
      continue;
    }
    p.ratio = p.computed / p.comparator;
    if (!(p.ratio >= rep.band_lo && p.ratio <= rep.band_hi)) rep.in_band = false;
    const double rel = p.computed_error / std::abs(p.computed) + p.comparator_error / std::abs(p.comparator);
    if (!(rel < config.max_rel_error)) rep.errors_ok = false;
    if (p.ratio < rep.inf_ratio || rep.arg_inf.empty()) {
      rep.inf_ratio = p.ratio;
      rep.arg_inf = p.at;
    }
    if (p.ratio > rep.sup_ratio || rep.arg_sup.empty()) {
      rep.sup_ratio = p.ratio;
      rep.arg_sup = p.at;
    }
    if (p.scale > 0.0 && std::isfinite(p.ratio)) {
      const int d = decade_of(p.scale);
      auto [it, fresh] = decades.try_emplace(d, DecadeExtrema{d, p.ratio, p.ratio, 0});
      it->second.min_ratio = std::min(it->second.min_ratio, p.ratio);
      it->second.max_ratio = std::max(it->second.max_ratio, p.ratio);
      ++it->second.count;
    }
    rep.points.push_back(std::move(p));
  }
  rep.decade_stable = true;
  for (const auto& [d, e] : decades) {
    rep.per_decade.push_back(e);
    auto next = decades.find(d + 1);
    if (next == decades.end()) continue;
    auto change = [](double a, double b) { return std::max(a / b, b / a); };
    if (!(change(e.min_ratio, next->second.min_ratio) < rep.decade_factor) ||
        !(change(e.max_ratio, next->second.max_ratio) < rep.decade_factor))
      rep.decade_stable = false;
  }
  if (rep.points.empty()) {
    rep.inf_ratio = rep.sup_ratio = std::numeric_limits<double>::quiet_NaN();
    rep.in_band = false;
  }
  rep.pass = rep.in_band && rep.errors_ok;
  return rep;
}

nlohmann::json RatioReport::to_json() const {
  nlohmann::json j;
  j["estimate_id"] = estimate_id;
  j["statement"] = statement;
  j["alpha"] = alpha;
  j["axes"] = axes;
  j["inf_ratio"] = num(inf_ratio);
  j["sup_ratio"] = num(sup_ratio);
  j["arg_inf"] = nums(arg_inf);
  j["arg_sup"] = nums(arg_sup);
  j["band"] = {band_lo, band_hi};
  j["decade_factor"] = decade_factor;
  j["in_band"] = in_band;
  j["decade_stable"] = decade_stable;
  j["errors_ok"] = errors_ok;
  j["pass"] = pass;
  j["accepted"] = accepted();
  nlohmann::json dec = nlohmann::json::array();
  for (const auto& d : per_decade)
    dec.push_back({{"decade", d.decade}, {"min_ratio", num(d.min_ratio)}, {"max_ratio", num(d.max_ratio)},
                   {"count", d.count}});
  j["per_decade_extrema"] = dec;
  auto point_json = [](const RatioPoint& p) {
    return nlohmann::json{{"at", nums(p.at)},
                          {"scale", num(p.scale)},
                          {"computed", num(p.computed)},
                          {"computed_error", num(p.computed_error)},
                          {"comparator", num(p.comparator)},
                          {"comparator_error", num(p.comparator_error)},
                          {"ratio", num(p.ratio)},
                          {"note", p.note}};
  };
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) pts.push_back(point_json(p));
  j["points"] = pts;
  nlohmann::json sk = nlohmann::json::array();
  for (const auto& p : skipped) sk.push_back(point_json(p));
  j["skipped"] = sk;
  return j;
}

std::string RatioReport::to_csv() const {
  std::ostringstream out;
  nlohmann::json meta{{"estimate_id", estimate_id}, {"alpha", alpha}, {"pass", pass},
                      {"decade_stable", decade_stable}, {"accepted", accepted()},
                      {"inf_ratio", num(inf_ratio)}, {"sup_ratio", num(sup_ratio)}};
  out << "# " << meta.dump() << "\n";
  for (const auto& a : axes) out << a << ',';
  out << "scale,computed,computed_error,comparator,comparator_error,ratio,note\n";
  auto row = [&](const RatioPoint& p) {
    for (double v : p.at) out << fmt(v) << ',';
    out << fmt(p.scale) << ',' << fmt(p.computed) << ',' << fmt(p.computed_error) << ',' << fmt(p.comparator)
        << ',' << fmt(p.comparator_error) << ',' << fmt(p.ratio) << ',' << p.note << '\n';
  };
  for (const auto& p : points) row(p);
  for (const auto& p : skipped) row(p);
  return out.str();
}

bool InequalityReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.skipped || c.pass; });
}

nlohmann::json InequalityReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name},
                   {"statement", c.statement},
                   {"alpha", c.alpha},
                   {"at", c.at},
                   {"lhs", num(c.lhs)},
                   {"rhs", num(c.rhs)},
                   {"slack", num(c.slack)},
                   {"cases", c.cases},
                   {"pass", c.pass},
                   {"skipped", c.skipped},
                   {"skip_reason", c.skip_reason}});
  return {{"suite", "inequalities"}, {"pass", pass()}, {"checks", arr}};
}

std::string InequalityReport::to_csv() const {
  std::ostringstream out;
  out << "# " << nlohmann::json{{"suite", "inequalities"}, {"pass", pass()}}.dump() << "\n";
  out << "name,alpha,at,lhs,rhs,slack,cases,pass,skipped,skip_reason\n";
  for (const auto& c : checks)
    out << c.name << ',' << fmt(c.alpha) << ",\"" << c.at << "\"," << fmt(c.lhs) << ',' << fmt(c.rhs) << ','
        << fmt(c.slack) << ',' << c.cases << ',' << c.pass << ',' << c.skipped << ",\"" << c.skip_reason << "\"\n";
  return out.str();
}

nlohmann::json C1Report::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows)
    rows_j.push_back({{"x", r.x},
                      {"t", r.t},
                      {"survival", r.survival},
                      {"std_error", r.std_error},
                      {"lower_shape", r.lower_shape},
                      {"ratio", num(r.ratio)}});
  return {{"alpha", alpha}, {"C1", C1}, {"C1_refined", C1_refined}, {"rows", rows_j}};
}

std::string C1Report::to_csv() const {
  std::ostringstream out;
  out << "# " << nlohmann::json{{"alpha", alpha}, {"C1", C1}, {"C1_refined", C1_refined}}.dump() << "\n";
  out << "x,t,survival,std_error,lower_shape,ratio\n";
  for (const auto& r : rows)
    out << fmt(r.x) << ',' << fmt(r.t) << ',' << fmt(r.survival) << ',' << fmt(r.std_error) << ','
        << fmt(r.lower_shape) << ',' << fmt(r.ratio) << '\n';
  return out.str();
}

nlohmann::json HarnackReport::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json h = nlohmann::json::array();
    for (const auto& v : r.h) h.push_back({v.mean, v.std_error});
    rows_j.push_back({{"r", r.r},
                      {"target", r.target},
                      {"x", r.x},
                      {"h", h},
                      {"sup_over_inf", num(r.sup_over_inf)},
                      {"conclusive", r.conclusive},
                      {"tail", num(r.tail)},
                      {"normalized_min", num(r.normalized_min)},
                      {"normalized_max", num(r.normalized_max)}});
  }
  nlohmann::json spread_j;
  for (const auto& [k, v] : spread) spread_j[k] = num(v);
  return {{"alpha", alpha},
          {"p", p},
          {"rows", rows_j},
          {"spread", spread_j},
          {"constant", num(constant)},
          {"tail_lower", num(tail_lower)},
          {"tail_upper", num(tail_upper)},
          {"spread_limit", spread_limit},
          {"pass", pass}};
}

std::string HarnackReport::to_csv() const {
  std::ostringstream out;
  out << "# " << nlohmann::json{{"alpha", alpha}, {"p", p}, {"pass", pass}, {"constant", num(constant)}}.dump()
      << "\n";
  out << "r,target,x,h,h_std_error,sup_over_inf,conclusive,tail\n";
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.x.size(); ++i)
      out << fmt(r.r) << ',' << r.target << ',' << fmt(r.x[i]) << ',' << fmt(r.h[i].mean) << ','
          << fmt(r.h[i].std_error) << ',' << fmt(r.sup_over_inf) << ',' << r.conclusive << ',' << fmt(r.tail)
          << '\n';
  return out.str();
}

nlohmann::json BhpReport::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows)
    rows_j.push_back({{"r", r.r},
                      {"target", r.target},
                      {"x", r.x},
                      {"h", {r.h.mean, r.h.std_error}},
                      {"h_ratio", num(r.h_ratio)},
                      {"v_ratio", num(r.v_ratio)},
                      {"q", num(r.q)}});
  return {{"alpha", alpha},   {"rows", rows_j}, {"q_min", num(q_min)}, {"q_max", num(q_max)},
          {"spread_limit", spread_limit}, {"pass", pass}};
}

std::string BhpReport::to_csv() const {
  std::ostringstream out;
  out << "# " << nlohmann::json{{"alpha", alpha}, {"pass", pass}}.dump() << "\n";
  out << "r,target,x,h,h_std_error,h_ratio,v_ratio,q\n";
  for (const auto& r : rows)
    out << fmt(r.r) << ',' << r.target << ',' << fmt(r.x) << ',' << fmt(r.h.mean) << ',' << fmt(r.h.std_error)
        << ',' << fmt(r.h_ratio) << ',' << fmt(r.v_ratio) << ',' << fmt(r.q) << '\n';
  return out.str();
}

nlohmann::json InteriorConstantReport::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows)
    rows_j.push_back({{"a", r.a},
                      {"x", r.x},
                      {"window", {r.y_lo, r.y_hi}},
                      {"interval_mc", r.interval_mc},
                      {"std_error", r.std_error},
                      {"halfline_half", r.halfline_half},
                      {"pass", r.pass}});
  return {{"alpha", alpha}, {"R", R}, {"a", a}, {"rows", rows_j}};
}

// ---------------------------------------------------------------------------
// Harness

Harness::Harness(HarnessConfig config) : config_(std::move(config)) {}

RatioReport ratio_sweep(const std::string& id, double alpha, const HarnessConfig& config) {
  return Harness(config).ratio_sweep(id, alpha);
}

const HalfLine& Harness::halfline(double alpha) const {
  auto it = halflines_.find(alpha);
  if (it == halflines_.end())
    it = halflines_.emplace(alpha, std::make_unique<HalfLine>(ProcessSpec::geometric(alpha))).first;
  return *it->second;
}

const ExitBatch& Harness::batch(double alpha, const Domain& domain, double x,
                                const std::vector<std::pair<double, double>>& windows, double eta_scale,
                                double max_time) const {
  std::string key = fmt(alpha) + "|" + domain.describe() + "|" + fmt(x) + "|" + fmt(eta_scale) + "|" + fmt(max_time);
  for (const auto& w : windows) key += "|" + fmt(w.first) + "," + fmt(w.second);
  auto it = batches_.find(key);
  if (it != batches_.end()) return *it->second;
  SimConfig cfg = config_.mc;
  cfg.alpha = alpha;
  cfg.mode = Mode::GeometricStable;
  cfg.windows = windows;
  if (cfg.step_rule == StepRule::Adaptive)
    cfg.eta *= eta_scale;
  else if (cfg.h > 0.0)
    cfg.h *= eta_scale;
  else
    cfg.h = default_step(domain, x, alpha) * eta_scale;
  if (max_time > 0.0) cfg.max_time = max_time;
  if (std::isinf(domain.hi)) cfg.escape = config_.halfline_escape;
  auto b = std::make_unique<ExitBatch>(run_exit(domain, x, cfg));
  return *batches_.emplace(key, std::move(b)).first->second;
}

std::vector<RatioPoint> Harness::interval_green_points(double alpha, double R, bool small) const {
  const HalfLine& h = halfline(alpha);
  const IntervalComparators cmp(h);
  const double w = kWindowFraction * R;
  std::vector<std::pair<double, double>> windows;
  for (double f : kYFractions) windows.emplace_back(f * R - 0.5 * w, f * R + 0.5 * w);
  std::vector<RatioPoint> pts;
  for (double fx : kXFractions) {
    const double x = fx * R;
    const ExitBatch& b = batch(alpha, Domain::interval(R), x, windows);
    for (std::size_t k = 0; k < windows.size(); ++k) {
      const auto [lo, hi] = windows[k];
      const McEstimate occ = estimate_occupation(b, k);
      RatioPoint p;
      p.at = {R, x, kYFractions[k] * R};
      p.scale = std::abs(kYFractions[k] * R - x);
      p.computed = occ.mean / w;
      p.computed_error = occ.std_error / w;
      auto f = [&](double y) { return small ? cmp.green_small(R, x, y) : cmp.green_large(R, x, y); };
      const QuadResult q = integrate_cut(f, lo, hi, {x - 1.0, x + 1.0}, 1e-6);
      p.comparator = q.value / w;
      p.comparator_error = q.abs_error / w;
      if (small && interval_regime(R) != IntervalRegime::Small) p.note = "R >= 4: outside the small-interval regime, shown for comparison";
      pts.push_back(p);
    }
  }
  return pts;
}

std::vector<RatioPoint> Harness::interval_poisson_points(double alpha, double R) const {
  const HalfLine& h = halfline(alpha);
  const IntervalComparators cmp(h);
  std::vector<RatioPoint> pts;
  for (double fx : kXFractions) {
    const double x = fx * R;
    const ExitBatch& b = batch(alpha, Domain::interval(R), x);
    for (double c : kZCentres) {
      const double lo = -1.25 * c, hi = -0.75 * c, w = hi - lo;
      RatioPoint p;
      p.at = {R, x, -c};
      p.scale = x + c;
      try {
        auto f = [&](double z) { return cmp.poisson(R, x, z); };
        const double cap = std::min(2.0, R);
        const QuadResult q = integrate_cut(f, lo, hi, {-cap, -R}, 1e-8);
        p.comparator = q.value / w;
        p.comparator_error = q.abs_error / w;
      } catch (const UncoveredRegime&) {
        p.note = "uncovered regime";
        pts.push_back(p);
        continue;
      }
      const McEstimate m = estimate_harmonic_measure(b, {{lo, hi}});
      p.computed = m.mean / w;
      p.computed_error = m.std_error / w;
      pts.push_back(p);
    }
  }
  return pts;
}

RatioReport Harness::ratio_sweep(const std::string& id, double alpha) const {
  if (!is_registered(id)) throw std::invalid_argument("unregistered estimate_id '" + id + "'");
  const HalfLine& h = halfline(alpha);
  const RenewalEvaluator& v = h.renewal();
  const ProcessSpec& spec = v.spec();
  std::vector<double> g = config_.grid.empty() ? log_grid(config_.grid_lo, config_.grid_hi, config_.grid_n) : config_.grid;
  std::vector<RatioPoint> pts;

  auto one_d = [&](auto&& eval) {
    for (double x : g) {
      RatioPoint p;
      p.at = {x};
      p.scale = x;
      eval(x, p);
      pts.push_back(p);
    }
  };
  // Pairs of grid points, thinned to max_points.
  auto pairs = [&]() {
    std::vector<double> axis = g;
    const auto cap = static_cast<std::size_t>(std::sqrt(static_cast<double>(config_.max_points)));
    if (axis.size() > cap) {
      std::vector<double> thin;
      for (std::size_t i = 0; i < cap; ++i) thin.push_back(axis[i * (axis.size() - 1) / (cap - 1)]);
      axis = thin;
    }
    return axis;
  };

  if (id == "lem4.1-V" || id == "prop2.1-V") {
    one_d([&](double x, RatioPoint& p) {
      const Estimate e = v.V_with_error(x);
      p.computed = e.value;
      p.computed_error = e.abs_error;
      p.comparator = id == "lem4.1-V" ? V_comparator(alpha, x) : 1.0 / std::sqrt(big_psi(spec, 1.0 / x));
    });
    return make_ratio_report(id, alpha, {"x"}, pts, config_);
  }
  if (id == "lem4.1-Vprime" || id == "eq-Vprime-approx" || id == "prop2.1-Vprime-large") {
    one_d([&](double x, RatioPoint& p) {
      if (id == "prop2.1-Vprime-large" && x < 1.0) {
        p.note = "x < 1";
        return;
      }
      const Estimate e = v.Vprime_with_error(x);
      p.computed = e.value;
      p.computed_error = e.abs_error;
      if (id == "lem4.1-Vprime")
        p.comparator = Vprime_comparator(alpha, x);
      else if (id == "eq-Vprime-approx")
        p.comparator = v.V(x) / (x * std::log(2.0 + 1.0 / x));
      else
        p.comparator = 1.0 / (x * std::sqrt(big_psi(spec, 1.0 / x)));
    });
    return make_ratio_report(id, alpha, {"x"}, pts, config_);
  }
  if (id == "prop2.1-psidagger") {
    one_d([&](double xi, RatioPoint& p) {
      const Estimate e = v.psi_dagger().evaluate(xi);
      p.computed = e.value;
      p.computed_error = e.abs_error;
      p.comparator = std::sqrt(big_psi(spec, xi));
    });
    return make_ratio_report(id, alpha, {"xi"}, pts, config_);
  }
  if (id.rfind("lem4.2-IntV", 0) == 0) {
    const char which = id.back();
    for (double x : g) {
      const IntegralIdentities ids = int_identities(v, x);
      std::vector<std::pair<double, const IdentityPair*>> sel;
      if (which == '1') sel = {{0.0, &ids.int1}};
      if (which == '2') sel = {{0.0, &ids.int2}};
      if (which == '3') sel = {{0.0, &ids.int3}};
      if (which == '4') sel = {{3.0, &ids.int4_beta3}, {6.0, &ids.int4_beta6}};
      for (const auto& [beta, pair] : sel) {
        RatioPoint p;
        p.at = which == '4' ? std::vector<double>{x, beta} : std::vector<double>{x};
        p.scale = x;
        if (!pair->valid) {
          p.note = pair->skip_reason;
        } else {
          p.computed = pair->lhs;
          p.computed_error = pair->abs_error;
          p.comparator = pair->rhs;
        }
        pts.push_back(p);
      }
    }
    return make_ratio_report(id, alpha, which == '4' ? std::vector<std::string>{"x", "beta"} : std::vector<std::string>{"x"},
                             pts, config_);
  }
  if (id == "eq-GcomphatG" || id == "thm4.4-green-halfline" || id == "rem4.5-far" || id == "rem4.5-near") {
    const double norm = std::pow(std::tgamma(1.0 + 0.5 * alpha), -2.0);
    const std::vector<double> axis = pairs();
    for (double x : axis)
      for (double y : axis) {
        RatioPoint p;
        p.at = {x, y};
        const double d = std::abs(x - y);
        p.scale = d;
        if (d == 0.0) {
          p.note = "diagonal";
        } else if (id == "eq-GcomphatG" && (x <= 0.5 || y <= 0.5 || (alpha == 1.0 && d <= 0.5))) {
          p.note = "outside x, y > 1/2";
        } else if (id == "rem4.5-far" && d <= 1.0) {
          p.note = "|x - y| <= 1";
        } else if (id == "rem4.5-near" && (x >= 4.0 || y >= 4.0)) {
          p.note = "x or y >= 4";
        }
        if (!p.note.empty()) {
          pts.push_back(p);
          continue;
        }
        if (id == "eq-GcomphatG") {
          p.computed = norm * green_stable_halfline(alpha, x, y);
          p.computed_error = 1e-10 * p.computed;
          p.comparator = h.ghat(x, y);
        } else {
          const KernelValue gv = h.green(x, y);
          p.computed = gv.value;
          p.computed_error = gv.abs_error;
          if (id == "thm4.4-green-halfline")
            p.comparator = h.green_comparator(x, y);
          else if (id == "rem4.5-far")
            p.comparator = h.ghat(x, y);
          else
            p.comparator = h.green_comparator_near(x, y);
        }
        pts.push_back(p);
      }
    return make_ratio_report(id, alpha, {"x", "y"}, pts, config_);
  }
  if (id == "lem4.6-poisson-far" || id == "thm4.6-poisson-halfline" || id == "rem4.7-poisson-near") {
    const std::vector<double> axis = pairs();
    for (double x : axis)
      for (double a : axis) {
        const double z = -a;
        RatioPoint p;
        p.at = {x, z};
        p.scale = x - z;
        if (id == "lem4.6-poisson-far" && std::max(x, a) < 1.0) p.note = "x v |z| < 1";
        if (id == "rem4.7-poisson-near" && (x >= 1.0 || a >= 1.0)) p.note = "outside -1 < z < 0 < x < 1";
        if (!p.note.empty()) {
          pts.push_back(p);
          continue;
        }
        // alpha = 2 values carry a common e^{z} factor; compare without it.
        const auto key = std::make_tuple(alpha, x, z);
        auto it = poisson_cache_.find(key);
        if (it == poisson_cache_.end()) it = poisson_cache_.emplace(key, h.poisson_scaled(x, z)).first;
        p.computed = it->second.value;
        p.computed_error = it->second.abs_error;
        if (id == "lem4.6-poisson-far") {
          p.comparator = h.poisson_comparator_far_scaled(x, z);
        } else if (id == "thm4.6-poisson-halfline") {
          p.comparator = h.poisson_comparator_scaled(x, z);
        } else {
          const KernelValue c = h.poisson_comparator_near(x, z);
          const double unscale = alpha == 2.0 ? std::exp(-z) : 1.0;
          p.comparator = c.value * unscale;
          p.comparator_error = c.abs_error * unscale;
        }
        pts.push_back(p);
      }
    return make_ratio_report(id, alpha, {"x", "z"}, pts, config_);
  }
  if (id == "thm6.2-green-interval-small" || id == "thm6.3-green-interval-large") {
    const bool small = id == "thm6.2-green-interval-small";
    for (double R : small ? std::vector<double>{1.0, 4.0} : std::vector<double>{4.0, 16.0}) {
      auto more = interval_green_points(alpha, R, small);
      pts.insert(pts.end(), more.begin(), more.end());
    }
    return make_ratio_report(id, alpha, {"R", "x", "y"}, pts, config_);
  }
  // thm6.4-poisson-interval
  for (double R : {1.0, 8.0}) {
    auto more = interval_poisson_points(alpha, R);
    pts.insert(pts.end(), more.begin(), more.end());
  }
  return make_ratio_report(id, alpha, {"R", "x", "z"}, pts, config_);
}

// ---------------------------------------------------------------------------
// Hard inequalities

InequalityReport Harness::inequality_suite(const std::vector<double>& alphas) const {
  InequalityReport rep;
  for (double alpha : alphas) {
    const HalfLine& h = halfline(alpha);
    const RenewalEvaluator& v = h.renewal();

    {  // Subadditivity of V on random pairs.
      InequalityCheck c = make_check("subadditivity", "V(x + y) <= V(x) + V(y)", alpha, "10^4 log-uniform pairs in [1e-3, 1e3]");
      std::mt19937_64 rng(config_.mc.seed);
      std::uniform_real_distribution<double> u(-3.0, 3.0);
      double worst = -kInf;
      c.cases = 10000;
      c.pass = true;
      for (std::size_t i = 0; i < c.cases; ++i) {
        const double x = std::pow(10.0, u(rng)), y = std::pow(10.0, u(rng));
        const double lhs = v.V(x + y), rhs = v.V(x) + v.V(y);
        const double slack = 4.0 * v.table_rel_error() * rhs + 1e-14 * rhs;
        if (lhs - rhs > worst) {
          worst = lhs - rhs;
          c.lhs = lhs;
          c.rhs = rhs;
          c.slack = slack;
          c.at = "x=" + lbl(x) + " y=" + lbl(y) + " (largest lhs - rhs)";
        }
        if (lhs > rhs + slack) c.pass = false;
      }
      rep.checks.push_back(c);
    }

    // Scale-function bound and exit-time upper bound on (0, 2).
    const double R = 2.0;
    for (double x : {0.2, 1.0, 1.8}) {
      const ExitBatch& b = batch(alpha, Domain::interval(R), x);
      const McEstimate right = estimate_harmonic_measure(b, {{R, kInf}});
      InequalityCheck c = make_check("scale-bound", "P^x(exit (0,R) to the right) <= V(x)/V(R)", alpha,
                        "R=" + lbl(R) + " x=" + lbl(x));
      c.lhs = right.mean;
      c.rhs = v.V(x) / v.V(R);
      c.slack = 3.0 * right.std_error;
      c.pass = c.lhs <= c.rhs + c.slack;
      rep.checks.push_back(c);

      const McEstimate t = estimate_exit_time(b);
      InequalityCheck e = make_check("exit-time-upper", "E^x tau_(0,R) <= V(x ^ (R - x)) V(R)", alpha,
                        "R=" + lbl(R) + " x=" + lbl(x));
      e.lhs = t.mean;
      e.rhs = h.exit_time_bounds(x, R, 1.0).upper;
      e.slack = 3.0 * t.std_error;
      e.pass = e.lhs <= e.rhs + e.slack;
      rep.checks.push_back(e);
    }
    {
      InequalityCheck c = make_check("scale-bound", "P^x(exit (0,R) to the right) <= V(x)/V(R)", alpha, "R=2 x=2");
      c.skipped = true;
      c.skip_reason = "x = R is not an interior point";
      rep.checks.push_back(c);
    }

    {  // Occupation of [0, R] from x <= R/2.
      InequalityCheck c = make_check("occupation-bound", "int_0^R G(x, y) dy <= V(x) V(R) for x <= R/2", alpha,
                        "R in {1e-2, 1e-1, ..., 1e2}, x/R in {1e-3, 1e-2, 0.1, 0.25, 0.5}");
      c.pass = true;
      c.cases = 0;
      double worst = -kInf;
      for (double R2 : log_grid(1e-2, 1e2, 9))
        for (double f : {1e-3, 1e-2, 0.1, 0.25, 0.5}) {
          const double x = f * R2;
          const KernelValue occ = h.occupation(x, R2);
          const double rhs = v.V(x) * v.V(R2);
          const double slack = 2.0 * occ.abs_error + 2.0 * v.table_rel_error() * rhs;
          ++c.cases;
          if (occ.value / rhs > worst) {
            worst = occ.value / rhs;
            c.lhs = occ.value;
            c.rhs = rhs;
            c.slack = slack;
          }
          if (occ.value > rhs + slack) c.pass = false;
        }
      c.at += " (largest lhs/rhs shown)";
      rep.checks.push_back(c);
    }

    {  // Green domination by the stable Green function.
      InequalityCheck c = make_check("green-domination", "G_stable(x, y) <= G(x, y)", alpha,
                        "20 x 20 log grid on [1e-2, 1e2]^2, off the diagonal");
      c.pass = true;
      c.cases = 0;
      const double norm = std::pow(std::tgamma(1.0 + 0.5 * alpha), -2.0);
      const std::vector<double> axis = log_grid(1e-2, 1e2, 20);
      double worst = -kInf;
      for (double x : axis)
        for (double y : axis) {
          if (x == y) continue;
          const KernelValue gv = h.green(x, y);
          const double gs = norm * green_stable_halfline(alpha, x, y);
          const double slack = 2.0 * gv.abs_error + 1e-10 * gs;
          ++c.cases;
          if (gs / gv.value > worst) {
            worst = gs / gv.value;
            c.lhs = gs;
            c.rhs = gv.value;
            c.slack = slack;
            c.at = "20 x 20 grid; tightest at x=" + lbl(x) + " y=" + lbl(y);
          }
          if (gs > gv.value + slack) c.pass = false;
        }
      rep.checks.push_back(c);
    }

    // Exit-position sandwich on (-r, r) with the Monte Carlo exit time.
    const double r = 1.0;
    for (double x : {0.0, 0.5}) {
      const ExitBatch& b = batch(alpha, Domain::symmetric(r), x);
      const McEstimate t = estimate_exit_time(b);
      for (auto [lo, hi] : {std::pair{1.5, 2.0}, std::pair{3.0, 4.0}}) {
        const McEstimate p = estimate_harmonic_measure(b, {{-hi, -lo}});
        const double lower_mass = nu_mass(h, lo + 2.0 * r, hi + 2.0 * r);
        const double upper_mass = nu_mass(h, lo - r, hi - r);
        const std::string at = "r=1 x=" + lbl(x) + " z in [" + lbl(-hi) + ", " + lbl(-lo) + "]";
        InequalityCheck lower = make_check("exit-sandwich-lower", "E^x tau nu(|z| + 2r) <= P_(-r,r)(x, z)", alpha, at);
        lower.lhs = t.mean * lower_mass;
        lower.rhs = p.mean;
        lower.slack = 3.0 * combined(p.std_error, t.std_error * lower_mass);
        lower.pass = lower.lhs <= lower.rhs + lower.slack;
        rep.checks.push_back(lower);
        InequalityCheck upper = make_check("exit-sandwich-upper", "P_(-r,r)(x, z) <= E^x tau nu(|z| - r)", alpha, at);
        upper.lhs = p.mean;
        upper.rhs = t.mean * upper_mass;
        upper.slack = 3.0 * combined(p.std_error, t.std_error * upper_mass);
        upper.pass = upper.lhs <= upper.rhs + upper.slack;
        rep.checks.push_back(upper);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Constants and harmonic functions

C1Report Harness::measure_C1(double alpha) const {
  C1Report rep;
  rep.alpha = alpha;
  const HalfLine& h = halfline(alpha);
  const std::vector<double> xs{0.1, 1.0, 10.0}, ts{0.5, 5.0, 50.0};
  const double t_max = ts.back();
  auto run = [&](double eta_scale, std::vector<C1Report::Row>* rows) {
    double c1 = kInf;
    for (double x : xs) {
      const ExitBatch& b = batch(alpha, Domain::halfline(), x, {}, eta_scale, t_max);
      for (double t : ts) {
        const McEstimate s = estimate_survival(b, t);
        const double shape = h.survival_lower(x, t);
        const double ratio = (s.mean - 3.0 * s.std_error) / shape;
        c1 = std::min(c1, ratio);
        if (rows) rows->push_back({x, t, s.mean, s.std_error, shape, ratio});
      }
    }
    return c1;
  };
  rep.C1 = run(1.0, &rep.rows);
  rep.C1_refined = run(0.25, nullptr);
  c1_cache_[alpha] = rep.C1;
  return rep;
}

double Harness::C1_for(double alpha) const {
  if (config_.C1 > 0.0) return config_.C1;
  auto it = c1_cache_.find(alpha);
  if (it != c1_cache_.end()) return it->second;
  return measure_C1(alpha).C1;
}

HarnackReport Harness::check_harnack(const std::vector<double>& r_list, double alpha, double p) const {
  if (!(p > 1.0 && p <= 1.5)) throw std::invalid_argument("check_harnack: p must lie in (1, 3/2]");
  HarnackReport rep;
  rep.alpha = alpha;
  rep.p = p;
  const HalfLine& h = halfline(alpha);
  const std::vector<double> fractions{-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9};
  struct Target {
    std::string name;
    double lo, hi;  // in units of r
  };
  const std::vector<Target> targets{{"(2r,3r)", 2.0, 3.0}, {"(4r,inf)", 4.0, kInf}, {"(-inf,-4r)", -kInf, -4.0}};
  std::map<std::string, std::vector<double>> conclusive_ratios;

  for (double r : r_list) {
    const Domain dom = Domain::symmetric(2.0 * r);
    const double band_mid = 0.5 * (p + 2.0) * r;
    const double band_nu = nu_mass(h, p * r, 2.0 * r);
    const double vr = h.V(r);
    for (const auto& tg : targets) {
      const std::pair<double, double> set{tg.lo * r, tg.hi * r};
      HarnackRow row;
      row.r = r;
      row.target = tg.name;
      double lo = kInf, hi = 0.0;
      bool ok = true;
      for (double f : fractions) {
        const McEstimate m = estimate_harmonic_measure(batch(alpha, dom, f * r), {set});
        row.x.push_back(f * r);
        row.h.push_back({m.mean, m.std_error});
        lo = std::min(lo, m.mean);
        hi = std::max(hi, m.mean);
        if (!(m.mean > 0.0) || m.std_error > 0.2 * m.mean) ok = false;
      }
      row.conclusive = ok;
      row.sup_over_inf = lo > 0.0 ? hi / lo : std::numeric_limits<double>::quiet_NaN();
      // Tail functional: h is the indicator of the target outside (-2r, 2r)
      // and is estimated at the middle of each band p r < |z| < 2r.
      const double a = std::abs(tg.lo) * r, b = std::abs(tg.hi) * r;
      double tail = nu_mass(h, std::min(a, b), std::max(a, b));
      for (double zc : {band_mid, -band_mid})
        tail += estimate_harmonic_measure(batch(alpha, dom, zc), {set}).mean * band_nu;
      row.tail = tail;
      row.normalized_min = lo / (vr * vr * tail);
      row.normalized_max = hi / (vr * vr * tail);
      if (ok) {
        conclusive_ratios[tg.name].push_back(row.sup_over_inf);
        const bool gauss = alpha == 2.0;
        const double lo_n = row.normalized_min * (gauss ? std::exp(2.5 * r) : 1.0);
        const double hi_n = row.normalized_max * (gauss ? std::exp(-2.0 * r) : 1.0);
        rep.tail_lower = rep.tail_upper == 0.0 ? lo_n : std::min(rep.tail_lower, lo_n);
        rep.tail_upper = std::max(rep.tail_upper, hi_n);
      }
      rep.rows.push_back(row);
    }
  }
  // Spread needs at least two scales; a target seen at one scale only is
  // still reported through its rows.
  rep.pass = false;
  for (const auto& [name, ratios] : conclusive_ratios) {
    if (ratios.size() < 2) continue;
    if (rep.spread.empty()) rep.pass = true;
    const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
    rep.spread[name] = *mx / *mn;
    rep.constant = std::max(rep.constant, *mx);
    if (!(std::isfinite(*mx) && rep.spread[name] < rep.spread_limit)) rep.pass = false;
  }
  return rep;
}

BhpReport Harness::check_bhp(const std::vector<double>& r_list, double alpha) const {
  BhpReport rep;
  rep.alpha = alpha;
  const HalfLine& h = halfline(alpha);
  rep.q_min = kInf;
  rep.q_max = 0.0;
  bool finite = true;
  for (double r : r_list) {
    const Domain dom = Domain::interval(2.0 * r);
    const std::vector<std::pair<std::string, std::pair<double, double>>> targets{
        {"[2r,3r]", {2.0 * r, 3.0 * r}}, {"[3r,inf)", {3.0 * r, kInf}}};
    for (const auto& [name, set] : targets) {
      const McEstimate at_r = estimate_harmonic_measure(batch(alpha, dom, r), {set});
      for (double f : {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0}) {
        const double x = f * r;
        const McEstimate m = estimate_harmonic_measure(batch(alpha, dom, x), {set});
        BhpRow row;
        row.r = r;
        row.target = name;
        row.x = x;
        row.h = {m.mean, m.std_error};
        row.h_ratio = m.mean / at_r.mean;
        row.v_ratio = h.V(x) / h.V(r);
        row.q = row.h_ratio / row.v_ratio;
        if (!(std::isfinite(row.q) && row.q > 0.0)) finite = false;
        rep.q_min = std::min(rep.q_min, row.q);
        rep.q_max = std::max(rep.q_max, row.q);
        rep.rows.push_back(row);
      }
    }
  }
  if (alpha == 2.0 && !r_list.empty())
    rep.spread_limit *= std::exp(4.0 * *std::max_element(r_list.begin(), r_list.end()));
  rep.pass = finite && !rep.rows.empty() && rep.q_max / rep.q_min < rep.spread_limit;
  return rep;
}

InteriorConstantReport Harness::search_interior_constant(double alpha, double R) const {
  InteriorConstantReport rep;
  rep.alpha = alpha;
  rep.R = R;
  const HalfLine& h = halfline(alpha);
  for (double a : {0.25, 0.125, 0.0625}) {
    const double top = a * R;
    const std::vector<std::pair<double, double>> windows{{0.45 * top, 0.55 * top}, {0.9 * top, top}};
    bool all = true;
    for (double fx : {0.25, 0.75}) {
      const double x = fx * top;
      const ExitBatch& b = batch(alpha, Domain::interval(R), x, windows);
      for (std::size_t k = 0; k < windows.size(); ++k) {
        const McEstimate occ = estimate_occupation(b, k);
        const QuadResult q =
            integrate_cut([&](double y) { return h.green(x, y).value; }, windows[k].first, windows[k].second, {}, 1e-6);
        InteriorConstantReport::Row row{a, x, windows[k].first, windows[k].second, occ.mean, occ.std_error,
                                        0.5 * q.value, false};
        row.pass = row.interval_mc + 3.0 * row.std_error >= row.halfline_half;
        all = all && row.pass;
        rep.rows.push_back(row);
      }
    }
    if (all && rep.a == 0.0) rep.a = a;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Quadrature against simulation on the half-line

CrossCheck Harness::cross_check_poisson(double alpha, double x, double z, double w) const {
  const HalfLine& h = halfline(alpha);
  const double lo = z - 0.5 * w, hi = z + 0.5 * w;
  if (!(hi < 0.0)) throw std::invalid_argument("cross_check_poisson: window must lie below 0");
  CrossCheck c;
  c.name = "poisson alpha=" + lbl(alpha) + " x=" + lbl(x) + " z=" + lbl(z) + " w=" + lbl(w);
  QuadOptions opt;
  opt.rel_tol = 1e-6;
  opt.abs_tol = 1e-300;
  const QuadResult q = integrate([&](double t) { return h.poisson(x, t).value; }, lo, hi, opt);
  c.quadrature = q.value;
  c.quadrature_error = q.abs_error + 1e-6 * q.value;

  const ExitBatch& coarse = batch(alpha, Domain::halfline(), x);
  const ExitBatch& fine = batch(alpha, Domain::halfline(), x, {}, 0.25);
  const McEstimate pc = estimate_harmonic_measure(coarse, {{lo, hi}});
  const McEstimate pf = estimate_harmonic_measure(fine, {{lo, hi}});
  c.mc = pf.mean;
  c.mc_error = pf.std_error;
  // Censored (escaped) paths would land in the window with probability at
  // most P(escape, z) w.
  const double escape_mass = h.poisson(config_.halfline_escape, z).value * w;
  c.bias = std::abs(pc.mean - pf.mean) + fine.censored_fraction() * std::max(pf.mean, escape_mass);
  c.pass = std::abs(c.mc - c.quadrature) <= 3.0 * combined(c.mc_error, c.quadrature_error) + c.bias;
  return c;
}

CrossCheck Harness::cross_check_occupation(double alpha, double x, double R) const {
  const HalfLine& h = halfline(alpha);
  CrossCheck c;
  c.name = "occupation alpha=" + lbl(alpha) + " x=" + lbl(x) + " R=" + lbl(R);
  const KernelValue q = h.occupation(x, R);
  c.quadrature = q.value;
  c.quadrature_error = q.abs_error;
  const std::vector<std::pair<double, double>> windows{{0.0, R}};
  const ExitBatch& coarse = batch(alpha, Domain::halfline(), x, windows);
  const ExitBatch& fine = batch(alpha, Domain::halfline(), x, windows, 0.25);
  const McEstimate oc = estimate_occupation(coarse, 0);
  const McEstimate of = estimate_occupation(fine, 0);
  c.mc = of.mean;
  c.mc_error = of.std_error;
  // An escaped path would add at most the occupation from the escape level.
  c.bias = std::abs(oc.mean - of.mean) + fine.censored_fraction() * h.occupation(config_.halfline_escape, R).value;
  c.pass = std::abs(c.mc - c.quadrature) <= 3.0 * combined(c.mc_error, c.quadrature_error) + c.bias;
  return c;
}

}  // namespace geopot
