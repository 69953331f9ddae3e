#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geopot/halfline.hpp"
#include "geopot/harness.hpp"
#include "geopot/interval.hpp"
#include "geopot/levy.hpp"
#include "geopot/montecarlo.hpp"
#include "geopot/quadrature.hpp"
#include "geopot/renewal.hpp"
#include "geopot/spectral.hpp"

namespace fs = std::filesystem;
using namespace geopot;

namespace {

constexpr int kUsage = 1;
constexpr int kNonConvergence = 2;
constexpr int kVerifyFailed = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

nlohmann::json versions() {
  return {{"geopot", GEOPOT_VERSION}, {"compiler", __VERSION__}, {"cplusplus", __cplusplus}};
}

// The manifest hash covers only what determines the data: the deterministic
// config echo and the library version. Wall-clock and paths stay out of it.
struct Manifest {
  nlohmann::json config;
  std::string hash() const { return hex(fnv1a(config.dump() + "|" + GEOPOT_VERSION)); }

  void write(const fs::path& path, const std::string& subcommand, const std::vector<std::string>& outputs,
             double seconds) const {
    nlohmann::json j{{"subcommand", subcommand}, {"config", config},    {"versions", versions()},
                     {"manifest_hash", hash()},   {"outputs", outputs}, {"wall_clock_seconds", seconds},
                     {"finished_utc", utc_now()}};
    if (config.contains("seed")) j["seed"] = config["seed"];
    write_text(path, j.dump(2) + "\n");
  }
};

Mode parse_mode(const std::string& s) {
  if (s == "geometric") return Mode::GeometricStable;
  if (s == "pure") return Mode::PureStable;
  throw UsageError("--mode must be geometric or pure");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<double> grid_or_usage(const std::string& spec) {
  try {
    return parse_grid(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------------------
// eval

struct Row {
  double value = 0.0;
  double abs_error = 0.0;
  std::string method;
};

struct Quantity {
  std::string name;
  std::vector<std::string> axes;
  std::string help;
  bool needs_R = false;
};

const std::vector<Quantity>& quantities() {
  static const std::vector<Quantity> q{
      {"V", {"x"}, "renewal function of the ladder-height process"},
      {"Vprime", {"x"}, "derivative of V"},
      {"V-comparator", {"x"}, "1/log^{1/2}(1 + x^{-alpha})"},
      {"Vprime-comparator", {"x"}, "1/(x log^{3/2}(1 + x^{-alpha/3}))"},
      {"psi-dagger", {"xi"}, "ladder-height Laplace exponent"},
      {"Psi", {"xi"}, "characteristic exponent"},
      {"nu", {"x"}, "jump density"},
      {"nu-comparator", {"x"}, "1/(|x| (1 + |x|^alpha))"},
      {"transition-density", {"t", "x"}, "p_t(x)"},
      {"green-halfline", {"x", "y"}, "Green function of (0, inf)"},
      {"green-comparator", {"x", "y"}, "half-line Green comparator"},
      {"ghat", {"x", "y"}, "G-hat comparator on the half-line"},
      {"poisson-halfline", {"x", "z"}, "Poisson kernel of (0, inf), z < 0 < x"},
      {"poisson-comparator", {"x", "z"}, "half-line Poisson comparator"},
      {"occupation-halfline", {"x", "R"}, "expected time in [0, R] before leaving (0, inf)"},
      {"exit-time-bounds", {"x", "R"}, "envelope of the mean exit time of (0, R); uses --C1"},
      {"green-interval-comparator", {"x", "y"}, "Green comparator of (0, R); needs --R", true},
      {"poisson-interval-comparator", {"x", "z"}, "Poisson comparator of (0, R); needs --R", true},
  };
  return q;
}

const Quantity& find_quantity(const std::string& name) {
  for (const auto& q : quantities())
    if (q.name == name) return q;
  throw UsageError("unknown quantity '" + name + "' (see --help)");
}

// Each --at value is one coordinate list per axis separated by ','. A
// coordinate is a number or a grid spec; multi-axis points take the product.
std::vector<std::vector<double>> expand_points(const std::vector<std::string>& at, std::size_t arity) {
  std::vector<std::vector<double>> points;
  for (const auto& item : at) {
    if (arity == 1) {
      for (double v : grid_or_usage(item)) points.push_back({v});
      continue;
    }
    const auto parts = split(item, ',');
    if (parts.size() != arity) throw UsageError("--at '" + item + "': expected " + std::to_string(arity) + " coordinates");
    std::vector<std::vector<double>> acc{{}};
    for (const auto& part : parts) {
      std::vector<std::vector<double>> next;
      for (const auto& prefix : acc)
        for (double v : grid_or_usage(part)) {
          auto p = prefix;
          p.push_back(v);
          next.push_back(std::move(p));
        }
      acc = std::move(next);
    }
    points.insert(points.end(), acc.begin(), acc.end());
  }
  return points;
}

struct EvalArgs {
  double alpha = 1.0;
  std::string mode = "geometric";
  std::string quantity;
  std::vector<std::string> at;
  double R = 0.0;
  double C1 = 1.0;
  std::string out;
};

class Evaluator {
 public:
  Evaluator(const EvalArgs& a) : args_(a), spec_{a.alpha, parse_mode(a.mode)} {
    try {
      spec_.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  Row operator()(const std::vector<double>& p) {
    const std::string& q = args_.quantity;
    const double alpha = spec_.alpha;
    auto positive = [&](double v, const char* what) {
      if (!(v > 0.0)) throw UsageError(std::string(what) + " must be positive");
    };
    auto kv = [](const KernelValue& k) { return Row{k.value, k.abs_error, method_name(k.method)}; };
    if (q == "V" || q == "Vprime") {
      positive(p[0], "x");
      if (!spec_.is_geometric()) {
        const double x = p[0], a2 = 0.5 * alpha;
        return {q == "V" ? std::pow(x, a2) : a2 * std::pow(x, a2 - 1.0), 0.0, "closed_form"};
      }
      const Estimate e = q == "V" ? renewal().V_with_error(p[0]) : renewal().Vprime_with_error(p[0]);
      return {e.value, e.abs_error, "quadrature"};
    }
    if (q == "V-comparator") return positive(p[0], "x"), Row{V_comparator(alpha, p[0]), 0.0, "comparator"};
    if (q == "Vprime-comparator") return positive(p[0], "x"), Row{Vprime_comparator(alpha, p[0]), 0.0, "comparator"};
    if (q == "psi-dagger") {
      positive(p[0], "xi");
      if (!spec_.is_geometric()) return {std::pow(p[0], 0.5 * alpha), 0.0, "closed_form"};
      const Estimate e = renewal().psi_dagger().evaluate(p[0]);
      return {e.value, e.abs_error, "quadrature"};
    }
    if (q == "Psi") return {big_psi(spec_, p[0]), 0.0, "closed_form"};
    if (q == "nu" || q == "nu-comparator") {
      const double x = std::abs(p[0]);
      positive(x, "|x|");
      if (q == "nu-comparator") return {SubordinatedLaw::shared(alpha)->nu_comparator(x), 0.0, "comparator"};
      if (!spec_.is_geometric() || alpha == 2.0) return {halfline().jump_density(x), 0.0, "closed_form"};
      const Estimate e = SubordinatedLaw::shared(alpha)->nu_by_subordination(x);
      return {e.value, e.abs_error, "quadrature"};
    }
    if (q == "transition-density") {
      positive(p[0], "t");
      if (!spec_.is_geometric()) return {stable_density(p[0], p[1], alpha), 0.0, "quadrature"};
      const Estimate e = transition_density(alpha, p[0], p[1]);
      return {e.value, e.abs_error, "quadrature"};
    }
    if (q == "green-halfline" || q == "green-comparator" || q == "ghat") {
      positive(p[0], "x");
      positive(p[1], "y");
      if (q == "green-halfline") return kv(halfline().green(p[0], p[1]));
      if (q == "green-comparator") return {halfline().green_comparator(p[0], p[1]), 0.0, "comparator"};
      return {halfline().ghat(p[0], p[1]), 0.0, "comparator"};
    }
    if (q == "poisson-halfline" || q == "poisson-comparator") {
      positive(p[0], "x");
      if (!(p[1] < 0.0)) throw UsageError("z must be negative");
      if (q == "poisson-halfline") return kv(halfline().poisson(p[0], p[1]));
      return {halfline().poisson_comparator(p[0], p[1]), 0.0, "comparator"};
    }
    if (q == "occupation-halfline") {
      positive(p[0], "x");
      positive(p[1], "R");
      return kv(halfline().occupation(p[0], p[1]));
    }
    if (q == "exit-time-bounds") {
      if (!(p[0] > 0.0 && p[0] < p[1])) throw UsageError("need 0 < x < R");
      const Bounds b = halfline().exit_time_bounds(p[0], p[1], args_.C1);
      return {b.upper, b.upper - b.lower, "envelope"};
    }
    const IntervalComparators cmp(halfline());
    if (!(args_.R > 0.0)) throw UsageError("--R is required for interval quantities");
    if (!(p[0] > 0.0 && p[0] < args_.R)) throw UsageError("x must lie in (0, R)");
    if (q == "green-interval-comparator") {
      if (!(p[1] > 0.0 && p[1] < args_.R)) throw UsageError("y must lie in (0, R)");
      return {cmp.green(args_.R, p[0], p[1]), 0.0, "comparator"};
    }
    if (p[1] >= 0.0 && p[1] <= args_.R) throw UsageError("z must lie outside [0, R]");
    return {cmp.poisson(args_.R, p[0], p[1]), 0.0, cmp.poisson_branch(args_.R, p[0], p[1])};
  }

 private:
  const HalfLine& halfline() {
    if (!h_) h_ = std::make_unique<HalfLine>(spec_);
    return *h_;
  }
  const RenewalEvaluator& renewal() { return halfline().renewal(); }

  EvalArgs args_;
  ProcessSpec spec_;
  std::unique_ptr<HalfLine> h_;
};

int cmd_eval(const EvalArgs& args) {
  const Quantity& q = find_quantity(args.quantity);
  if (args.at.empty()) throw UsageError("--at is required");
  const auto points = expand_points(args.at, q.axes.size());
  Evaluator eval(args);
  std::ostringstream out;
  for (const auto& a : q.axes) out << a << ',';
  out << "value,abs_error,method\n";
  int code = 0;
  for (const auto& p : points) {
    Row r;
    try {
      r = eval(p);
    } catch (const NonConvergence& e) {
      r = {e.value(), e.abs_error(), "nonconverged"};
      std::cerr << "geopot: " << e.what() << "\n";
      code = kNonConvergence;
    }
    for (double v : p) out << fmt(v) << ',';
    out << fmt(r.value) << ',' << fmt(r.abs_error) << ',' << r.method << '\n';
  }
  if (args.out.empty())
    std::cout << out.str();
  else
    write_text(args.out, out.str());
  return code;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  double alpha = 1.0;
  std::string mode = "geometric";
  std::string domain = "halfline";
  double start = 1.0;
  std::size_t paths = 1000;
  std::uint64_t seed = 1;
  double h = 0.0;
  std::string step_rule = "fixed";
  double eta = 0.02;
  unsigned workers = 0;
  double max_time = 1e4;
  double escape = std::numeric_limits<double>::infinity();
  std::vector<std::string> windows;
  std::string out;
};

Domain parse_domain(const std::string& s) {
  if (s == "halfline") return Domain::halfline();
  if (s.rfind("interval:", 0) == 0) {
    const auto parts = split(s.substr(9), ',');
    try {
      if (parts.size() == 1) return Domain::interval(std::stod(parts[0]));
      if (parts.size() == 2) {
        const double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
        if (lo < hi) return Domain{lo, hi};
      }
    } catch (const std::exception&) {
    }
  }
  throw UsageError("--domain must be halfline, interval:R or interval:a,b with a < b");
}

int cmd_simulate(const SimulateArgs& args) {
  if (args.paths == 0) throw UsageError("--paths must be at least 1");
  SimConfig cfg;
  cfg.alpha = args.alpha;
  cfg.mode = parse_mode(args.mode);
  if (args.step_rule == "fixed")
    cfg.step_rule = StepRule::Fixed;
  else if (args.step_rule == "adaptive")
    cfg.step_rule = StepRule::Adaptive;
  else
    throw UsageError("--step-rule must be fixed or adaptive");
  cfg.h = args.h;
  cfg.eta = args.eta;
  cfg.n_paths = args.paths;
  cfg.seed = args.seed;
  cfg.workers = args.workers;
  cfg.max_time = args.max_time;
  cfg.escape = args.escape;
  for (const auto& w : args.windows) {
    const auto v = grid_or_usage(w);
    if (v.size() != 2) throw UsageError("--window takes a,b");
    cfg.windows.emplace_back(v[0], v[1]);
  }
  const Domain dom = parse_domain(args.domain);
  const auto t0 = std::chrono::steady_clock::now();
  ExitBatch batch;
  try {
    batch = run_exit(dom, args.start, cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Manifest m;
  m.config = nlohmann::json::parse(batch.header_json());
  m.config["subcommand"] = "simulate";
  std::ostringstream csv;
  csv << "# manifest_hash " << m.hash() << "\n";
  batch.write_csv(csv);
  if (!batch.config.windows.empty()) {
    csv << "# occupation\n";
    for (std::size_t k = 0; k < batch.config.windows.size(); ++k) {
      const McEstimate e = estimate_occupation(batch, k);
      csv << "# window " << k << " mean " << fmt(e.mean) << " std_error " << fmt(e.std_error) << "\n";
    }
  }
  if (batch.censoring_warning()) std::cerr << "geopot: warning: " << batch.censored_count() << " censored paths\n";
  if (args.out.empty()) {
    std::cout << csv.str();
    return 0;
  }
  write_text(args.out, csv.str());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.write(args.out + ".manifest.json", "simulate", {args.out}, secs);
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string suite = "all";
  std::string alpha_list = "0.5,1,1.5,2";
  std::string out_dir = "reports";
  std::string format = "json";
  std::size_t paths = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::vector<std::string> ids;
  std::string grid;
  std::string r_list;
  double band_lo = 1e-2;
  double band_hi = 1e2;
};

template <class Report>
std::string render(const Report& r, Format f, const std::string& hash) {
  if (f == Format::Json) {
    nlohmann::json j = r.to_json();
    j["manifest_hash"] = hash;
    return j.dump(2) + "\n";
  }
  return "# manifest_hash " + hash + "\n" + r.to_csv();
}

int cmd_verify(const VerifyArgs& args) {
  static const std::vector<std::string> suites{"inequalities", "ratios", "harnack", "bhp", "crosscheck", "all"};
  if (std::find(suites.begin(), suites.end(), args.suite) == suites.end())
    throw UsageError("unknown suite '" + args.suite + "'");
  if (args.paths == 0) throw UsageError("--paths must be at least 1");
  const Format format = [&] {
    try {
      return parse_format(args.format);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  const std::vector<double> alphas = grid_or_usage(args.alpha_list);
  for (double a : alphas)
    if (!(a > 0.0 && a <= 2.0)) throw UsageError("alpha must lie in (0, 2]");
  for (const auto& id : args.ids)
    if (!is_registered(id)) throw UsageError("unregistered estimate_id '" + id + "'");

  HarnessConfig cfg;
  cfg.mc.n_paths = args.paths;
  cfg.mc.seed = args.seed;
  cfg.mc.workers = args.workers;
  cfg.band_lo = args.band_lo;
  cfg.band_hi = args.band_hi;
  if (!args.grid.empty()) cfg.grid = grid_or_usage(args.grid);
  std::vector<double> r_override;
  if (!args.r_list.empty()) r_override = grid_or_usage(args.r_list);

  Manifest m;
  m.config = {{"suite", args.suite},  {"alphas", alphas},          {"paths", args.paths},
              {"seed", args.seed},    {"format", args.format},     {"ids", args.ids},
              {"grid", args.grid},    {"r_list", args.r_list},     {"band", {args.band_lo, args.band_hi}},
              {"step_rule", "adaptive"}, {"eta", cfg.mc.eta}};
  const std::string hash = m.hash();
  const std::string ext = format == Format::Json ? ".json" : ".csv";
  const fs::path dir(args.out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> outputs, failed;
  auto save = [&](const std::string& stem, const std::string& text) {
    const fs::path p = dir / (stem + ext);
    write_text(p, text);
    outputs.push_back(p.string());
  };
  auto want = [&](const char* s) { return args.suite == s || args.suite == "all"; };
  auto tag = [](double a) {
    std::ostringstream s;
    s << "alpha" << a;
    return s.str();
  };

  Harness harness(cfg);
  if (want("inequalities")) {
    const InequalityReport r = harness.inequality_suite(alphas);
    save("inequalities", render(r, format, hash));
    for (const auto& c : r.checks)
      if (!c.skipped && !c.pass) failed.push_back("inequalities:" + c.name + "@" + tag(c.alpha) + " " + c.at);
    harness.clear_batches();
  }
  if (want("ratios")) {
    std::vector<std::string> ids = args.ids;
    if (ids.empty())
      for (const auto& e : estimate_registry()) ids.push_back(e.id);
    for (double a : alphas) {
      for (const auto& id : ids) {
        const RatioReport r = harness.ratio_sweep(id, a);
        save(id + "_" + tag(a), render(r, format, hash));
        if (!r.accepted()) failed.push_back(id + "@" + tag(a));
      }
      harness.clear_batches();
    }
  }
  if (want("harnack")) {
    for (double a : alphas) {
      const std::vector<double> rs =
          !r_override.empty() ? r_override : (a == 2.0 ? std::vector<double>{0.5, 8.0} : std::vector<double>{0.1, 1.0, 10.0});
      const HarnackReport r = harness.check_harnack(rs, a);
      save("harnack_" + tag(a), render(r, format, hash));
      if (!r.pass) failed.push_back("harnack@" + tag(a));
      harness.clear_batches();
    }
  }
  if (want("bhp")) {
    for (double a : alphas) {
      const BhpReport r = harness.check_bhp(r_override.empty() ? std::vector<double>{1.0} : r_override, a);
      save("bhp_" + tag(a), render(r, format, hash));
      if (!r.pass) failed.push_back("bhp@" + tag(a));
      harness.clear_batches();
    }
  }
  if (want("crosscheck")) {
    nlohmann::json arr = nlohmann::json::array();
    std::vector<CrossCheck> checks;
    for (double a : alphas) {
      for (double z : {-0.5, -2.0}) checks.push_back(harness.cross_check_poisson(a, 1.0, z, 0.2));
      checks.push_back(harness.cross_check_occupation(a, 0.5, 1.0));
      harness.clear_batches();
    }
    std::ostringstream csv;
    csv << "name,quadrature,quadrature_error,mc,mc_error,bias,pass\n";
    for (const auto& c : checks) {
      arr.push_back({{"name", c.name}, {"quadrature", c.quadrature}, {"quadrature_error", c.quadrature_error},
                     {"mc", c.mc}, {"mc_error", c.mc_error}, {"bias", c.bias}, {"pass", c.pass}});
      csv << '"' << c.name << "\"," << fmt(c.quadrature) << ',' << fmt(c.quadrature_error) << ',' << fmt(c.mc) << ','
          << fmt(c.mc_error) << ',' << fmt(c.bias) << ',' << c.pass << '\n';
      if (!c.pass) failed.push_back("crosscheck:" + c.name);
    }
    if (format == Format::Json)
      save("crosscheck", nlohmann::json{{"checks", arr}, {"manifest_hash", hash}}.dump(2) + "\n");
    else
      save("crosscheck", "# manifest_hash " + hash + "\n" + csv.str());
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  m.write(dir / "manifest.json", "verify", outputs, secs);
  for (const auto& f : failed) std::cerr << "FAIL " << f << "\n";
  std::cout << outputs.size() << " reports written to " << dir.string() << "; " << failed.size() << " failing\n";
  return failed.empty() ? 0 : kVerifyFailed;
}

std::string quantity_help() {
  std::string s = "Quantities for eval:\n";
  for (const auto& q : quantities()) {
    std::string axes;
    for (const auto& a : q.axes) axes += (axes.empty() ? "" : ",") + a;
    s += "  " + q.name + " (" + axes + "): " + q.help + "\n";
  }
  s += "Estimate ids for verify --suite ratios:\n";
  for (const auto& e : estimate_registry()) s += "  " + e.id + ": " + e.statement + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Potential theory of the geometric stable process on the line"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; [section] names a subcommand; flags take precedence");
  app.footer(quantity_help() +
             "\nGrids: log:lo:hi:n, lin:lo:hi:n or a comma list. Multi-axis points separate axes with ','\n"
             "and take the product, e.g. --at 1,log:0.1:10:5.\n"
             "Exit codes: 0 success, 1 usage error, 2 numeric non-convergence, 3 verification failure.\n"
             "GEOPOT_THREADS caps the number of simulation workers.");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "evaluate a quantity at points; CSV to stdout or --out");
  eval->add_option("--alpha", ev.alpha, "stability index in (0, 2]")->required();
  eval->add_option("--mode", ev.mode, "geometric or pure")->capture_default_str();
  eval->add_option("--quantity", ev.quantity, "quantity name (listed below)")->required();
  eval->add_option("--at", ev.at, "points or grid spec; repeatable")->required();
  eval->add_option("--R", ev.R, "interval length for interval quantities");
  eval->add_option("--C1", ev.C1, "lower-bound constant for exit-time-bounds")->capture_default_str();
  eval->add_option("--out", ev.out, "output file");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "simulate exit paths; CSV with manifest hash");
  simulate->set_help_flag("--help", "print this help and exit");  // frees -h for --h
  simulate->add_option("--alpha", sim.alpha, "stability index in (0, 2]")->required();
  simulate->add_option("--mode", sim.mode, "geometric or pure")->capture_default_str();
  simulate->add_option("--domain", sim.domain, "halfline, interval:R or interval:a,b")->capture_default_str();
  simulate->add_option("--start", sim.start, "start point")->required();
  simulate->add_option("--paths", sim.paths, "number of paths")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "seed")->capture_default_str();
  simulate->add_option("--h", sim.h, "fixed step; 0 picks the domain default")->capture_default_str();
  simulate->add_option("--step-rule", sim.step_rule, "fixed or adaptive")->capture_default_str();
  simulate->add_option("--eta", sim.eta, "adaptive step parameter")->capture_default_str();
  simulate->add_option("--workers", sim.workers, "worker threads; 0 means all cores")->capture_default_str();
  simulate->add_option("--max-time", sim.max_time, "censoring time")->capture_default_str();
  simulate->add_option("--escape", sim.escape, "censor paths with |x| above this");
  simulate->add_option("--window", sim.windows, "occupation window a,b; repeatable");
  simulate->add_option("--out", sim.out, "output CSV (a manifest is written next to it)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "run verification suites and write reports");
  verify->add_option("--suite", ver.suite, "inequalities, ratios, harnack, bhp, crosscheck or all")
      ->capture_default_str();
  verify->add_option("--alpha-list", ver.alpha_list, "alpha values")->capture_default_str();
  verify->add_option("--out-dir", ver.out_dir, "report directory")->capture_default_str();
  verify->add_option("--format", ver.format, "json or csv")->capture_default_str();
  verify->add_option("--paths", ver.paths, "Monte Carlo paths per batch")->capture_default_str();
  verify->add_option("--seed", ver.seed, "seed")->capture_default_str();
  verify->add_option("--workers", ver.workers, "worker threads; 0 means all cores")->capture_default_str();
  verify->add_option("--id", ver.ids, "restrict ratios to these estimate ids; repeatable");
  verify->add_option("--grid", ver.grid, "sweep axis for quadrature ratios");
  verify->add_option("--r-list", ver.r_list, "scales for harnack and bhp");
  verify->add_option("--band-lo", ver.band_lo, "lower ratio band")->capture_default_str();
  verify->add_option("--band-hi", ver.band_hi, "upper ratio band")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*eval) return cmd_eval(ev);
    if (*simulate) return cmd_simulate(sim);
    return cmd_verify(ver);
  } catch (const NonConvergence& e) {
    std::cerr << "geopot: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "geopot: " << e.what() << "\n";
    return kUsage;
  }
}
