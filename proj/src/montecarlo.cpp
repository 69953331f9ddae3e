#include "geopot/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "geopot/renewal.hpp"

namespace geopot {
namespace {

constexpr double kPi = std::numbers::pi;

double pairwise_sum(const double* p, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(p, half) + pairwise_sum(p + half, n - half);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct PathResult {
  double time = 0.0;
  double position = 0.0;
  bool censored = false;
};

// One path of the Markov chain observed at grid times. The occupation of
// window k accumulates h_k for every grid point (before the step) inside it.
PathResult simulate_path(const Domain& dom, double x0, const SimConfig& cfg, double h_fixed, std::mt19937_64& rng,
                         double* occ) {
  const std::size_t nw = cfg.windows.size();
  double x = x0, t = 0.0;
  for (std::uint64_t step = 0; step < cfg.max_steps; ++step) {
    if (t >= cfg.max_time || std::abs(x) > cfg.escape) return {t, x, true};
    double h = h_fixed;
    if (cfg.step_rule == StepRule::Adaptive) {
      const double d = dom.distance(x);
      const double rate = cfg.mode == Mode::PureStable ? std::pow(d, -cfg.alpha) : std::log1p(std::pow(d, -cfg.alpha));
      h = cfg.eta / rate;
    }
    h = std::min(h, cfg.max_time - t);
    for (std::size_t k = 0; k < nw; ++k)
      if (x >= cfg.windows[k].first && x <= cfg.windows[k].second) occ[k] += h;
    x += sample_increment(cfg.alpha, cfg.mode, h, rng);
    t += h;
    if (!dom.contains(x)) return {t, x, false};
  }
  return {t, x, true};
}

}  // namespace

double Domain::distance(double x) const { return std::min(x - lo, hi - x); }

std::string Domain::describe() const {
  if (std::isinf(hi)) return "halfline:" + format_double(lo);
  return "interval:" + format_double(lo) + "," + format_double(hi);
}

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
  return std::mt19937_64(seq);
}

double sample_stable(double alpha, std::mt19937_64& rng) {
  if (alpha == 2.0) return std::sqrt(2.0) * std::normal_distribution<double>()(rng);
  const double v = kPi * (std::uniform_real_distribution<double>()(rng) - 0.5);
  if (alpha == 1.0) return std::tan(v);
  const double w = std::exponential_distribution<double>()(rng);
  // Chambers-Mallows-Stuck, symmetric case.
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

double sample_increment(double alpha, Mode mode, double h, std::mt19937_64& rng) {
  double T = h;
  if (mode == Mode::GeometricStable) {
    T = std::gamma_distribution<double>(h, 1.0)(rng);
    if (T == 0.0) return 0.0;
  }
  return std::pow(T, 1.0 / alpha) * sample_stable(alpha, rng);
}

unsigned effective_workers(unsigned requested) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (const char* env = std::getenv("GEOPOT_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

double default_step(const Domain& domain, double x, double alpha) {
  const double d = domain.distance(x);
  const double scale = std::isinf(domain.length()) ? d : domain.length();
  const double envelope = V_comparator(alpha, d) * V_comparator(alpha, scale);
  return std::clamp(1e-3 * envelope, 1e-6, 1e-2);
}

ExitBatch run_exit(const Domain& domain, double x, const SimConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha <= 2.0)) throw std::invalid_argument("simulate: alpha must lie in (0, 2]");
  if (!domain.contains(x)) throw std::invalid_argument("simulate: start point must lie inside the domain");
  if (config.n_paths == 0) throw std::invalid_argument("simulate: n_paths must be at least 1");
  if (config.step_rule == StepRule::Fixed && config.h < 0.0) throw std::invalid_argument("simulate: h must be positive");
  if (config.step_rule == StepRule::Adaptive && !(config.eta > 0.0))
    throw std::invalid_argument("simulate: eta must be positive");
  for (const auto& w : config.windows)
    if (!(w.first <= w.second)) throw std::invalid_argument("simulate: occupation window must have a <= b");

  ExitBatch batch;
  batch.config = config;
  batch.domain = domain;
  batch.start = x;
  if (config.step_rule == StepRule::Fixed) batch.h = config.h > 0.0 ? config.h : default_step(domain, x, config.alpha);
  const std::size_t n = config.n_paths;
  const std::size_t nw = config.windows.size();
  batch.exit_time.assign(n, 0.0);
  batch.exit_position.assign(n, 0.0);
  batch.censored.assign(n, 0);
  batch.occupation.assign(n * nw, 0.0);

  const unsigned workers = std::min<std::size_t>(effective_workers(config.workers), n);
  batch.workers_used = workers;
  constexpr std::size_t kChunk = 64;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= n) return;
      const std::size_t end = std::min(n, begin + kChunk);
      for (std::size_t i = begin; i < end; ++i) {
        std::mt19937_64 rng = path_rng(config.seed, i);
        const PathResult r = simulate_path(domain, x, config, batch.h, rng, nw ? &batch.occupation[i * nw] : nullptr);
        batch.exit_time[i] = r.time;
        batch.exit_position[i] = r.position;
        batch.censored[i] = r.censored ? 1 : 0;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return batch;
}

std::size_t ExitBatch::censored_count() const {
  return static_cast<std::size_t>(std::count(censored.begin(), censored.end(), std::uint8_t{1}));
}

double ExitBatch::censored_fraction() const {
  return size() == 0 ? 0.0 : static_cast<double>(censored_count()) / static_cast<double>(size());
}

std::string ExitBatch::header_json() const {
  nlohmann::json j;
  j["alpha"] = config.alpha;
  j["mode"] = config.mode == Mode::PureStable ? "pure_stable" : "geometric_stable";
  j["step_rule"] = config.step_rule == StepRule::Adaptive ? "adaptive" : "fixed";
  j["h"] = h;
  j["eta"] = config.eta;
  j["n_paths"] = config.n_paths;
  j["seed"] = config.seed;
  j["max_time"] = config.max_time;
  j["max_steps"] = config.max_steps;
  j["escape"] = std::isinf(config.escape) ? nlohmann::json("inf") : nlohmann::json(config.escape);
  j["domain"] = domain.describe();
  j["start"] = start;
  j["censored"] = censored_count();
  nlohmann::json win = nlohmann::json::array();
  for (const auto& w : config.windows) win.push_back({w.first, w.second});
  j["windows"] = win;
  return j.dump();
}

void ExitBatch::write_csv(std::ostream& out) const {
  out << "# " << header_json() << "\n";
  out << "exit_time,exit_position,censored\n";
  for (std::size_t i = 0; i < size(); ++i)
    out << format_double(exit_time[i]) << ',' << format_double(exit_position[i]) << ',' << int(censored[i]) << '\n';
}

McEstimate sample_mean(const std::vector<double>& values) {
  McEstimate e;
  e.n = values.size();
  if (e.n == 0) return e;
  e.mean = pairwise_sum(values.data(), e.n) / static_cast<double>(e.n);
  if (e.n > 1) {
    std::vector<double> sq(e.n);
    for (std::size_t i = 0; i < e.n; ++i) sq[i] = (values[i] - e.mean) * (values[i] - e.mean);
    const double var = pairwise_sum(sq.data(), e.n) / static_cast<double>(e.n - 1);
    e.std_error = std::sqrt(var / static_cast<double>(e.n));
  }
  return e;
}

McEstimate estimate_exit_time(const ExitBatch& batch) {
  std::vector<double> v;
  v.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i)
    if (!batch.censored[i]) v.push_back(batch.exit_time[i]);
  return sample_mean(v);
}

McEstimate estimate_occupation(const ExitBatch& batch, std::size_t window) {
  const std::size_t nw = batch.config.windows.size();
  if (window >= nw) throw std::invalid_argument("estimate_occupation: no such window");
  std::vector<double> v(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) v[i] = batch.occupation[i * nw + window];
  return sample_mean(v);
}

McEstimate estimate_harmonic_measure(const ExitBatch& batch, const std::vector<std::pair<double, double>>& target) {
  for (const auto& a : target)
    if (batch.domain.contains(a.first) || batch.domain.contains(a.second) ||
        (a.first <= batch.domain.lo && a.second >= batch.domain.hi))
      throw std::invalid_argument("harmonic measure: target set must not meet the domain");
  std::vector<double> v;
  v.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch.censored[i]) continue;
    const double z = batch.exit_position[i];
    double hit = 0.0;
    for (const auto& a : target)
      if (z >= a.first && z <= a.second) {
        hit = 1.0;
        break;
      }
    v.push_back(hit);
  }
  return sample_mean(v);
}

McEstimate estimate_survival(const ExitBatch& batch, double t) {
  std::vector<double> v(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) v[i] = (batch.censored[i] || batch.exit_time[i] > t) ? 1.0 : 0.0;
  return sample_mean(v);
}

McEstimate estimate_occupation(const Domain& domain, double x, std::pair<double, double> window, SimConfig config) {
  config.windows = {window};
  return estimate_occupation(run_exit(domain, x, config), 0);
}

McEstimate estimate_harmonic_measure(const Domain& domain, double x,
                                     const std::vector<std::pair<double, double>>& target, const SimConfig& config) {
  return estimate_harmonic_measure(run_exit(domain, x, config), target);
}

std::vector<ProbeRow> bias_probe(const Domain& domain, double x, SimConfig config, const std::vector<double>& steps,
                                 const std::function<McEstimate(const ExitBatch&)>& quantity) {
  for (std::size_t i = 1; i < steps.size(); ++i)
    if (!(steps[i] < steps[i - 1])) throw std::invalid_argument("bias_probe: steps must be decreasing");
  std::vector<ProbeRow> rows;
  for (double s : steps) {
    (config.step_rule == StepRule::Adaptive ? config.eta : config.h) = s;
    const ExitBatch b = run_exit(domain, x, config);
    rows.push_back({s, quantity(b), b.censored_fraction()});
  }
  return rows;
}

}  // namespace geopot
