#include "d2d/sim.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "d2d/errors.hpp"
#include "d2d/rng.hpp"

namespace d2d {
namespace {

struct SchemeOutcome {
  double mean_interference_mw = 0.0;
  double rb_per_bs = 0.0;
  bool optimal = true;
  std::vector<double> tx_dbm;
};

struct CellOutcome {
  std::vector<SchemeOutcome> per_scheme;  // parallel to cfg.schemes
  std::exception_ptr error;
};

CellOutcome run_cell(const MonteCarloConfig& cfg, const TopologyConfig& topo,
                     const PowerControlParams& params,
                     const ProblemConfig& problem_cfg, double length,
                     std::size_t run, bool keep_tx) {
  CellOutcome out;
  const std::uint64_t seed = cell_seed(cfg.base_seed, length, run);
  try {
    TopologyConfig t = topo;
    t.link_length_m = length;
    t.length_range.reset();
    t.num_links = cfg.links_per_run;
    const Scenario sc = generate_scenario(t, seed);
    const AssociationProblem problem = make_problem(sc, params, problem_cfg);
    for (Scheme s : cfg.schemes) {
      const Assignment a = solve(problem, s);
      SchemeOutcome so;
      so.mean_interference_mw = total_interference_mw(problem, a) /
                                static_cast<double>(problem.num_devices());
      so.rb_per_bs = resource_usage(problem, a);
      so.optimal = a.optimal;
      if (keep_tx) so.tx_dbm = device_tx_powers_dbm(problem, params, a);
      out.per_scheme.push_back(std::move(so));
    }
  } catch (const InfeasibleError& e) {
    out.error = std::make_exception_ptr(InfeasibleError(
        std::string(e.what()) + " (seed " + std::to_string(seed) +
        ", link length " + std::to_string(length) + " m)"));
  } catch (...) {
    out.error = std::current_exception();
  }
  return out;
}

}  // namespace

void validate(const MonteCarloConfig& cfg) {
  if (cfg.runs == 0) throw ConfigError("monte_carlo.runs must be >= 1");
  if (cfg.link_lengths_m.empty())
    throw ConfigError("monte_carlo.link_lengths_m must not be empty");
  for (std::size_t i = 0; i < cfg.link_lengths_m.size(); ++i) {
    if (!(cfg.link_lengths_m[i] > 0.0))
      throw ConfigError("monte_carlo.link_lengths_m must be positive");
    if (i > 0 && !(cfg.link_lengths_m[i] > cfg.link_lengths_m[i - 1]))
      throw ConfigError("monte_carlo.link_lengths_m must be strictly ascending");
  }
  if (cfg.schemes.empty()) throw ConfigError("monte_carlo.schemes must not be empty");
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.schemes.size(); ++j)
      if (cfg.schemes[i] == cfg.schemes[j])
        throw ConfigError("monte_carlo.schemes lists a scheme twice");
}

const MetricsRecord* BinnedSeries::find(Scheme scheme, double length_m) const {
  for (const auto& r : records)
    if (r.scheme == scheme && r.link_length_m == length_m) return &r;
  return nullptr;
}

std::uint64_t cell_seed(std::uint64_t base_seed, double length_m,
                        std::size_t run) {
  const auto bits = std::bit_cast<std::uint64_t>(length_m);
  return base_seed ^ mix64(mix64(bits) ^ static_cast<std::uint64_t>(run));
}

BinnedSeries run_monte_carlo(const MonteCarloConfig& cfg,
                             const TopologyConfig& topo,
                             const PowerControlParams& params,
                             const ProblemConfig& problem_cfg) {
  validate(cfg);
  validate(params);
  const std::size_t nlen = cfg.link_lengths_m.size();
  const std::size_t ncells = nlen * cfg.runs;
  std::vector<CellOutcome> cells(ncells);

  std::size_t threads = cfg.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, ncells);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ncells; i = next++) {
      const double length = cfg.link_lengths_m[i / cfg.runs];
      cells[i] = run_cell(cfg, topo, params, problem_cfg, length, i % cfg.runs,
                          /*keep_tx=*/true);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& c : cells)
    if (c.error) std::rethrow_exception(c.error);

  // Reduce in fixed (length, run) order so the sums are bit-stable.
  BinnedSeries series;
  std::vector<Scheme> order;
  for (Scheme s : kAllSchemes)
    if (std::find(cfg.schemes.begin(), cfg.schemes.end(), s) != cfg.schemes.end())
      order.push_back(s);
  for (Scheme s : order) {
    const auto k = static_cast<std::size_t>(
        std::find(cfg.schemes.begin(), cfg.schemes.end(), s) - cfg.schemes.begin());
    for (std::size_t li = 0; li < nlen; ++li) {
      MetricsRecord rec;
      rec.scheme = s;
      rec.link_length_m = cfg.link_lengths_m[li];
      rec.runs = cfg.runs;
      double interference = 0.0;
      double rb = 0.0;
      for (std::size_t r = 0; r < cfg.runs; ++r) {
        const SchemeOutcome& so = cells[li * cfg.runs + r].per_scheme[k];
        interference += so.mean_interference_mw;
        rb += so.rb_per_bs;
        rec.optimal_runs += so.optimal ? 1 : 0;
        rec.tx_power_samples_dbm.insert(rec.tx_power_samples_dbm.end(),
                                        so.tx_dbm.begin(), so.tx_dbm.end());
      }
      rec.mean_ul_interference_mw = interference / static_cast<double>(cfg.runs);
      rec.mean_rb_per_bs = rb / static_cast<double>(cfg.runs);
      series.records.push_back(std::move(rec));
    }
  }

  for (auto& rec : series.records) {
    const MetricsRecord* dd = series.find(Scheme::DD, rec.link_length_m);
    rec.normalized_interference_db =
        dd ? 10.0 * std::log10(rec.mean_ul_interference_mw /
                               dd->mean_ul_interference_mw)
           : std::numeric_limits<double>::quiet_NaN();
  }
  return series;
}

std::vector<std::pair<double, double>> tx_power_cdf(
    std::vector<double> samples_dbm) {
  if (samples_dbm.empty())
    throw std::invalid_argument("tx_power_cdf: no samples");
  std::sort(samples_dbm.begin(), samples_dbm.end());
  const auto n = static_cast<double>(samples_dbm.size());
  std::vector<std::pair<double, double>> cdf;
  for (std::size_t i = 0; i < samples_dbm.size(); ++i) {
    if (i + 1 < samples_dbm.size() && samples_dbm[i + 1] == samples_dbm[i])
      continue;
    cdf.emplace_back(samples_dbm[i], static_cast<double>(i + 1) / n);
  }
  return cdf;
}

double resource_usage(const AssociationProblem& problem,
                      const Assignment& assignment) {
  return static_cast<double>(resource_blocks(problem, assignment)) /
         static_cast<double>(problem.num_bs());
}

std::vector<double> device_tx_powers_dbm(const AssociationProblem& problem,
                                         const PowerControlParams& params,
                                         const Assignment& assignment) {
  std::vector<double> out(assignment.serving_bs.size());
  for (std::size_t u = 0; u < out.size(); ++u)
    out[u] = tx_power_dbm(params, problem.loss_db(u, assignment.serving_bs[u]));
  return out;
}

}  // namespace d2d
