#include "d2d/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <thread>

#include "d2d/errors.hpp"
#include "d2d/oracle.hpp"
#include "d2d/rng.hpp"

namespace d2d {
namespace {

namespace fs = std::filesystem;

std::ofstream open_csv(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  return f;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() +
                            "': " + ec.message());
}

bool same_objective(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
}

std::size_t env_thread_cap() {
  const char* raw = std::getenv("D2D_ASSOC_THREADS");
  if (!raw || !*raw) return 0;
  char* end = nullptr;
  const unsigned long v = std::strtoul(raw, &end, 10);
  if (*end != '\0' || v == 0)
    throw ConfigError("D2D_ASSOC_THREADS must be a positive integer");
  return v;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  std::string s(buf);
  return s == "-0" ? "0" : s;
}

void write_assignment_csv(std::ostream& out, const AssociationProblem& p,
                          const Assignment& a) {
  out << "link_id,device_id,bs_id,joint_flag\n";
  for (std::size_t l = 0; l < p.num_links(); ++l) {
    for (std::size_t u : p.link_devices[l]) {
      out << l << ',' << u << ',' << a.serving_bs[u] << ','
          << (a.joint_bs[l] ? "true" : "false") << '\n';
    }
  }
}

void write_interference_csv(std::ostream& out, const BinnedSeries& series) {
  out << "scheme,link_length_m,mean_interference_dbm,normalized_vs_dd_db\n";
  for (const auto& r : series.records) {
    out << to_string(r.scheme) << ',' << format_real(r.link_length_m) << ','
        << format_real(mw_to_dbm(r.mean_ul_interference_mw)) << ','
        << format_real(r.normalized_interference_db) << '\n';
  }
}

void write_resources_csv(std::ostream& out, const BinnedSeries& series) {
  out << "scheme,link_length_m,mean_rb_per_bs\n";
  for (const auto& r : series.records) {
    out << to_string(r.scheme) << ',' << format_real(r.link_length_m) << ','
        << format_real(r.mean_rb_per_bs) << '\n';
  }
}

void write_txpower_cdf_csv(std::ostream& out, const BinnedSeries& series,
                           double cdf_length_m) {
  out << "scheme,tx_power_dbm,cdf\n";
  if (series.records.empty()) return;
  double chosen = series.records.front().link_length_m;
  for (const auto& r : series.records)
    if (std::abs(r.link_length_m - cdf_length_m) < std::abs(chosen - cdf_length_m))
      chosen = r.link_length_m;
  for (const auto& r : series.records) {
    if (r.link_length_m != chosen || r.tx_power_samples_dbm.empty()) continue;
    const auto cdf = tx_power_cdf(r.tx_power_samples_dbm);
    // Points that print identically collapse onto the last (largest) one.
    for (std::size_t i = 0; i < cdf.size(); ++i) {
      const std::string x = format_real(cdf[i].first);
      if (i + 1 < cdf.size() && format_real(cdf[i + 1].first) == x) continue;
      out << to_string(r.scheme) << ',' << x << ',' << format_real(cdf[i].second)
          << '\n';
    }
  }
}

void write_scenario_csvs(const fs::path& dir, const Scenario& sc) {
  {
    auto f = open_csv(dir / "base_stations.csv");
    f << "bs_id,kind,x_m,y_m,tx_power_dbm\n";
    for (const auto& bs : sc.base_stations)
      f << bs.id << ',' << (bs.kind == BsKind::Macro ? "macro" : "small") << ','
        << format_real(bs.position.x) << ',' << format_real(bs.position.y) << ','
        << format_real(bs.tx_power_dbm) << '\n';
  }
  {
    auto f = open_csv(dir / "devices.csv");
    f << "device_id,link_id,x_m,y_m\n";
    for (const auto& d : sc.devices)
      f << d.id << ',' << d.link_id << ',' << format_real(d.position.x) << ','
        << format_real(d.position.y) << '\n';
  }
  {
    auto f = open_csv(dir / "links.csv");
    f << "link_id,device_a,device_b,length_m\n";
    for (const auto& l : sc.links)
      f << l.id << ',' << l.device_ids[0] << ',' << l.device_ids[1] << ','
        << format_real(l.length_m) << '\n';
  }
  {
    auto f = open_csv(dir / "loss_db.csv");
    f << "device_id,bs_id,loss_db\n";
    for (std::size_t u = 0; u < sc.gain.num_devices(); ++u)
      for (std::size_t b = 0; b < sc.gain.num_bs(); ++b)
        f << u << ',' << b << ',' << format_real(sc.gain.loss(u, b)) << '\n';
  }
}

AssociationProblem random_small_problem(std::uint64_t seed,
                                        const PowerControlParams& params) {
  Rng rng(seed);
  const std::size_t nb = 2 + rng.below(2);
  const std::size_t nl = 2 + rng.below(3);
  std::vector<BaseStation> bss(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    bss[b].kind = rng.uniform() < 0.3 ? BsKind::Macro : BsKind::Small;
    bss[b].tx_power_dbm = bss[b].kind == BsKind::Macro ? 46.0 : 30.0;
  }
  Matrix<double> loss(2 * nl, nb);
  for (std::size_t u = 0; u < 2 * nl; ++u)
    for (std::size_t b = 0; b < nb; ++b) loss(u, b) = rng.uniform(60.0, 140.0);
  const Scenario sc = make_explicit_scenario(std::move(bss), std::move(loss));

  ProblemConfig pc;
  pc.n_closest = 1 + static_cast<int>(rng.below(nb));
  // Capacities between 1 and 2|L| per BS, topped up until every device fits.
  pc.capacity_override.resize(nb);
  int total = 0;
  for (auto& k : pc.capacity_override) {
    k = 1 + static_cast<int>(rng.below(2 * nl));
    total += k;
  }
  for (std::size_t b = 0; total < static_cast<int>(2 * nl); b = (b + 1) % nb) {
    ++pc.capacity_override[b];
    ++total;
  }
  AssociationProblem p = make_problem(sc, params, pc);

  // Threshold log-uniform across the span of achievable pair sums, with
  // occasional never/always-binding extremes.
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t l = 0; l < nl; ++l)
    for (std::size_t b = 0; b < nb; ++b) {
      lo = std::min(lo, pair_interference_mw(p, l, b));
      hi = std::max(hi, pair_interference_mw(p, l, b));
    }
  const double pick = rng.uniform();
  if (pick < 0.1) {
    p.i_th_mw = std::numeric_limits<double>::infinity();
  } else if (pick < 0.2) {
    p.i_th_mw = 1e-30;
  } else {
    const double t = rng.uniform(-0.2, 1.2);
    p.i_th_mw = std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo)));
  }
  return p;
}

int cmd_oracle_check(const PowerControlParams& params, std::size_t trials,
                     std::uint64_t seed, std::ostream& out,
                     const OracleCheckSolvers& solvers) {
  std::size_t mismatches = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = mix64(seed + t);
    const AssociationProblem p = random_small_problem(trial_seed, params);
    auto report = [&](Scheme s, const Assignment& got, const Assignment& want) {
      ++mismatches;
      out << "mismatch scheme=" << to_string(s) << " trial=" << t
          << " seed=" << trial_seed << " solver_objective_mw="
          << format_real(got.objective_mw)
          << " oracle_objective_mw=" << format_real(want.objective_mw)
          << " solver_joint=" << got.joint_count
          << " oracle_joint=" << want.joint_count << '\n';
    };
    const Assignment jd = solvers.jd(p), jd_ref = oracle_exhaustive(p, Scheme::JD);
    if (!same_objective(jd.objective_mw, jd_ref.objective_mw) ||
        !validate_assignment(p, Scheme::JD, jd).empty())
      report(Scheme::JD, jd, jd_ref);
    const Assignment dd = solvers.dd(p), dd_ref = oracle_exhaustive(p, Scheme::DD);
    if (!same_objective(dd.objective_mw, dd_ref.objective_mw) ||
        !validate_assignment(p, Scheme::DD, dd).empty())
      report(Scheme::DD, dd, dd_ref);
    const Assignment hd = solvers.hd(p), hd_ref = oracle_exhaustive(p, Scheme::HD);
    if (hd.joint_count != hd_ref.joint_count ||
        !same_objective(hd.objective_mw, hd_ref.objective_mw) ||
        !validate_assignment(p, Scheme::HD, hd).empty())
      report(Scheme::HD, hd, hd_ref);
  }
  out << "oracle-check: " << trials << " trials, " << mismatches
      << " mismatches\n";
  return mismatches == 0 ? kExitOk : kExitOracleMismatch;
}

int cmd_solve(const RunConfig& cfg, Scheme scheme, std::uint64_t seed,
              const fs::path& out_dir, std::ostream& out) {
  const Scenario sc = scenario_from_config(cfg, seed);
  const AssociationProblem p = make_problem(sc, cfg.power_control, cfg.problem);
  const Assignment a = solve(p, scheme);
  ensure_dir(out_dir);
  auto f = open_csv(out_dir / "assignment.csv");
  write_assignment_csv(f, p, a);
  const bool has_objective = !std::isnan(a.objective_mw);
  out << "scheme=" << to_string(scheme) << " objective_mw="
      << (has_objective ? format_real(a.objective_mw) : "n/a")
      << " objective_dbm="
      << (has_objective ? format_real(mw_to_dbm(a.objective_mw)) : "n/a")
      << " joint_count=" << a.joint_count
      << " optimal=" << (a.optimal ? "true" : "false") << '\n';
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const fs::path& out_dir,
                 std::ostream& out) {
  const BinnedSeries series = run_monte_carlo(cfg.monte_carlo, cfg.topology,
                                              cfg.power_control, cfg.problem);
  ensure_dir(out_dir);
  {
    auto f = open_csv(out_dir / "interference.csv");
    write_interference_csv(f, series);
  }
  {
    auto f = open_csv(out_dir / "resources.csv");
    write_resources_csv(f, series);
  }
  {
    auto f = open_csv(out_dir / "txpower_cdf.csv");
    write_txpower_cdf_csv(f, series, cfg.monte_carlo.cdf_link_length_m);
  }
  std::size_t hd_cells = 0, hd_optimal = 0;
  for (const auto& r : series.records) {
    if (r.scheme != Scheme::HD) continue;
    hd_cells += r.runs;
    hd_optimal += r.optimal_runs;
  }
  out << "simulate: " << series.records.size() << " records written to "
      << out_dir.string() << '\n';
  if (hd_cells > 0)
    out << "simulate: HD optimal in " << hd_optimal << '/' << hd_cells
        << " cells\n";
  return kExitOk;
}

int cmd_generate(const RunConfig& cfg, std::uint64_t seed,
                 const fs::path& out_dir, std::ostream& out) {
  const Scenario sc = scenario_from_config(cfg, seed);
  ensure_dir(out_dir);
  write_scenario_csvs(out_dir, sc);
  out << "generate: " << sc.num_bs() << " BSs, " << sc.links.size()
      << " links, " << sc.devices.size() << " devices written to "
      << out_dir.string() << '\n';
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"D2D cell association: JC/JD/DD/HD solvers and sweeps",
               "d2d_assoc"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scheme_name = "dd";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::string out_dir = "out";
  std::size_t trials = 200;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "INI config file");
    if (config_required) opt->required();
    sub->add_option("--seed", seed, "Scenario seed / base seed override");
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
  };
  auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario");
  add_common(solve_cmd, true);
  solve_cmd->add_option("--scheme", scheme_name, "jc|jd|dd|hd")->capture_default_str();
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo sweep");
  add_common(sim_cmd, true);
  sim_cmd->add_option("--runs", runs, "Runs per link length");
  auto* oracle_cmd =
      app.add_subcommand("oracle-check", "Compare solvers with brute force");
  add_common(oracle_cmd, false);
  oracle_cmd->add_option("--trials", trials, "Random instances")->capture_default_str();
  auto* gen_cmd = app.add_subcommand("generate", "Dump a scenario to CSV");
  add_common(gen_cmd, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) cfg.monte_carlo.base_seed = *seed;
    const std::uint64_t s = cfg.monte_carlo.base_seed;
    if (*solve_cmd) return cmd_solve(cfg, parse_scheme(scheme_name), s, out_dir, out);
    if (*gen_cmd) return cmd_generate(cfg, s, out_dir, out);
    if (*oracle_cmd) return cmd_oracle_check(cfg.power_control, trials, s, out);
    if (*sim_cmd) {
      if (runs) cfg.monte_carlo.runs = *runs;
      if (const std::size_t cap = env_thread_cap(); cap > 0) {
        std::size_t t = cfg.monte_carlo.threads;
        if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
        cfg.monte_carlo.threads = std::min(t, cap);
      }
      return cmd_simulate(cfg, out_dir, out);
    }
  } catch (const InfeasibleError& e) {
    err << "error: infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace d2d
