#include "d2d/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "d2d/errors.hpp"

namespace d2d {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_real(const std::string& key, const std::string& raw) {
  const std::string v = lower(trim(raw));
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  if (v == "-inf") return -std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(key + ": expected a number, got '" + raw + "'");
  return out;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(key + ": expected an integer, got '" + raw + "'");
  return out;
}

std::vector<double> to_reals(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  for (const auto& item : split(raw, ',')) out.push_back(to_real(key, item));
  return out;
}

BsKind to_kind(const std::string& key, const std::string& raw) {
  const std::string v = lower(trim(raw));
  if (v == "macro") return BsKind::Macro;
  if (v == "small") return BsKind::Small;
  throw ConfigError(key + ": expected 'macro' or 'small', got '" + raw + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

#define D2D_REAL(field) \
  [](RunConfig& c, const std::string& k, const std::string& v) { c.field = to_real(k, v); }
#define D2D_INT(field, type) \
  [](RunConfig& c, const std::string& k, const std::string& v) { c.field = to_int<type>(k, v); }

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"topology.area_width_m", D2D_REAL(topology.area_width_m)},
      {"topology.area_height_m", D2D_REAL(topology.area_height_m)},
      {"topology.num_macro", D2D_INT(topology.num_macro, std::size_t)},
      {"topology.num_small", D2D_INT(topology.num_small, std::size_t)},
      {"topology.num_links", D2D_INT(topology.num_links, std::size_t)},
      {"topology.link_length_m", D2D_REAL(topology.link_length_m)},
      {"topology.link_length_min_m",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (!c.topology.length_range) c.topology.length_range.emplace();
         c.topology.length_range->min_m = to_real(k, v);
       }},
      {"topology.link_length_max_m",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (!c.topology.length_range) c.topology.length_range.emplace();
         c.topology.length_range->max_m = to_real(k, v);
       }},
      {"topology.min_bs_spacing_m", D2D_REAL(topology.min_bs_spacing_m)},
      {"topology.macro_tx_power_dbm", D2D_REAL(topology.macro_tx_power_dbm)},
      {"topology.small_tx_power_dbm", D2D_REAL(topology.small_tx_power_dbm)},
      {"topology.carrier_frequency_ghz", D2D_REAL(topology.carrier_frequency_ghz)},
      {"topology.hotspot_fraction", D2D_REAL(topology.hotspot_fraction)},
      {"topology.hotspot_radius_m", D2D_REAL(topology.hotspot_radius_m)},

      {"channel.pl_intercept_macro_db", D2D_REAL(topology.channel.pl_intercept_macro_db)},
      {"channel.pl_exponent_macro", D2D_REAL(topology.channel.pl_exponent_macro)},
      {"channel.pl_intercept_small_db", D2D_REAL(topology.channel.pl_intercept_small_db)},
      {"channel.pl_exponent_small", D2D_REAL(topology.channel.pl_exponent_small)},
      {"channel.shadowing_sigma_macro_db",
       D2D_REAL(topology.channel.shadowing_sigma_macro_db)},
      {"channel.shadowing_sigma_small_db",
       D2D_REAL(topology.channel.shadowing_sigma_small_db)},
      {"channel.min_coupling_loss_db", D2D_REAL(topology.channel.min_coupling_loss_db)},

      {"power_control.p_max_dbm", D2D_REAL(power_control.p_max_dbm)},
      {"power_control.p0_dbm", D2D_REAL(power_control.p0_dbm)},
      {"power_control.alpha", D2D_REAL(power_control.alpha)},
      {"power_control.num_prb", D2D_INT(power_control.num_prb, int)},

      {"problem.capacity_per_bs", D2D_INT(problem.capacity_per_bs, int)},
      {"problem.capacity_override",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.problem.capacity_override.clear();
         for (const auto& item : split(v, ','))
           c.problem.capacity_override.push_back(to_int<int>(k, item));
       }},
      {"problem.i_th_dbm", D2D_REAL(problem.i_th_dbm)},
      {"problem.n_closest", D2D_INT(problem.n_closest, int)},
      {"problem.jc_rule",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string rule = lower(trim(v));
         if (rule == "linear_mean") c.problem.jc_rule = JcRule::LinearMean;
         else if (rule == "min_of_pair") c.problem.jc_rule = JcRule::MinOfPair;
         else throw ConfigError(k + ": expected linear_mean or min_of_pair");
       }},
      {"problem.candidate_rank",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string rank = lower(trim(v));
         if (rank == "pair_interference")
           c.problem.candidate_rank = CandidateRank::PairInterference;
         else if (rank == "mean_pathloss")
           c.problem.candidate_rank = CandidateRank::MeanPathloss;
         else throw ConfigError(k + ": expected pair_interference or mean_pathloss");
       }},
      {"problem.node_budget", D2D_INT(problem.node_budget, std::size_t)},

      {"monte_carlo.runs", D2D_INT(monte_carlo.runs, std::size_t)},
      {"monte_carlo.link_lengths_m",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.monte_carlo.link_lengths_m = to_reals(k, v);
       }},
      {"monte_carlo.schemes",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.monte_carlo.schemes.clear();
         for (const auto& item : split(v, ','))
           c.monte_carlo.schemes.push_back(parse_scheme(item));
       }},
      {"monte_carlo.base_seed", D2D_INT(monte_carlo.base_seed, std::uint64_t)},
      {"monte_carlo.links_per_run", D2D_INT(monte_carlo.links_per_run, std::size_t)},
      {"monte_carlo.cdf_link_length_m", D2D_REAL(monte_carlo.cdf_link_length_m)},
      {"monte_carlo.threads", D2D_INT(monte_carlo.threads, std::size_t)},
  };
  return table;
}

#undef D2D_REAL
#undef D2D_INT

ExplicitScenario parse_scenario(const pt::ptree& section) {
  std::vector<std::string> kinds;
  std::vector<double> powers;
  std::vector<std::vector<double>> rows;
  for (const auto& [key, node] : section) {
    const std::string full = "scenario." + key;
    const std::string value = node.get_value<std::string>();
    if (key == "bs_kinds") {
      kinds = split(value, ',');
    } else if (key == "bs_tx_power_dbm") {
      powers = to_reals(full, value);
    } else if (key == "loss_db") {
      // Rows separated by '|', entries by whitespace or commas.
      for (const auto& row : split(value, '|')) {
        std::string normalized = row;
        std::replace(normalized.begin(), normalized.end(), ',', ' ');
        std::istringstream in(normalized);
        std::vector<double> r;
        std::string tok;
        while (in >> tok) r.push_back(to_real(full, tok));
        rows.push_back(std::move(r));
      }
    } else {
      throw ConfigError("unknown key '" + full + "'");
    }
  }
  if (kinds.empty()) throw ConfigError("scenario.bs_kinds is required");
  if (rows.empty()) throw ConfigError("scenario.loss_db is required");
  if (!powers.empty() && powers.size() != kinds.size())
    throw ConfigError("scenario.bs_tx_power_dbm must list one power per BS");

  ExplicitScenario sc;
  for (std::size_t b = 0; b < kinds.size(); ++b) {
    BaseStation bs;
    bs.id = b;
    bs.kind = to_kind("scenario.bs_kinds", kinds[b]);
    sc.base_stations.push_back(bs);
    if (!powers.empty()) sc.base_stations.back().tx_power_dbm = powers[b];
  }
  if (rows.size() % 2 != 0)
    throw ConfigError("scenario.loss_db needs two rows per link");
  sc.loss_db = Matrix<double>(rows.size(), kinds.size());
  for (std::size_t u = 0; u < rows.size(); ++u) {
    if (rows[u].size() != kinds.size())
      throw ConfigError("scenario.loss_db row " + std::to_string(u) + " has " +
                        std::to_string(rows[u].size()) + " entries, expected " +
                        std::to_string(kinds.size()));
    for (std::size_t b = 0; b < kinds.size(); ++b) sc.loss_db(u, b) = rows[u][b];
  }
  return sc;
}

void validate(const RunConfig& cfg) {
  const auto& t = cfg.topology;
  if (!(t.area_width_m > 0.0) || !(t.area_height_m > 0.0))
    throw ConfigError("topology.area_width_m/area_height_m must be positive");
  if (t.length_range && !(t.length_range->min_m > 0.0 &&
                          t.length_range->max_m >= t.length_range->min_m))
    throw ConfigError("topology.link_length_min_m/max_m must satisfy 0 < min <= max");
  if (!(t.hotspot_fraction >= 0.0 && t.hotspot_fraction <= 1.0))
    throw ConfigError("topology.hotspot_fraction must lie in [0, 1]");
  if (t.channel.pl_exponent_macro <= 0.0 || t.channel.pl_exponent_small <= 0.0)
    throw ConfigError("channel.pl_exponent_* must be positive");
  if (t.channel.shadowing_sigma_macro_db < 0.0 ||
      t.channel.shadowing_sigma_small_db < 0.0)
    throw ConfigError("channel.shadowing_sigma_* must be >= 0");
  validate(cfg.power_control);
  if (cfg.problem.n_closest < 1) throw ConfigError("problem.n_closest must be >= 1");
  if (cfg.problem.capacity_per_bs < 0)
    throw ConfigError("problem.capacity_per_bs must be >= 0");
  if (std::isnan(cfg.problem.i_th_dbm))
    throw ConfigError("problem.i_th_dbm must be a number");
  validate(cfg.monte_carlo);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  RunConfig cfg;
  const auto& table = setters();
  for (const auto& [section, node] : tree) {
    if (node.empty() && !node.data().empty())
      throw ConfigError("key '" + section + "' must live inside a section");
    if (section == "scenario") {
      cfg.scenario = parse_scenario(node);
      continue;
    }
    for (const auto& [key, value] : node) {
      const std::string full = section + "." + key;
      const auto it = table.find(full);
      if (it == table.end()) throw ConfigError("unknown key '" + full + "'");
      it->second(cfg, full, value.get_value<std::string>());
    }
    if (node.empty()) {
      bool known = false;
      for (const auto& [k, s] : table) known = known || k.rfind(section + ".", 0) == 0;
      if (!known) throw ConfigError("unknown section '" + section + "'");
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Scenario scenario_from_config(const RunConfig& cfg, std::uint64_t seed) {
  if (cfg.scenario) {
    Scenario sc =
        make_explicit_scenario(cfg.scenario->base_stations, cfg.scenario->loss_db);
    sc.seed = seed;
    return sc;
  }
  return generate_scenario(cfg.topology, seed);
}

}  // namespace d2d
