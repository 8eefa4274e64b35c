#pragma once

// INI experiment configuration. Every key carries its unit in its name
// (_db, _dbm, _m, _hz, _s, _mw, _bytes, _rad, _pps) and is converted to SI
// at load. Unknown sections or keys are rejected.
//
//   [geometry]  elements, spacing_h, spacing_v, carrier_freq_hz
//   [scenario]  path_gain_db, path_loss_exponent, dist_ris_bs_m, dist_ris_ue_m,
//               dist_jammer_m, dist_ris_jammer_m, bs_azimuth_rad, bs_elevation_rad,
//               user_azimuth_rad, user_elevation_rad, jammer_azimuth_rad,
//               jammer_elevation_rad, jammer_power_mw, user_power_mw,
//               ris_noise_dbm, awgn_dbm
//   [traffic]   arrival_rate_pps, retransmissions, header_time_s, bandwidth_hz
//   [fbl]       blocklength, payload_bytes
//   [ga]        see ga_keys() below
//   [sweep]     see sweep_keys() below
//
// Lists are comma separated. Per-user lists of length 1 are broadcast to all
// users; the user count is the length of dist_ris_ue_m. Angles accept plain
// radians or multiples of pi such as "pi/6", "2*pi", "-pi/4".

#include <risjam/error.hpp>
#include <risjam/optimizer.hpp>
#include <risjam/scenario.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace risjam {

inline constexpr const char* tool_version = "1.0.0";

enum class Preset
{
  desk,
  paper,
};

/// Grids and fixed beamforming policies of the three sweeps.
struct SweepSettings
{
  // delay / energy-efficiency versus blocklength
  std::vector<double> arrival_rates{100.0, 400.0, 700.0, 1000.0, 1300.0};
  long blocklength_min = 20;
  long blocklength_max = 400;
  long blocklength_step = 4;
  long delay_ee_retransmissions = 1;
  double policy_beta = 1.0;
  std::size_t delay_ee_cophase_user = 0;

  // reliability versus amplitude
  std::vector<std::size_t> rel_elements{4, 100, 400, 900};
  double beta_min = 1e-9;
  double beta_max = 100.0;
  std::size_t beta_points = 111;
  bool beta_log = true;
  long rel_blocklength = 400;
  std::size_t rel_cophase_user = 1;

  // SJNR versus element count
  std::vector<std::size_t> sjnr_elements{4, 16, 36, 64, 100, 196, 400, 625, 900};
  double sjnr_beta_total = 0.01;
  std::size_t sjnr_cophase_user = 0;
  bool sjnr_use_ga = false;
};

struct ExperimentConfig
{
  Scenario scenario = reference_scenario();
  ConstraintSet constraints;
  GaSettings ga;
  SweepSettings sweep;
  Preset preset = Preset::desk;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
};

namespace detail {

inline std::string trim(std::string s)
{
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline ConfigError bad_value(const std::string& key, const std::string& value, const char* why)
{
  return ConfigError(ConfigErrorKind::invalid_value,
                     "invalid value '" + value + "' for " + key + ": " + why);
}

inline double parse_real(const std::string& key, const std::string& raw)
{
  const auto s = trim(raw);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty() || !std::isfinite(v))
    throw bad_value(key, raw, "expected a finite number");
  return v;
}

inline long parse_integer(const std::string& key, const std::string& raw)
{
  const auto s = trim(raw);
  long v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty())
    throw bad_value(key, raw, "expected an integer");
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& raw)
{
  const auto s = trim(raw);
  if (s == "true" || s == "1" || s == "yes")
    return true;
  if (s == "false" || s == "0" || s == "no")
    return false;
  throw bad_value(key, raw, "expected true or false");
}

inline double parse_angle(const std::string& key, const std::string& raw)
{
  static const std::regex pi_form(R"(^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*((?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))?\s*$)");
  static const std::regex neg_pi(R"(^\s*-\s*pi\s*(?:/\s*((?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))?\s*$)");
  std::smatch m;
  if (std::regex_match(raw, m, neg_pi)) {
    const double den = m[1].matched ? parse_real(key, m[1].str()) : 1.0;
    if (den == 0.0)
      throw bad_value(key, raw, "division by zero");
    return -std::numbers::pi / den;
  }
  if (std::regex_match(raw, m, pi_form)) {
    const double coef = m[1].matched ? parse_real(key, m[1].str()) : 1.0;
    const double den = m[2].matched ? parse_real(key, m[2].str()) : 1.0;
    if (den == 0.0)
      throw bad_value(key, raw, "division by zero");
    return coef * std::numbers::pi / den;
  }
  return parse_real(key, raw);
}

inline std::vector<std::string> split_list(const std::string& raw)
{
  std::vector<std::string> items;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ','))
    items.push_back(trim(item));
  if (items.empty())
    items.push_back("");
  return items;
}

template <typename F>
auto parse_list(const std::string& key, const std::string& raw, F parse)
{
  std::vector<decltype(parse(key, raw))> out;
  for (const auto& item : split_list(raw))
    out.push_back(parse(key, item));
  return out;
}

inline std::size_t parse_square(const std::string& key, const std::string& raw)
{
  const long n = parse_integer(key, raw);
  if (n < 1)
    throw bad_value(key, raw, "element count must be positive");
  if (!RisGeometry::square_side(static_cast<std::size_t>(n)))
    throw ConfigError(ConfigErrorKind::non_square,
                      key + " = " + trim(raw) + " is not a perfect square element count");
  return static_cast<std::size_t>(n);
}

inline std::string format_real(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string format_list(const std::vector<T>& v, std::function<std::string(const T&)> fmt)
{
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i)
      out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

using KeyTable = std::map<std::string, std::set<std::string>>;

inline const KeyTable& known_keys()
{
  static const KeyTable table{
    {"geometry", {"elements", "spacing_h", "spacing_v", "carrier_freq_hz"}},
    {"scenario",
     {"path_gain_db", "path_loss_exponent", "dist_ris_bs_m", "dist_ris_ue_m", "dist_jammer_m",
      "dist_ris_jammer_m", "bs_azimuth_rad", "bs_elevation_rad", "user_azimuth_rad",
      "user_elevation_rad", "jammer_azimuth_rad", "jammer_elevation_rad", "jammer_power_mw",
      "user_power_mw", "ris_noise_dbm", "awgn_dbm"}},
    {"traffic", {"arrival_rate_pps", "retransmissions", "header_time_s", "bandwidth_hz"}},
    {"fbl", {"blocklength", "payload_bytes"}},
    {"ga",
     {"population_size", "max_generations", "crossover_rate", "mutation_rate", "mutation_scale",
      "mutation_decay", "elite_count", "tournament_size", "seed", "constraint_tolerance",
      "function_tolerance", "stall_generations", "cophase_seed_fraction", "threads",
      "delay_threshold_s", "reliability_threshold", "beta_max", "power_max_mw", "power_min_mw",
      "retransmissions_max", "blocklength_min", "blocklength_max"}},
    {"sweep",
     {"arrival_rates_pps", "blocklength_min", "blocklength_max", "blocklength_step",
      "delay_ee_retransmissions", "policy_beta", "delay_ee_cophase_user", "rel_elements",
      "beta_min", "beta_max", "beta_points", "beta_spacing", "rel_blocklength",
      "rel_cophase_user", "sjnr_elements", "sjnr_beta_total", "sjnr_cophase_user",
      "sjnr_use_ga"}},
  };
  return table;
}

using RawConfig = std::map<std::string, std::map<std::string, std::string>>;

inline RawConfig read_raw(std::istream& in)
{
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(ConfigErrorKind::syntax, std::string("malformed config: ") + e.what());
  }
  const auto& table = known_keys();
  RawConfig raw;
  for (const auto& [section, body] : tree) {
    if (body.empty())
      throw ConfigError(ConfigErrorKind::unknown_key,
                        "key '" + section + "' must appear inside a section");
    const auto known = table.find(section);
    if (known == table.end())
      throw ConfigError(ConfigErrorKind::unknown_key, "unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!known->second.contains(key))
        throw ConfigError(ConfigErrorKind::unknown_key,
                          "unknown key '" + key + "' in [" + section + "]");
      raw[section][key] = value.data();
    }
  }
  return raw;
}

class RawView
{
public:
  explicit RawView(const RawConfig& raw) : raw_(raw) {}

  const std::string* find(const std::string& section, const std::string& key) const
  {
    const auto s = raw_.find(section);
    if (s == raw_.end())
      return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  template <typename T, typename F>
  void read(const std::string& section, const std::string& key, T& target, F parse) const
  {
    if (const auto* v = find(section, key))
      target = parse(section + "." + key, *v);
  }

private:
  const RawConfig& raw_;
};

template <typename T>
std::vector<T> per_user(const std::string& key, std::vector<T> values, std::size_t users)
{
  if (values.size() == 1 && users > 1)
    values.assign(users, values.front());
  if (values.size() != users)
    throw ConfigError(ConfigErrorKind::invalid_value,
                      key + " needs 1 or " + std::to_string(users) + " entries");
  return values;
}

inline std::size_t parse_user_index(const std::string& key, const std::string& raw)
{
  const long k = parse_integer(key, raw);
  if (k < 1)
    throw bad_value(key, raw, "user indices start at 1");
  return static_cast<std::size_t>(k - 1);
}

inline std::size_t parse_count(const std::string& key, const std::string& raw)
{
  const long v = parse_integer(key, raw);
  if (v < 0)
    throw bad_value(key, raw, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline double parse_mw(const std::string& key, const std::string& raw)
{
  return parse_real(key, raw) * 1e-3;
}

} // namespace detail

inline void apply_preset(ExperimentConfig& cfg, Preset preset)
{
  const auto base = preset == Preset::paper ? GaSettings::paper() : GaSettings::desk();
  cfg.preset = preset;
  cfg.ga.population_size = base.population_size;
  cfg.ga.max_generations = base.max_generations;
}

/// Parses config text on top of the reference defaults (and `preset` GA sizes).
inline ExperimentConfig parse_config(std::istream& in, Preset preset = Preset::desk)
{
  using namespace detail;
  const RawConfig raw = read_raw(in);
  const RawView view(raw);

  ExperimentConfig cfg;
  apply_preset(cfg, preset);
  auto& s = cfg.scenario;
  auto& links = s.links;

  // geometry
  {
    std::size_t elements = s.geometry.element_count();
    double sh = s.geometry.spacing_h(), sv = s.geometry.spacing_v(), fc = s.geometry.carrier_freq();
    view.read("geometry", "elements", elements, parse_square);
    view.read("geometry", "spacing_h", sh, parse_real);
    view.read("geometry", "spacing_v", sv, parse_real);
    view.read("geometry", "carrier_freq_hz", fc, parse_real);
    try {
      s.geometry = RisGeometry::square(elements, sh, sv, fc);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(ConfigErrorKind::invalid_value, std::string("[geometry] ") + e.what());
    }
  }

  // scenario
  auto angle_list = [](const std::string& k, const std::string& v) {
    return parse_list(k, v, parse_angle);
  };
  auto real_list = [](const std::string& k, const std::string& v) {
    return parse_list(k, v, parse_real);
  };
  if (const auto* v = view.find("scenario", "path_gain_db"))
    links.path_gain = db_to_linear(parse_real("scenario.path_gain_db", *v));
  view.read("scenario", "path_loss_exponent", links.path_loss_exp, parse_real);
  view.read("scenario", "dist_ris_bs_m", links.dist_ris_bs, parse_real);
  view.read("scenario", "dist_ris_ue_m", links.dist_ris_ue, real_list);
  view.read("scenario", "dist_jammer_m", links.dist_jammer, parse_real);
  if (const auto* v = view.find("scenario", "dist_ris_jammer_m"))
    links.dist_ris_jammer = parse_real("scenario.dist_ris_jammer_m", *v);
  view.read("scenario", "bs_azimuth_rad", links.dir_bs.azimuth, parse_angle);
  view.read("scenario", "bs_elevation_rad", links.dir_bs.elevation, parse_angle);
  view.read("scenario", "jammer_azimuth_rad", links.dir_jammer.azimuth, parse_angle);
  view.read("scenario", "jammer_elevation_rad", links.dir_jammer.elevation, parse_angle);
  view.read("scenario", "jammer_power_mw", links.jammer_power, parse_mw);

  const std::size_t users = links.dist_ris_ue.size();
  std::vector<double> user_az{links.dir_users.front().azimuth};
  std::vector<double> user_el{links.dir_users.front().elevation};
  view.read("scenario", "user_azimuth_rad", user_az, angle_list);
  view.read("scenario", "user_elevation_rad", user_el, angle_list);
  user_az = per_user("scenario.user_azimuth_rad", user_az, users);
  user_el = per_user("scenario.user_elevation_rad", user_el, users);
  links.dir_users.clear();
  for (std::size_t k = 0; k < users; ++k)
    links.dir_users.push_back({user_az[k], user_el[k]});

  std::vector<double> powers{s.powers.user_powers.front()};
  view.read("scenario", "user_power_mw", powers, [](const std::string& k, const std::string& v) {
    return parse_list(k, v, parse_mw);
  });
  s.powers.user_powers = per_user("scenario.user_power_mw", powers, users);

  if (const auto* v = view.find("scenario", "ris_noise_dbm"))
    s.noise.ris_thermal_var = dbm_to_watts(parse_real("scenario.ris_noise_dbm", *v));
  if (const auto* v = view.find("scenario", "awgn_dbm"))
    s.noise.awgn_var = dbm_to_watts(parse_real("scenario.awgn_dbm", *v));

  // traffic
  std::vector<double> rates{s.traffic.arrival_rates.front()};
  view.read("traffic", "arrival_rate_pps", rates, real_list);
  s.traffic.arrival_rates = per_user("traffic.arrival_rate_pps", rates, users);
  view.read("traffic", "retransmissions", s.traffic.retransmissions, parse_integer);
  view.read("traffic", "header_time_s", s.frame.header_time, parse_real);
  view.read("traffic", "bandwidth_hz", s.frame.bandwidth, parse_real);

  // fbl
  view.read("fbl", "blocklength", s.frame.blocklength, parse_integer);
  long payload_bytes = s.payload_bits / 8;
  view.read("fbl", "payload_bytes", payload_bytes, parse_integer);
  s.payload_bits = payload_bytes * 8;

  // ga
  auto& ga = cfg.ga;
  auto& c = cfg.constraints;
  view.read("ga", "population_size", ga.population_size, parse_count);
  view.read("ga", "max_generations", ga.max_generations, parse_count);
  view.read("ga", "crossover_rate", ga.crossover_rate, parse_real);
  view.read("ga", "mutation_rate", ga.mutation_rate, parse_real);
  view.read("ga", "mutation_scale", ga.mutation_scale, parse_real);
  view.read("ga", "mutation_decay", ga.mutation_decay, parse_real);
  view.read("ga", "elite_count", ga.elite_count, parse_count);
  view.read("ga", "tournament_size", ga.tournament_size, parse_count);
  view.read("ga", "seed", cfg.seed, [](const std::string& k, const std::string& v) {
    const auto t = trim(v);
    std::uint64_t out = 0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || end != t.data() + t.size() || t.empty())
      throw bad_value(k, v, "expected an unsigned 64-bit integer");
    return out;
  });
  view.read("ga", "constraint_tolerance", ga.constraint_tolerance, parse_real);
  view.read("ga", "function_tolerance", ga.function_tolerance, parse_real);
  view.read("ga", "stall_generations", ga.stall_generations, parse_count);
  view.read("ga", "cophase_seed_fraction", ga.cophase_seed_fraction, parse_real);
  view.read("ga", "threads", ga.threads, parse_count);
  view.read("ga", "delay_threshold_s", c.delay_thr, parse_real);
  view.read("ga", "reliability_threshold", c.rel_thr, parse_real);
  view.read("ga", "beta_max", c.beta_max, parse_real);
  view.read("ga", "power_max_mw", c.p_max, parse_mw);
  view.read("ga", "power_min_mw", c.p_min, parse_mw);
  view.read("ga", "retransmissions_max", c.l_max, parse_integer);
  view.read("ga", "blocklength_min", c.nb_min, parse_integer);
  view.read("ga", "blocklength_max", c.nb_max, parse_integer);
  ga.rng_seed = cfg.seed;

  // sweep
  auto& sw = cfg.sweep;
  auto square_list = [](const std::string& k, const std::string& v) {
    return parse_list(k, v, parse_square);
  };
  view.read("sweep", "arrival_rates_pps", sw.arrival_rates, real_list);
  view.read("sweep", "blocklength_min", sw.blocklength_min, parse_integer);
  view.read("sweep", "blocklength_max", sw.blocklength_max, parse_integer);
  view.read("sweep", "blocklength_step", sw.blocklength_step, parse_integer);
  view.read("sweep", "delay_ee_retransmissions", sw.delay_ee_retransmissions, parse_integer);
  view.read("sweep", "policy_beta", sw.policy_beta, parse_real);
  view.read("sweep", "delay_ee_cophase_user", sw.delay_ee_cophase_user, parse_user_index);
  view.read("sweep", "rel_elements", sw.rel_elements, square_list);
  view.read("sweep", "beta_min", sw.beta_min, parse_real);
  view.read("sweep", "beta_max", sw.beta_max, parse_real);
  view.read("sweep", "beta_points", sw.beta_points, parse_count);
  if (const auto* v = view.find("sweep", "beta_spacing")) {
    const auto t = trim(*v);
    if (t != "log" && t != "linear")
      throw bad_value("sweep.beta_spacing", *v, "expected log or linear");
    sw.beta_log = t == "log";
  }
  view.read("sweep", "rel_blocklength", sw.rel_blocklength, parse_integer);
  view.read("sweep", "rel_cophase_user", sw.rel_cophase_user, parse_user_index);
  // the default targets user 2; single-user configs fall back to user 1
  if (!view.find("sweep", "rel_cophase_user"))
    sw.rel_cophase_user = std::min(sw.rel_cophase_user, users - 1);
  view.read("sweep", "sjnr_elements", sw.sjnr_elements, square_list);
  view.read("sweep", "sjnr_beta_total", sw.sjnr_beta_total, parse_real);
  view.read("sweep", "sjnr_cophase_user", sw.sjnr_cophase_user, parse_user_index);
  view.read("sweep", "sjnr_use_ga", sw.sjnr_use_ga, parse_bool);

  auto invalid = [](const std::string& what) {
    return ConfigError(ConfigErrorKind::invalid_value, what);
  };
  try {
    s.validate();
    s.powers.validate(std::numeric_limits<double>::infinity());
    c.validate();
    ga.validate();
  } catch (const Error& e) {
    throw invalid(e.what());
  }
  if (sw.arrival_rates.empty() || sw.blocklength_min < 1 || sw.blocklength_step < 1 ||
      sw.blocklength_max < sw.blocklength_min)
    throw invalid("sweep blocklength grid must satisfy 1 <= min <= max and step >= 1");
  for (double r : sw.arrival_rates)
    if (!(r > 0.0))
      throw invalid("sweep arrival rates must be positive");
  if (sw.delay_ee_retransmissions < 1 || sw.rel_blocklength < 1)
    throw invalid("sweep retransmissions and blocklength must be at least 1");
  if (!(sw.policy_beta >= 0.0) || !(sw.sjnr_beta_total >= 0.0))
    throw invalid("sweep amplitudes must be non-negative");
  if (sw.beta_points < 2 || !(sw.beta_max > sw.beta_min) || !(sw.beta_min >= 0.0) ||
      (sw.beta_log && !(sw.beta_min > 0.0)))
    throw invalid("sweep beta grid needs >= 2 points, 0 <= min < max (min > 0 for log spacing)");
  for (auto u : {sw.delay_ee_cophase_user, sw.rel_cophase_user, sw.sjnr_cophase_user})
    if (u >= users)
      throw invalid("sweep co-phasing user index exceeds the user count");
  return cfg;
}

inline ExperimentConfig parse_config(const std::string& text, Preset preset = Preset::desk)
{
  std::istringstream in(text);
  return parse_config(in, preset);
}

inline ExperimentConfig load_config(const std::filesystem::path& path, Preset preset = Preset::desk)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError(ConfigErrorKind::missing_file, "cannot open config file " + path.string());
  return parse_config(in, preset);
}

/// Canonical INI rendering of every setting; parse_config() accepts it.
inline std::string echo_config(const ExperimentConfig& cfg)
{
  using detail::format_list;
  using detail::format_real;
  const auto& s = cfg.scenario;
  const auto& l = s.links;
  const auto& ga = cfg.ga;
  const auto& c = cfg.constraints;
  const auto& sw = cfg.sweep;
  std::function<std::string(const double&)> real = [](const double& v) { return format_real(v); };
  std::function<std::string(const std::size_t&)> count = [](const std::size_t& v) {
    return std::to_string(v);
  };
  std::vector<double> az, el, mw;
  for (const auto& d : l.dir_users) {
    az.push_back(d.azimuth);
    el.push_back(d.elevation);
  }
  for (double p : s.powers.user_powers)
    mw.push_back(p * 1e3);

  std::ostringstream o;
  o << "[geometry]\n"
    << "elements = " << s.geometry.element_count() << "\n"
    << "spacing_h = " << format_real(s.geometry.spacing_h()) << "\n"
    << "spacing_v = " << format_real(s.geometry.spacing_v()) << "\n"
    << "carrier_freq_hz = " << format_real(s.geometry.carrier_freq()) << "\n\n"
    << "[scenario]\n"
    << "path_gain_db = " << format_real(10.0 * std::log10(l.path_gain)) << "\n"
    << "path_loss_exponent = " << format_real(l.path_loss_exp) << "\n"
    << "dist_ris_bs_m = " << format_real(l.dist_ris_bs) << "\n"
    << "dist_ris_ue_m = " << format_list(l.dist_ris_ue, real) << "\n"
    << "dist_jammer_m = " << format_real(l.dist_jammer) << "\n";
  if (l.dist_ris_jammer)
    o << "dist_ris_jammer_m = " << format_real(*l.dist_ris_jammer) << "\n";
  o << "bs_azimuth_rad = " << format_real(l.dir_bs.azimuth) << "\n"
    << "bs_elevation_rad = " << format_real(l.dir_bs.elevation) << "\n"
    << "user_azimuth_rad = " << format_list(az, real) << "\n"
    << "user_elevation_rad = " << format_list(el, real) << "\n"
    << "jammer_azimuth_rad = " << format_real(l.dir_jammer.azimuth) << "\n"
    << "jammer_elevation_rad = " << format_real(l.dir_jammer.elevation) << "\n"
    << "jammer_power_mw = " << format_real(l.jammer_power * 1e3) << "\n"
    << "user_power_mw = " << format_list(mw, real) << "\n"
    << "ris_noise_dbm = " << format_real(watts_to_dbm(s.noise.ris_thermal_var)) << "\n"
    << "awgn_dbm = " << format_real(watts_to_dbm(s.noise.awgn_var)) << "\n\n"
    << "[traffic]\n"
    << "arrival_rate_pps = " << format_list(s.traffic.arrival_rates, real) << "\n"
    << "retransmissions = " << s.traffic.retransmissions << "\n"
    << "header_time_s = " << format_real(s.frame.header_time) << "\n"
    << "bandwidth_hz = " << format_real(s.frame.bandwidth) << "\n\n"
    << "[fbl]\n"
    << "blocklength = " << s.frame.blocklength << "\n"
    << "payload_bytes = " << s.payload_bits / 8 << "\n\n"
    << "[ga]\n"
    << "population_size = " << ga.population_size << "\n"
    << "max_generations = " << ga.max_generations << "\n"
    << "crossover_rate = " << format_real(ga.crossover_rate) << "\n"
    << "mutation_rate = " << format_real(ga.mutation_rate) << "\n"
    << "mutation_scale = " << format_real(ga.mutation_scale) << "\n"
    << "mutation_decay = " << format_real(ga.mutation_decay) << "\n"
    << "elite_count = " << ga.elite_count << "\n"
    << "tournament_size = " << ga.tournament_size << "\n"
    << "seed = " << cfg.seed << "\n"
    << "constraint_tolerance = " << format_real(ga.constraint_tolerance) << "\n"
    << "function_tolerance = " << format_real(ga.function_tolerance) << "\n"
    << "stall_generations = " << ga.stall_generations << "\n"
    << "cophase_seed_fraction = " << format_real(ga.cophase_seed_fraction) << "\n"
    << "threads = " << ga.threads << "\n"
    << "delay_threshold_s = " << format_real(c.delay_thr) << "\n"
    << "reliability_threshold = " << format_real(c.rel_thr) << "\n"
    << "beta_max = " << format_real(c.beta_max) << "\n"
    << "power_max_mw = " << format_real(c.p_max * 1e3) << "\n"
    << "power_min_mw = " << format_real(c.p_min * 1e3) << "\n"
    << "retransmissions_max = " << c.l_max << "\n"
    << "blocklength_min = " << c.nb_min << "\n"
    << "blocklength_max = " << c.nb_max << "\n\n"
    << "[sweep]\n"
    << "arrival_rates_pps = " << format_list(sw.arrival_rates, real) << "\n"
    << "blocklength_min = " << sw.blocklength_min << "\n"
    << "blocklength_max = " << sw.blocklength_max << "\n"
    << "blocklength_step = " << sw.blocklength_step << "\n"
    << "delay_ee_retransmissions = " << sw.delay_ee_retransmissions << "\n"
    << "policy_beta = " << format_real(sw.policy_beta) << "\n"
    << "delay_ee_cophase_user = " << sw.delay_ee_cophase_user + 1 << "\n"
    << "rel_elements = " << format_list(sw.rel_elements, count) << "\n"
    << "beta_min = " << format_real(sw.beta_min) << "\n"
    << "beta_max = " << format_real(sw.beta_max) << "\n"
    << "beta_points = " << sw.beta_points << "\n"
    << "beta_spacing = " << (sw.beta_log ? "log" : "linear") << "\n"
    << "rel_blocklength = " << sw.rel_blocklength << "\n"
    << "rel_cophase_user = " << sw.rel_cophase_user + 1 << "\n"
    << "sjnr_elements = " << format_list(sw.sjnr_elements, count) << "\n"
    << "sjnr_beta_total = " << format_real(sw.sjnr_beta_total) << "\n"
    << "sjnr_cophase_user = " << sw.sjnr_cophase_user + 1 << "\n"
    << "sjnr_use_ga = " << (sw.sjnr_use_ga ? "true" : "false") << "\n";
  return o.str();
}

/// 64-bit FNV-1a of the canonical config text, as 16 hex digits.
inline std::string config_hash(const ExperimentConfig& cfg)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : echo_config(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace risjam
