#include "phantom/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "phantom/errors.hpp"

namespace phantom {

namespace {

struct ValueError {
  std::string message;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ValueError{"expects a number, got '" + std::string(v) + "'"};
  return out;
}

template <typename Int>
Int parse_integer(std::string_view v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ValueError{"expects an integer, got '" + std::string(v) + "'"};
  return out;
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ValueError{"expects true or false, got '" + std::string(v) + "'"};
}

template <typename Enum, size_t N>
Enum parse_enum(std::string_view v, const std::array<Enum, N>& choices) {
  for (Enum e : choices) {
    if (to_string(e) == v) return e;
  }
  std::string allowed;
  for (Enum e : choices) allowed += (allowed.empty() ? "" : ", ") + std::string(to_string(e));
  throw ValueError{"expects one of {" + allowed + "}, got '" + std::string(v) + "'"};
}

// Shortest representation that reads back to the same double.
std::string exact(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename Config>
struct Field {
  KeyInfo info;
  std::function<void(Config&, std::string_view)> set;
  std::function<std::string(const Config&)> get;
};

#define PH_DOUBLE(key, alias, unit, desc, member)                                                  \
  Field<C>{{key, alias, unit, desc}, [](C& c, std::string_view v) { c.member = parse_double(v); }, \
           [](const C& c) { return exact(c.member); }}
#define PH_INT(key, alias, unit, desc, member)                                                          \
  Field<C>{{key, alias, unit, desc}, [](C& c, std::string_view v) { c.member = parse_integer<int>(v); }, \
           [](const C& c) { return std::to_string(c.member); }}

const std::vector<Field<SimConfig>>& sim_fields() {
  using C = SimConfig;
  static const std::vector<Field<C>> fields = {
      Field<C>{{"environment", "case", "", "indoor or outdoor; selects the default column"},
               [](C& c, std::string_view v) {
                 c.scenario.environment =
                     parse_enum(v, std::array{Environment::indoor, Environment::outdoor});
                 c.propagation.environment = c.scenario.environment;
               },
               [](const C& c) { return std::string(to_string(c.scenario.environment)); }},
      PH_INT("num_macros", "M", "count", "macrocells", scenario.num_macros),
      PH_INT("phantoms_per_macro", "N", "count", "phantom cells per macrocell", scenario.phantoms_per_macro),
      PH_INT("num_users", "U", "count", "users", scenario.num_users),
      PH_DOUBLE("speed_min", "", "m/s", "lower bound of user speed", scenario.speed_min),
      PH_DOUBLE("speed_max", "", "m/s", "upper bound of user speed", scenario.speed_max),
      PH_DOUBLE("macro_radius", "R", "m", "macrocell radius", scenario.macro_radius),
      PH_DOUBLE("phantom_radius", "r", "m", "phantom cell radius", scenario.phantom_radius),
      PH_DOUBLE("macro_spacing", "", "m", "distance between adjacent macro centers", scenario.macro_spacing),
      PH_DOUBLE("macro_tx_dbm", "", "dBm", "macrocell transmit power", scenario.macro_tx_dbm),
      PH_DOUBLE("phantom_tx_dbm", "", "dBm", "phantom cell transmit power", scenario.phantom_tx_dbm),
      PH_INT("macro_capacity", "", "users", "maximum users per macrocell", scenario.macro_capacity),
      PH_INT("phantom_capacity", "", "users", "maximum users per phantom cell", scenario.phantom_capacity),
      PH_DOUBLE("open_access_probability", "", "", "probability a phantom cell is open access",
                scenario.open_access_probability),
      PH_DOUBLE("subscriber_fraction", "", "", "fraction of users subscribed to each closed phantom",
                scenario.subscriber_fraction),
      Field<C>{{"user_region", "", "", "macro_discs or buildings; where users live and move"},
               [](C& c, std::string_view v) {
                 c.scenario.user_region = parse_enum(v, std::array{UserRegion::macro_discs, UserRegion::buildings});
               },
               [](const C& c) { return std::string(to_string(c.scenario.user_region)); }},
      PH_DOUBLE("penetration_loss_db", "", "dB", "outdoor-indoor penetration loss", propagation.penetration_loss_db),
      PH_DOUBLE("wall_loss_db", "", "dB", "loss per internal wall", propagation.wall_loss_db),
      PH_DOUBLE("shadow_sigma_db", "", "dB", "log-normal shadowing standard deviation",
                propagation.shadow_sigma_db),
      PH_DOUBLE("noise_power_dbm", "", "dBm", "noise power", propagation.noise_power_dbm),
      Field<C>{{"interference_model", "", "", "co_tier or paper_literal"},
               [](C& c, std::string_view v) {
                 c.propagation.interference =
                     parse_enum(v, std::array{InterferenceModel::co_tier, InterferenceModel::paper_literal});
               },
               [](const C& c) { return std::string(to_string(c.propagation.interference)); }},
      PH_DOUBLE("eta_m_th", "", "linear", "macrocell SINR threshold", policy.eta_m_th),
      PH_DOUBLE("eta_ph_th", "", "linear", "phantom cell SINR threshold", policy.eta_ph_th),
      PH_DOUBLE("hysteresis_macro", "", "linear", "macro handover hysteresis margin", policy.hysteresis_macro),
      PH_DOUBLE("hysteresis_phantom", "", "linear", "phantom handover hysteresis margin",
                policy.hysteresis_phantom),
      PH_DOUBLE("t_expected", "", "s", "minimum expected dwell time", policy.t_expected),
      Field<C>{{"dwell_check", "", "", "gate phantom handovers on predicted dwell time"},
               [](C& c, std::string_view v) { c.policy.dwell_check = parse_bool(v); },
               [](const C& c) { return std::string(c.policy.dwell_check ? "true" : "false"); }},
      Field<C>{{"mode", "", "", "proposed or baseline handover policy"},
               [](C& c, std::string_view v) {
                 c.policy.mode = parse_enum(v, std::array{PolicyMode::proposed, PolicyMode::baseline});
               },
               [](const C& c) { return std::string(to_string(c.policy.mode)); }},
      PH_DOUBLE("dt", "", "s", "time step", dt),
      PH_DOUBLE("duration", "", "s", "simulated time per replication", duration),
      PH_INT("replications", "", "count", "independent replications", replications),
      Field<C>{{"seed", "", "", "base seed; replication i uses seed + i"},
               [](C& c, std::string_view v) {
                 c.seed = parse_integer<std::uint64_t>(v);
                 c.scenario.seed = c.seed;
               },
               [](const C& c) { return std::to_string(c.seed); }},
  };
  return fields;
}

const std::vector<Field<analysis::AnalysisParams>>& analysis_fields() {
  using C = analysis::AnalysisParams;
  static const std::vector<Field<C>> fields = {
      PH_DOUBLE("lambda_n", "", "1/s", "new-call arrival rate", traffic.lambda_n),
      PH_DOUBLE("lambda_h", "", "1/s", "handover-call arrival rate", traffic.lambda_h),
      PH_DOUBLE("mu_c", "", "1/s", "channel release rate", traffic.mu_c),
      PH_INT("total_channels", "T", "count", "channels per phantom cell", traffic.total_channels),
      PH_INT("guard_channels", "g", "count", "channels reserved for handover calls", traffic.guard_channels),
      PH_DOUBLE("mean_dwell", "", "s", "mean dwell time", mean_dwell),
      PH_DOUBLE("t_expected", "", "s", "mean expected dwell time", t_expected),
      PH_DOUBLE("access_probability", "", "", "probability a phantom admits the user", access),
      PH_DOUBLE("eta_m_th", "", "linear", "macrocell SINR threshold", eta_m_th),
      PH_DOUBLE("eta_ph_th", "", "linear", "phantom cell SINR threshold", eta_ph_th),
      PH_DOUBLE("macro_mean", "", "linear", "mean macrocell SINR", macro_mean),
      PH_DOUBLE("macro_sigma", "", "linear", "macrocell SINR standard deviation", macro_sigma),
      PH_DOUBLE("phantom_mu_prev", "", "linear", "mean phantom SINR at the previous step", phantom.mu_prev),
      PH_DOUBLE("phantom_mu_curr", "", "linear", "mean phantom SINR at the current step", phantom.mu_curr),
      PH_DOUBLE("phantom_sigma_prev", "", "linear", "phantom SINR standard deviation, previous step",
                phantom.sigma_prev),
      PH_DOUBLE("phantom_sigma_curr", "", "linear", "phantom SINR standard deviation, current step",
                phantom.sigma_curr),
      PH_DOUBLE("phantom_rho", "", "", "correlation of consecutive phantom SINR samples", phantom.rho),
      PH_DOUBLE("p11", "", "", "probability S1 -> S1", from_s1[0]),
      PH_DOUBLE("p21", "", "", "probability S1 -> S2", from_s1[1]),
      PH_DOUBLE("p31", "", "", "probability S1 -> S3", from_s1[2]),
      PH_DOUBLE("p32", "", "", "probability S2 -> S3", p32),
      PH_DOUBLE("p13", "", "", "probability S3 -> S1", from_s3[0]),
      PH_DOUBLE("p23", "", "", "probability S3 -> S2", from_s3[1]),
      PH_DOUBLE("p33", "", "", "probability S3 -> S3", from_s3[2]),
  };
  return fields;
}

#undef PH_DOUBLE
#undef PH_INT

struct Entry {
  int line = 0;
  std::string key;
  std::string value;
};

template <typename Config>
std::vector<Entry> tokenize(std::string_view text, const std::vector<Field<Config>>& fields) {
  std::vector<Entry> entries;
  std::vector<std::string> unknown;
  std::map<std::string, int> seen;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + std::string(line) +
                        "'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const auto field = std::find_if(fields.begin(), fields.end(), [&](const Field<Config>& f) {
      return f.info.key == key || (!f.info.alias.empty() && f.info.alias == key);
    });
    if (field == fields.end()) {
      unknown.push_back(key + " (line " + std::to_string(line_no) + ")");
      continue;
    }
    const auto [it, inserted] = seen.emplace(field->info.key, line_no);
    if (!inserted)
      throw ConfigError("line " + std::to_string(line_no) + ": key '" + field->info.key +
                        "' already set on line " + std::to_string(it->second));
    entries.push_back({line_no, field->info.key, value});
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys: ";
    for (size_t i = 0; i < unknown.size(); ++i) msg += (i ? ", " : "") + unknown[i];
    throw ConfigError(msg);
  }
  return entries;
}

template <typename Config>
void apply(Config& config, const Entry& e, const std::vector<Field<Config>>& fields) {
  const auto& field = *std::find_if(fields.begin(), fields.end(),
                                    [&](const Field<Config>& f) { return f.info.key == e.key; });
  try {
    field.set(config, e.value);
  } catch (const ValueError& err) {
    throw ConfigError("line " + std::to_string(e.line) + ": key '" + e.key + "' " + err.message);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename Config>
std::vector<KeyInfo> schema_of(const std::vector<Field<Config>>& fields) {
  std::vector<KeyInfo> out;
  for (const auto& f : fields) out.push_back(f.info);
  return out;
}

}  // namespace

SimConfig parse_config(std::string_view text) {
  const auto& fields = sim_fields();
  const std::vector<Entry> entries = tokenize(text, fields);

  SimConfig config = SimConfig::defaults_for(Environment::outdoor);
  const auto env = std::find_if(entries.begin(), entries.end(), [](const Entry& e) { return e.key == "environment"; });
  if (env != entries.end()) {
    apply(config, *env, fields);
    config = SimConfig::defaults_for(config.scenario.environment);
  }
  for (const Entry& e : entries) apply(config, e, fields);
  config.validate();
  return config;
}

SimConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string dump_config(const SimConfig& config) {
  std::string out;
  for (const auto& f : sim_fields()) out += f.info.key + " = " + f.get(config) + "\n";
  return out;
}

std::vector<std::string> describe_config(const SimConfig& config) {
  const SimConfig defaults = SimConfig::defaults_for(config.scenario.environment);
  std::vector<std::string> lines;
  for (const auto& f : sim_fields()) {
    const std::string value = f.get(config);
    std::string line = f.info.key + " = " + value + "  # " + f.info.description;
    if (!f.info.unit.empty()) line += " [" + f.info.unit + "]";
    if (f.info.key != "environment") line += value == f.get(defaults) ? " (default)" : " (set)";
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<KeyInfo> config_schema() { return schema_of(sim_fields()); }

analysis::AnalysisParams parse_analysis_params(std::string_view text) {
  const auto& fields = analysis_fields();
  analysis::AnalysisParams params;
  for (const Entry& e : tokenize(text, fields)) apply(params, e, fields);
  return params;
}

analysis::AnalysisParams load_analysis_params(const std::filesystem::path& path) {
  return parse_analysis_params(read_file(path));
}

std::vector<KeyInfo> analysis_schema() { return schema_of(analysis_fields()); }

bool operator==(const SimConfig& a, const SimConfig& b) { return dump_config(a) == dump_config(b); }

}  // namespace phantom
