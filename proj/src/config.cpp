#include "franson/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "franson/fit.hpp"

namespace franson {

using json = nlohmann::json;

const char* mode_name(Mode m) {
  return m == Mode::Analytic ? "analytic" : "montecarlo";
}

Mode parse_mode(std::string_view name) {
  if (name == "analytic") return Mode::Analytic;
  if (name == "montecarlo") return Mode::MonteCarlo;
  throw ConfigError("scan.mode", "scan.mode must be \"analytic\" or \"montecarlo\"");
}

ScanSettings::ScanSettings()
    : crossover_grid(log_grid(0.01, 100.0, 10)),
      tau_offsets{0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0},
      pump_grid{0.0, 0.15, 0.3, 0.5, 1.0},
      chsh{0.0, std::numbers::pi / 2, -std::numbers::pi / 4, std::numbers::pi / 4} {}

bool operator==(const RunConfig& x, const RunConfig& y) {
  return x.schema_version == y.schema_version && x.seed == y.seed && x.source == y.source &&
         x.alice == y.alice && x.bob == y.bob && x.detector == y.detector &&
         x.correlator == y.correlator && x.scan == y.scan;
}

namespace {

/// Reads one JSON object, remembering which keys were consumed so leftovers
/// can be reported by their dotted path.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_, "'" + path_ + "' must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    out = get<T>(key);
  }

  template <typename T>
  void read(const std::string& key, std::optional<T>& out) {
    if (!has(key)) return;
    out = get<T>(key);
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(node_.contains(key) ? node_.at(key) : empty, name(key));
  }

  void reject_unknown() const {
    for (const auto& item : node_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(name(item.key()), "unknown key '" + name(item.key()) + "'");
    }
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  template <typename T>
  T get(const std::string& key) {
    const json& v = node_.at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError(name(key), "'" + name(key) + "' must be a number");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<std::int64_t>() < 0)) {
          throw ConfigError(name(key), "'" + name(key) + "' must be a non-negative integer");
        }
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(name(key), "'" + name(key) + "' has the wrong type: " + e.what());
    }
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_umzi(Section s, UmziConfig& cfg) {
  s.read("t_sl", cfg.t_sl);
  s.read("phase", cfg.phase);
  s.read("gamma", cfg.gamma);
  s.reject_unknown();
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void require_increasing(const std::vector<double>& grid, const std::string& field, bool positive) {
  if (grid.empty()) throw ConfigError(field, field + " must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || (positive && !(grid[i] > 0)) || (!positive && grid[i] < 0)) {
      throw ConfigError(field, field + (positive ? " values must be > 0" : " values must be >= 0"));
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError(field, field + " must be strictly increasing");
  }
}

template <typename Fn>
void prefixed(const std::string& prefix, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.field(), e.what());
  }
}

}  // namespace

void RunConfig::validate() {
  if (schema_version != kSchemaVersion) {
    throw ConfigError("schema_version", "schema_version must be " + std::to_string(kSchemaVersion));
  }
  prefixed("source.", [&] { source.validate(); });
  prefixed("alice.", [&] { alice.validate(); });
  prefixed("bob.", [&] { bob.validate(); });
  prefixed("detector.", [&] { detector.validate(); });
  correlator_params().validate();

  if (scan.points < 8) throw ConfigError("scan.points", "scan.points must be >= 8");
  if (scan.pairs_per_point < 1) throw ConfigError("scan.pairs_per_point", "scan.pairs_per_point must be >= 1");
  require_increasing(scan.crossover_grid, "scan.crossover_grid", true);
  require_increasing(scan.tau_offsets, "scan.tau_offsets", false);
  require_increasing(scan.pump_grid, "scan.pump_grid", false);

  regime_a = classify_regime(alice, source);
  regime_b = classify_regime(bob, source);
  warnings = source.warnings();
  if (!regime_a.critical_condition() || !regime_b.critical_condition()) {
    warnings.emplace_back("critical UMZI condition not satisfied");
  }
  if (alice.t_sl != bob.t_sl) warnings.emplace_back("t_sl differs between parties; detuning cancellation is not exact");
  if (correlator_params().overlapping_windows()) warnings.emplace_back("peak windows overlap (window >= t_sl/2)");
}

CorrelatorParams RunConfig::correlator_params() const {
  CorrelatorParams p = CorrelatorParams::defaults_for(alice.t_sl);
  if (correlator.window) p.window = to_picoseconds(*correlator.window);
  if (correlator.bin_width) p.bin_width = to_picoseconds(*correlator.bin_width);
  if (correlator.tau_max) p.tau_max = to_picoseconds(*correlator.tau_max);
  return p;
}

DetectionSetup RunConfig::detection_setup() const {
  DetectionSetup s;
  s.a = alice;
  s.b = bob;
  s.detector = detector;
  s.bandwidth = source.delta;
  return s;
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(line, column, e.what());
  }

  RunConfig cfg;
  Section top(root, "");
  top.read("schema_version", cfg.schema_version);
  top.read("seed", cfg.seed);
  {
    Section s = top.child("source");
    s.read("f0", cfg.source.f0);
    s.read("delta", cfg.source.delta);
    s.read("pump_linewidth", cfg.source.pump_linewidth);
    s.read("tau_ind", cfg.source.tau_ind);
    s.read("pair_rate", cfg.source.pair_rate);
    s.reject_unknown();
  }
  read_umzi(top.child("alice"), cfg.alice);
  read_umzi(top.child("bob"), cfg.bob);
  {
    Section s = top.child("detector");
    s.read("jitter", cfg.detector.jitter);
    s.read("efficiency", cfg.detector.efficiency);
    s.reject_unknown();
  }
  {
    Section s = top.child("correlator");
    s.read("window", cfg.correlator.window);
    s.read("bin_width", cfg.correlator.bin_width);
    s.read("tau_max", cfg.correlator.tau_max);
    s.reject_unknown();
  }
  {
    Section s = top.child("scan");
    s.read("points", cfg.scan.points);
    s.read("pairs_per_point", cfg.scan.pairs_per_point);
    if (s.has("mode")) {
      std::string mode;
      s.read("mode", mode);
      cfg.scan.mode = parse_mode(mode);
    }
    s.read("crossover_grid", cfg.scan.crossover_grid);
    s.read("tau_offsets", cfg.scan.tau_offsets);
    s.read("pump_grid", cfg.scan.pump_grid);
    if (s.has("chsh_settings")) {
      std::vector<double> v;
      s.read("chsh_settings", v);
      if (v.size() != 4) throw ConfigError("scan.chsh_settings", "scan.chsh_settings must hold 4 angles [a, a', b, b']");
      cfg.scan.chsh = {v[0], v[1], v[2], v[3]};
    }
    s.reject_unknown();
  }
  top.reject_unknown();
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
  using oj = nlohmann::ordered_json;
  auto umzi = [](const UmziConfig& u) {
    oj j;
    j["t_sl"] = u.t_sl;
    j["phase"] = u.phase;
    if (u.gamma) j["gamma"] = *u.gamma;
    return j;
  };
  oj j;
  j["schema_version"] = cfg.schema_version;
  j["seed"] = cfg.seed;
  j["source"] = {{"f0", cfg.source.f0},
                 {"delta", cfg.source.delta},
                 {"pump_linewidth", cfg.source.pump_linewidth},
                 {"tau_ind", cfg.source.tau_ind},
                 {"pair_rate", cfg.source.pair_rate}};
  j["alice"] = umzi(cfg.alice);
  j["bob"] = umzi(cfg.bob);
  j["detector"] = {{"jitter", cfg.detector.jitter}, {"efficiency", cfg.detector.efficiency}};
  oj corr = oj::object();
  if (cfg.correlator.window) corr["window"] = *cfg.correlator.window;
  if (cfg.correlator.bin_width) corr["bin_width"] = *cfg.correlator.bin_width;
  if (cfg.correlator.tau_max) corr["tau_max"] = *cfg.correlator.tau_max;
  j["correlator"] = corr;
  const auto& c = cfg.scan.chsh;
  j["scan"] = {{"points", cfg.scan.points},
               {"pairs_per_point", cfg.scan.pairs_per_point},
               {"mode", mode_name(cfg.scan.mode)},
               {"crossover_grid", cfg.scan.crossover_grid},
               {"tau_offsets", cfg.scan.tau_offsets},
               {"pump_grid", cfg.scan.pump_grid},
               {"chsh_settings", {c.a, c.a_prime, c.b, c.b_prime}}};
  return j;
}

std::string serialize_config(const RunConfig& cfg) {
  return config_to_json(cfg).dump(2) + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(config_to_json(cfg).dump());
  return out.str();
}

}  // namespace franson
