// Command-line driver: one subcommand per experiment, plus time-tag dump and
// offline correlation of a dump.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "franson/config.hpp"
#include "franson/errors.hpp"
#include "franson/experiment.hpp"
#include "franson/io.hpp"

namespace fs = std::filesystem;
using namespace franson;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<std::string> mode;
  std::string input;
};

RunConfig load(const CommonOptions& opt) {
  RunConfig cfg = load_config(opt.config_path);
  if (opt.seed) {
    cfg.seed = *opt.seed;
    cfg.validate();
  }
  return cfg;
}

Mode resolve_mode(const CommonOptions& opt, const RunConfig& cfg) {
  return opt.mode ? parse_mode(*opt.mode) : cfg.scan.mode;
}

void write_meta(const fs::path& out, const std::string& command, const RunConfig& cfg, double wall_seconds) {
  nlohmann::ordered_json j;
  j["tool"] = "franson";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["seed"] = cfg.seed;
  j["config_hash"] = config_hash(cfg);
  j["wall_time_s"] = wall_seconds;
  j["regime"] = {{"alice", {{"incoherent_ensemble", cfg.regime_a.incoherent_ensemble},
                            {"individual_coherent", cfg.regime_a.individual_coherent}}},
                 {"bob", {{"incoherent_ensemble", cfg.regime_b.incoherent_ensemble},
                          {"individual_coherent", cfg.regime_b.individual_coherent}}}};
  j["warnings"] = cfg.warnings;
  j["config"] = config_to_json(cfg);
  write_file(out / "meta.json", j.dump(2) + "\n");
}

void emit_scan(const fs::path& out, const ScanResult& result) {
  std::ostringstream csv;
  write_scan_csv(csv, result);
  write_file(out / (result.experiment + ".csv"), csv.str());
  write_file(out / (result.experiment + ".json"), scan_summary_json(result).dump(2) + "\n");
}

int run_command(const std::string& command, const CommonOptions& opt) {
  const auto started = std::chrono::steady_clock::now();
  const RunConfig cfg = load(opt);
  const fs::path out(opt.out_dir);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";

  if (command == "fringe-scan") {
    emit_scan(out, run_fringe_scan(cfg, resolve_mode(opt, cfg)));
  } else if (command == "local-scan") {
    emit_scan(out, run_local_scan(cfg));
  } else if (command == "crossover") {
    emit_scan(out, run_crossover_sweep(cfg));
  } else if (command == "tau-decay") {
    emit_scan(out, run_tau_decay(cfg, resolve_mode(opt, cfg)));
  } else if (command == "pump-sweep") {
    emit_scan(out, run_pump_sweep(cfg, resolve_mode(opt, cfg)));
  } else if (command == "chsh") {
    emit_scan(out, run_chsh(cfg, resolve_mode(opt, cfg)));
  } else if (command == "timetags") {
    const PipelineRun run = run_configured_pipeline(cfg);
    std::ostringstream text;
    write_timetags(text, merge_streams(run.tags), cfg.seed, config_hash(cfg));
    write_file(out / "timetags.txt", text.str());
  } else if (command == "correlate") {
    std::ifstream in(opt.input);
    if (!in) throw std::runtime_error("cannot open time-tag dump " + opt.input);
    const TagDump dump = read_timetags(in);
    const std::string hash = config_hash(cfg);
    if (dump.config_hash != hash) {
      throw std::runtime_error("config hash mismatch: dump " + dump.config_hash + ", config " + hash);
    }
    const TagStreams streams = split_streams(dump.tags);
    const CoincidenceHistogram hist = correlate(streams.a, streams.b, cfg.correlator_params());
    std::ostringstream csv;
    write_histogram_csv(csv, hist, dump.seed, dump.config_hash);
    write_file(out / "histogram.csv", csv.str());
    write_file(out / "histogram.json", histogram_summary_json(hist, dump.seed, dump.config_hash).dump(2) + "\n");
  }

  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - started;
  write_meta(out, command, cfg, wall.count());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Franson two-photon interferometry simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonOptions opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"fringe-scan", "central-peak rate versus phi + psi"},
      {"local-scan", "local intensities and coincidence fringe from one run"},
      {"crossover", "local visibility versus delta * t_sl"},
      {"tau-decay", "nonlocal visibility versus imposed t_A - t_B offset"},
      {"pump-sweep", "nonlocal visibility versus pump linewidth"},
      {"chsh", "CHSH S from the configured settings"},
      {"timetags", "dump the raw time-tag streams"},
      {"correlate", "coincidence histogram from a time-tag dump"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "override the configured seed");
    sub->add_option("--out", opt.out_dir, "output directory");
    if (name == "fringe-scan" || name == "tau-decay" || name == "pump-sweep" || name == "chsh") {
      sub->add_option("--mode", opt.mode, "analytic or montecarlo")->check(CLI::IsMember({"analytic", "montecarlo"}));
    }
    if (name == "correlate") {
      sub->add_option("--input", opt.input, "time-tag dump written by `timetags`")->required()->check(CLI::ExistingFile);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    return run_command(app.get_subcommands().front()->get_name(), opt);
  } catch (const ConfigError& e) {
    std::cerr << "franson: " << e.field() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "franson: " << e.what() << "\n";
    return 1;
  }
}
