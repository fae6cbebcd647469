#include "franson/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "franson/errors.hpp"

namespace franson {

namespace {

char party_char(Party p) { return p == Party::A ? 'A' : 'B'; }

std::string format_double(double v) {
  // shortest representation that round-trips
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::ordered_json fit_json(const SinusoidFit& f) {
  return {{"ok", f.ok},
          {"offset", f.offset},
          {"amplitude", f.amplitude},
          {"phase", f.phase},
          {"visibility", f.visibility},
          {"visibility_error", f.visibility_error},
          {"phase_error", f.phase_error},
          {"residual_rms", f.residual_rms},
          {"maxmin_visibility", f.maxmin_visibility}};
}

nlohmann::ordered_json totals_json(const PeakTotals& t) {
  return {{"central", t.central}, {"side_plus", t.side_plus}, {"side_minus", t.side_minus}};
}

}  // namespace

void write_timetags(std::ostream& out, std::span<const TimeTag> tags, std::uint64_t seed,
                    const std::string& config_hash) {
  out << "# franson-timetags 1\n";
  out << "# seed " << seed << "\n";
  out << "# config_hash " << config_hash << "\n";
  out << "# columns party port time_ps\n";
  for (const TimeTag& t : tags) {
    out << party_char(t.party()) << ' ' << static_cast<int>(t.port()) << ' ' << t.time().count() << '\n';
  }
}

TagDump read_timetags(std::istream& in) {
  TagDump dump;
  bool have_magic = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line[0] == '#') {
      std::string hash, key;
      fields >> hash >> key;
      if (key == "franson-timetags") {
        int version = 0;
        fields >> version;
        if (version != 1) throw ParseError(line_no, 1, "unsupported time-tag dump version");
        have_magic = true;
      } else if (key == "seed") {
        if (!(fields >> dump.seed)) throw ParseError(line_no, 1, "bad seed header");
      } else if (key == "config_hash") {
        fields >> dump.config_hash;
      }
      continue;
    }
    if (!have_magic) throw ParseError(line_no, 1, "missing '# franson-timetags 1' header");
    std::string party;
    int port = 0;
    std::int64_t time = 0;
    std::string extra;
    if (!(fields >> party >> port >> time) || (fields >> extra) || (party != "A" && party != "B") ||
        (port != 5 && port != 6)) {
      throw ParseError(line_no, 1, "expected '<A|B> <5|6> <time_ps>'");
    }
    const TimeTag tag(party == "A" ? Party::A : Party::B, port == 5 ? Port::Five : Port::Six, Picoseconds(time));
    if (!dump.tags.empty() && tag.time() < dump.tags.back().time()) {
      throw ParseError(line_no, 1, "time tags are not in time order");
    }
    dump.tags.push_back(tag);
  }
  if (!have_magic) throw ParseError(line_no + 1, 1, "missing '# franson-timetags 1' header");
  return dump;
}

void write_histogram_csv(std::ostream& out, const CoincidenceHistogram& hist, std::uint64_t seed,
                         const std::string& config_hash) {
  out << "# seed " << seed << "\n# config_hash " << config_hash << "\n";
  out << "tau_ps,portA,portB,count\n";
  for (std::size_t k = 0; k < hist.bin_count(); ++k) {
    for (Port a : kPorts) {
      for (Port b : kPorts) {
        out << hist.bin_lower_edge(k).count() << ',' << static_cast<int>(a) << ',' << static_cast<int>(b)
            << ',' << hist.count(a, b, k) << '\n';
      }
    }
  }
}

nlohmann::ordered_json histogram_summary_json(const CoincidenceHistogram& hist, std::uint64_t seed,
                                              const std::string& config_hash) {
  const PeakSummary peaks = peak_counts(hist);
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["config_hash"] = config_hash;
  const CorrelatorParams& p = hist.params();
  j["params"] = {{"window_ps", p.window.count()},
                 {"bin_width_ps", p.bin_width.count()},
                 {"tau_max_ps", p.tau_max.count()},
                 {"t_sl_ps", p.t_sl.count()},
                 {"center_ps", p.center.count()}};
  j["overlapping_windows"] = hist.overlapping_windows();
  j["totals"] = totals_json(peaks.all);
  nlohmann::ordered_json ports;
  for (Port a : kPorts) {
    for (Port b : kPorts) {
      ports[std::to_string(static_cast<int>(a)) + std::to_string(static_cast<int>(b))] = totals_json(peaks.at(a, b));
    }
  }
  j["by_ports"] = ports;
  j["central_fraction"] = peaks.central_fraction();
  return j;
}

void write_scan_csv(std::ostream& out, const ScanResult& r) {
  out << "# experiment " << r.experiment << "\n# seed " << r.seed << "\n# config_hash " << r.config_hash << "\n";
  out << r.variable;
  for (const Series& s : r.series) {
    out << ',' << s.name;
    if (!s.errors.empty()) out << ',' << s.name << "_err";
  }
  out << '\n';
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    out << format_double(r.grid[i]);
    for (const Series& s : r.series) {
      out << ',' << format_double(s.values[i]);
      if (!s.errors.empty()) out << ',' << format_double(s.errors[i]);
    }
    out << '\n';
  }
}

nlohmann::ordered_json scan_summary_json(const ScanResult& r) {
  nlohmann::ordered_json j;
  j["experiment"] = r.experiment;
  j["seed"] = r.seed;
  j["config_hash"] = r.config_hash;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [name, value] : r.summary) summary[name] = value;
  j["summary"] = summary;
  nlohmann::ordered_json fits = nlohmann::ordered_json::object();
  for (const auto& [name, fit] : r.fits) fits[name] = fit_json(fit);
  j["fits"] = fits;
  j["warnings"] = r.warnings;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace franson
