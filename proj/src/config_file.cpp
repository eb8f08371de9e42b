#include "sdlab/config_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

namespace sdlab {

ConfigParseError::ConfigParseError(std::size_t line, std::string field,
                                   const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + field + ": " + message
                                  : field + ": " + message),
      line_(line),
      field_(std::move(field)) {}

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

struct Entry {
  std::string value;
  std::size_t line;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  const Entry& entry(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigParseError(0, key, "required key missing");
    return it->second;
  }

  double real(const std::string& key, double fallback) const {
    return has(key) ? parse_real(key, entry(key).value, entry(key).line) : fallback;
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const auto& e = entry(key);
    std::uint64_t out = 0;
    const auto res = std::from_chars(e.value.data(), e.value.data() + e.value.size(), out);
    if (res.ec != std::errc{} || res.ptr != e.value.data() + e.value.size())
      throw ConfigParseError(e.line, key, "expected a non-negative integer, got '" + e.value + "'");
    return out;
  }

  std::vector<double> real_list(const std::string& key) const {
    const auto& e = entry(key);
    std::vector<double> out;
    for (const auto item : split_list(e.value)) out.push_back(parse_real(key, item, e.line));
    return out;
  }

  static double parse_real(const std::string& key, std::string_view text, std::size_t line) {
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
      const double num = parse_real(key, trim(text.substr(0, slash)), line);
      const double den = parse_real(key, trim(text.substr(slash + 1)), line);
      if (den == 0.0) throw ConfigParseError(line, key, "zero denominator");
      return num / den;
    }
    double out = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
      throw ConfigParseError(line, key, "expected a real number, got '" + std::string(text) + "'");
    return out;
  }

 private:
  std::map<std::string, Entry> entries_;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"model", {"preset", "a", "b", "c", "x0"}},
      {"truncation", {"c_bar", "gamma", "epsilon", "h_hat"}},
      {"tem", {"epsilon2"}},
      {"experiment",
       {"horizon", "schemes", "step_sizes", "ref_step", "paths", "seed", "error_mode",
        "workers"}},
  };
  return keys;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  std::map<std::string, Entry> entries;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigParseError(line_no, std::string(line), "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (known_keys().count(section) == 0)
        throw ConfigParseError(line_no, section, "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigParseError(line_no, std::string(line), "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (section.empty()) throw ConfigParseError(line_no, key, "key outside of any section");
    if (known_keys().at(section).count(key) == 0)
      throw ConfigParseError(line_no, section + "." + key, "unknown key");
    const std::string full = section + "." + key;
    if (entries.count(full) != 0) throw ConfigParseError(line_no, full, "duplicate key");
    entries.emplace(full, Entry{value, line_no});
  }

  const Reader r(std::move(entries));
  ExperimentConfig cfg;

  if (r.has("model.preset") && r.entry("model.preset").value != "ginzburg-landau")
    throw ConfigParseError(r.entry("model.preset").line, "model.preset",
                           "unknown preset '" + r.entry("model.preset").value + "'");
  cfg.model.a = r.real("model.a", cfg.model.a);
  cfg.model.b = r.real("model.b", cfg.model.b);
  cfg.model.c = r.real("model.c", cfg.model.c);
  cfg.model.x0 = r.real("model.x0", cfg.model.x0);

  cfg.truncation.c_bar = r.real("truncation.c_bar", cfg.truncation.c_bar);
  cfg.truncation.gamma = r.real("truncation.gamma", cfg.truncation.gamma);
  cfg.truncation.epsilon = r.real("truncation.epsilon", cfg.truncation.epsilon);
  cfg.truncation.h_hat = r.real("truncation.h_hat", cfg.truncation.h_hat);

  cfg.epsilon2 = r.real("tem.epsilon2", cfg.epsilon2);

  cfg.horizon = r.real("experiment.horizon", cfg.horizon);
  if (r.has("experiment.schemes")) {
    const auto& e = r.entry("experiment.schemes");
    cfg.schemes.clear();
    for (const auto name : split_list(e.value)) {
      const auto kind = parse_scheme(name);
      if (!kind)
        throw ConfigParseError(e.line, "experiment.schemes",
                               "unknown scheme '" + std::string(name) + "'");
      cfg.schemes.push_back(*kind);
    }
  }
  cfg.step_sizes = r.real_list("experiment.step_sizes");
  cfg.ref_step = Reader::parse_real("experiment.ref_step", r.entry("experiment.ref_step").value,
                                    r.entry("experiment.ref_step").line);
  cfg.paths = r.unsigned_int("experiment.paths", cfg.paths);
  cfg.seed = r.unsigned_int("experiment.seed", cfg.seed);
  if (r.has("experiment.error_mode")) {
    const auto& e = r.entry("experiment.error_mode");
    if (e.value == "sup")
      cfg.error_mode = ErrorMode::Supremum;
    else if (e.value == "end")
      cfg.error_mode = ErrorMode::Terminal;
    else
      throw ConfigParseError(e.line, "experiment.error_mode", "expected 'sup' or 'end'");
  }
  const auto workers = r.unsigned_int("experiment.workers", cfg.workers);
  if (workers > 4096) throw ConfigParseError(r.entry("experiment.workers").line, "experiment.workers", "too many workers");
  cfg.workers = static_cast<unsigned>(workers);
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError(0, path, "cannot open config file");
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[model]\n"
      << "preset = ginzburg-landau\n"
      << "a = " << format_real(cfg.model.a) << '\n'
      << "b = " << format_real(cfg.model.b) << '\n'
      << "c = " << format_real(cfg.model.c) << '\n'
      << "x0 = " << format_real(cfg.model.x0) << "\n\n"
      << "[truncation]\n"
      << "c_bar = " << format_real(cfg.truncation.c_bar) << '\n'
      << "gamma = " << format_real(cfg.truncation.gamma) << '\n'
      << "epsilon = " << format_real(cfg.truncation.epsilon) << '\n'
      << "h_hat = " << format_real(cfg.truncation.h_hat) << "\n\n"
      << "[tem]\n"
      << "epsilon2 = " << format_real(cfg.epsilon2) << "\n\n"
      << "[experiment]\n"
      << "horizon = " << format_real(cfg.horizon) << '\n'
      << "schemes = ";
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
    out << (i ? ", " : "") << scheme_name(cfg.schemes[i]);
  out << "\nstep_sizes = ";
  for (std::size_t i = 0; i < cfg.step_sizes.size(); ++i)
    out << (i ? ", " : "") << format_real(cfg.step_sizes[i]);
  out << "\nref_step = " << format_real(cfg.ref_step) << '\n'
      << "paths = " << cfg.paths << '\n'
      << "seed = " << cfg.seed << '\n'
      << "error_mode = " << error_mode_name(cfg.error_mode) << '\n'
      << "workers = " << cfg.workers << '\n';
  return out.str();
}

}  // namespace sdlab
