#pragma once

// Batch-runner plumbing: CSV emission ('.' decimal, '\n' line ends, header
// row mandatory, one leading timestamped comment line), grid specifications
// {lin|log}:start:stop:count, an INI-style config reader, and the JSON run
// report (schema 1).

#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fsic {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string iso_timestamp() {
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

// First line is a timestamped comment (excluded from byte comparisons),
// second line the mandatory header row, then the data.
inline void write_csv(const std::string& path, const std::string& tool,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file: " + path);
  out << "# " << tool << " generated " << iso_timestamp() << "\n";
  for (size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << "\n";
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt_g(row[c]);
    out << "\n";
  }
}

// "lin:a:b:n", "log:a:b:n", or a single scalar
inline std::vector<double> parse_grid(const std::string& spec) {
  const auto fail = [&]() -> std::vector<double> {
    throw UsageError("bad grid spec '" + spec + "' (want {lin|log}:start:stop:count or a scalar)");
  };
  if (spec.rfind("lin:", 0) != 0 && spec.rfind("log:", 0) != 0) {
    try {
      size_t used = 0;
      const double v = std::stod(spec, &used);
      if (used != spec.size()) return fail();
      return {v};
    } catch (const std::exception&) {
      return fail();
    }
  }
  const bool logspace = spec[2] == 'g';
  std::vector<std::string> parts;
  std::stringstream ss(spec.substr(4));
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) return fail();
  double a, b;
  int n;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    n = std::stoi(parts[2]);
  } catch (const std::exception&) {
    return fail();
  }
  if (n < 1) return fail();
  if (logspace && (a <= 0.0 || b <= 0.0)) throw UsageError("log grid needs positive bounds");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : double(i) / (n - 1);
    g[i] = logspace ? std::exp(std::log(a) + (std::log(b) - std::log(a)) * t)
                    : a + (b - a) * t;
  }
  return g;
}

// sections of key = value lines; '#' and ';' start comments
struct Config {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static Config parse(std::istream& in) {
    Config cfg;
    std::string line, section = "";
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto comment = line.find_first_of("#;");
      if (comment != std::string::npos) line.erase(comment);
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw UsageError("config line " + std::to_string(lineno) +
                                                 ": unterminated section header");
        section = trim(line.substr(1, line.size() - 2));
        cfg.sections[section];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
      cfg.sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
  }
  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    return parse(in);
  }

  bool has(const std::string& section, const std::string& key) const {
    const auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
  }
  std::string get(const std::string& section, const std::string& key) const {
    if (!has(section, key)) throw UsageError("config: missing key '" + key + "' in [" + section + "]");
    return sections.at(section).at(key);
  }
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
    return has(section, key) ? sections.at(section).at(key) : fallback;
  }
  double get_double(const std::string& section, const std::string& key) const {
    try {
      return std::stod(get(section, key));
    } catch (const std::invalid_argument&) {
      throw UsageError("config: key '" + key + "' is not a number");
    }
  }
};

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  std::string experiment;
  double wall_ms = 0.0;
  std::vector<Assertion> assertions;
  std::vector<std::string> artifacts;

  bool pass() const {
    for (const auto& a : assertions)
      if (!a.pass) return false;
    return true;
  }
  void check(const std::string& name, bool ok, const std::string& detail = "") {
    assertions.push_back({name, ok, detail});
  }
  nlohmann::json to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["experiment"] = experiment;
    j["wall_ms"] = wall_ms;
    j["pass"] = pass();
    j["assertions"] = nlohmann::json::array();
    for (const auto& a : assertions)
      j["assertions"].push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
    j["artifacts"] = artifacts;
    return j;
  }
};

}  // namespace fsic
