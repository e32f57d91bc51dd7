#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>

#include "shgsim/analysis.hpp"
#include "shgsim/cavity.hpp"
#include "shgsim/errors.hpp"

namespace shgsim {

struct SweepBlock {
  double power_start = 0.1;  // W
  double power_stop = 1.3;   // W
  int power_points = 25;
};

struct ScanBlock {
  double pump_power = 1.1;  // W
  int samples = 201;
};

struct SimulateBlock {
  double pump_power = 1.1;  // W
};

struct FitBlock {
  std::string data_path;          // csv of (p_input_W, depletion)
  double bracket_lo = 1.0e-12;    // m/V
  double bracket_hi = 20.0e-12;   // m/V
};

struct MatchBlock {
  double bracket_lo = 1.0;  // W
  double bracket_hi = 2.5;  // W
};

/// Full run description: physical specs, solver settings and the
/// command-specific blocks. Every key is optional and defaults to the
/// bundled template value, except fit.data_path which the fit command
/// requires.
struct RunConfig {
  SimSystem system;
  SimConfig sim;
  SweepBlock sweep;
  ScanBlock scan;
  SimulateBlock simulate;
  FitBlock fit;
  MatchBlock match;
};

namespace detail {

struct KeyEntry {
  std::string unit;  // human-readable expected unit/type
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&, int)> set;
};

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// File-unit representation of an SI value. Dividing and re-multiplying by a
// decimal scale rounds twice, so pick the neighboring representable value
// whose product recovers the SI value exactly whenever one exists; this is
// what makes parse(write(c)) == c hold bitwise.
inline double file_units(double si_value, double scale) {
  const double w = si_value / scale;
  if (w * scale == si_value) return w;
  double up = w, down = w;
  for (int i = 0; i < 4; ++i) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    if (up * scale == si_value) return up;
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (down * scale == si_value) return down;
  }
  return w;
}

inline double parse_double(const std::string& section, const std::string& key,
                           const std::string& unit, const std::string& text,
                           int line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw config_error(section + "." + key, line, unit,
                       "config: key '" + section + "." + key + "' on line " +
                           std::to_string(line) + " expects a number (" + unit +
                           "), got '" + text + "'");
  return v;
}

inline long long parse_integer(const std::string& section, const std::string& key,
                               const std::string& unit, const std::string& text,
                               int line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw config_error(section + "." + key, line, unit,
                       "config: key '" + section + "." + key + "' on line " +
                           std::to_string(line) + " expects an integer (" + unit +
                           "), got '" + text + "'");
  return v;
}

/// Schema of the flat-section key-value format. Keys carry their unit in the
/// name; values are stored in SI internally.
inline const std::map<std::string, std::map<std::string, KeyEntry>>& config_schema() {
  static const auto* schema = [] {
    auto* s = new std::map<std::string, std::map<std::string, KeyEntry>>;
    auto add = [s](const std::string& section, const std::string& key,
                   const std::string& unit, double scale, auto accessor) {
      (*s)[section][key] = KeyEntry{
          unit,
          [accessor, scale](const RunConfig& c) {
            return format_double(
                file_units(accessor(const_cast<RunConfig&>(c)), scale));
          },
          [accessor, scale, section, key, unit](RunConfig& c, const std::string& v,
                                                int line) {
            accessor(c) = parse_double(section, key, unit, v, line) * scale;
          }};
    };
    auto add_int = [s](const std::string& section, const std::string& key,
                       const std::string& unit, auto accessor) {
      (*s)[section][key] = KeyEntry{
          unit,
          [accessor](const RunConfig& c) {
            return std::to_string(accessor(const_cast<RunConfig&>(c)));
          },
          [accessor, section, key, unit](RunConfig& c, const std::string& v, int line) {
            accessor(c) = static_cast<std::remove_reference_t<decltype(accessor(c))>>(
                parse_integer(section, key, unit, v, line));
          }};
    };

    add("crystal", "length_mm", "mm", 1e-3,
        [](RunConfig& c) -> double& { return c.system.crystal.length; });
    add("crystal", "d_eff_pm_per_V", "pm/V", 1e-12,
        [](RunConfig& c) -> double& { return c.system.crystal.d_eff; });
    add("crystal", "n_fundamental", "dimensionless", 1.0,
        [](RunConfig& c) -> double& { return c.system.crystal.n_fundamental; });
    add("crystal", "n_harmonic", "dimensionless", 1.0,
        [](RunConfig& c) -> double& { return c.system.crystal.n_harmonic; });
    // x %/cm equals x 1/m exactly.
    add("crystal", "alpha_fundamental_percent_per_cm", "%/cm", 1.0,
        [](RunConfig& c) -> double& { return c.system.crystal.alpha_fundamental; });
    add("crystal", "alpha_harmonic_percent_per_cm", "%/cm", 1.0,
        [](RunConfig& c) -> double& { return c.system.crystal.alpha_harmonic; });
    add("crystal", "ar_residual_reflectivity", "fraction", 1.0,
        [](RunConfig& c) -> double& { return c.system.crystal.ar_residual_reflectivity; });
    add("crystal", "hr_reflectivity_fundamental", "fraction", 1.0,
        [](RunConfig& c) -> double& { return c.system.crystal.hr_reflectivity_fundamental; });
    add("crystal", "hr_reflectivity_harmonic", "fraction", 1.0,
        [](RunConfig& c) -> double& { return c.system.crystal.hr_reflectivity_harmonic; });
    add("crystal", "hr_radius_mm", "mm", 1e-3,
        [](RunConfig& c) -> double& { return c.system.crystal.hr_radius; });
    add("crystal", "delta_k_per_m", "1/m", 1.0,
        [](RunConfig& c) -> double& { return c.system.crystal.delta_k; });
    add("crystal", "qpm_temperature_C", "deg C", 1.0,
        [](RunConfig& c) -> double& { return c.system.crystal.qpm_temperature; });

    add("cavity", "coupler_R_fundamental", "fraction", 1.0,
        [](RunConfig& c) -> double& { return c.system.cavity.coupler_R_fundamental; });
    add("cavity", "coupler_R_harmonic", "fraction", 1.0,
        [](RunConfig& c) -> double& { return c.system.cavity.coupler_R_harmonic; });
    add("cavity", "coupler_radius_mm", "mm", 1e-3,
        [](RunConfig& c) -> double& { return c.system.cavity.coupler_radius; });
    add("cavity", "air_gap_mm", "mm", 1e-3,
        [](RunConfig& c) -> double& { return c.system.cavity.air_gap; });
    add("cavity", "mode_matching", "fraction", 1.0,
        [](RunConfig& c) -> double& { return c.system.cavity.mode_matching; });
    add("cavity", "dbs_T_harmonic", "fraction", 1.0,
        [](RunConfig& c) -> double& { return c.system.cavity.dbs_T_harmonic; });
    add("cavity", "harmonic_rephase_rad", "rad", 1.0,
        [](RunConfig& c) -> double& { return c.system.cavity.harmonic_rephase; });

    add("beam", "wavelength_fundamental_um", "um", 1e-6,
        [](RunConfig& c) -> double& { return c.system.beam.wavelength_fundamental; });
    add("beam", "waist_radius_um", "um", 1e-6,
        [](RunConfig& c) -> double& { return c.system.beam.waist_radius; });
    add("beam", "focus_position_mm", "mm", 1e-3,
        [](RunConfig& c) -> double& { return c.system.beam.focus_position; });

    add_int("sim", "segment_count", "count",
            [](RunConfig& c) -> int& { return c.sim.segment_count; });
    add("sim", "tolerance", "relative", 1.0,
        [](RunConfig& c) -> double& { return c.sim.tolerance; });
    add_int("sim", "max_iterations", "count",
            [](RunConfig& c) -> std::size_t& { return c.sim.max_iterations; });
    add("sim", "relaxation", "fraction", 1.0,
        [](RunConfig& c) -> double& { return c.sim.relaxation; });

    add("sweep", "power_start_W", "W", 1.0,
        [](RunConfig& c) -> double& { return c.sweep.power_start; });
    add("sweep", "power_stop_W", "W", 1.0,
        [](RunConfig& c) -> double& { return c.sweep.power_stop; });
    add_int("sweep", "power_points", "count",
            [](RunConfig& c) -> int& { return c.sweep.power_points; });

    add("scan", "pump_power_W", "W", 1.0,
        [](RunConfig& c) -> double& { return c.scan.pump_power; });
    add_int("scan", "samples", "count",
            [](RunConfig& c) -> int& { return c.scan.samples; });

    add("simulate", "pump_power_W", "W", 1.0,
        [](RunConfig& c) -> double& { return c.simulate.pump_power; });

    (*s)["fit"]["data_path"] = KeyEntry{
        "path",
        [](const RunConfig& c) { return c.fit.data_path; },
        [](RunConfig& c, const std::string& v, int) { c.fit.data_path = v; }};
    add("fit", "bracket_lo_pm_per_V", "pm/V", 1e-12,
        [](RunConfig& c) -> double& { return c.fit.bracket_lo; });
    add("fit", "bracket_hi_pm_per_V", "pm/V", 1e-12,
        [](RunConfig& c) -> double& { return c.fit.bracket_hi; });

    add("match", "bracket_lo_W", "W", 1.0,
        [](RunConfig& c) -> double& { return c.match.bracket_lo; });
    add("match", "bracket_hi_W", "W", 1.0,
        [](RunConfig& c) -> double& { return c.match.bracket_hi; });
    return s;
  }();
  return *schema;
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace detail

/// Parse the flat-section key-value format. Unknown sections or keys are
/// rejected; malformed values raise config_error naming the key, line and
/// expected unit. Omitted keys keep their documented defaults. The parsed
/// specs are range-validated before returning.
inline RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  const auto& schema = detail::config_schema();
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        throw config_error("", line_no, "section header",
                           "config: malformed section header on line " +
                               std::to_string(line_no));
      section = detail::trim(stripped.substr(1, stripped.size() - 2));
      if (schema.find(section) == schema.end())
        throw config_error(section, line_no, "section",
                           "config: unknown section '[" + section + "]' on line " +
                               std::to_string(line_no));
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw config_error("", line_no, "key = value",
                         "config: expected 'key = value' on line " +
                             std::to_string(line_no));
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (section.empty())
      throw config_error(key, line_no, "section",
                         "config: key '" + key + "' on line " +
                             std::to_string(line_no) + " appears before any section");
    const auto& section_schema = schema.at(section);
    const auto entry = section_schema.find(key);
    if (entry == section_schema.end())
      throw config_error(section + "." + key, line_no, "known key",
                         "config: unknown key '" + section + "." + key +
                             "' on line " + std::to_string(line_no));
    entry->second.set(config, value, line_no);
  }
  validate(config.system.crystal);
  validate(config.system.cavity);
  validate(config.system.beam);
  validate(config.sim);
  return config;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw config_error(path, -1, "readable file",
                       "config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

/// Canonical serialization: fixed section and key order, full-precision
/// values; parse_config_text(write_config(c)) reproduces c exactly.
inline std::string write_config(const RunConfig& config) {
  const auto& schema = detail::config_schema();
  std::ostringstream out;
  bool first = true;
  for (const auto& [section, keys] : schema) {
    if (!first) out << "\n";
    first = false;
    out << "[" << section << "]\n";
    for (const auto& [key, entry] : keys) {
      if (section == "fit" && key == "data_path" && config.fit.data_path.empty())
        continue;
      out << key << " = " << entry.get(config) << "\n";
    }
  }
  return out.str();
}

inline void require_fit_data_path(const RunConfig& config) {
  if (config.fit.data_path.empty())
    throw config_error("fit.data_path", -1, "path",
                       "config: missing key 'fit.data_path' (path to the "
                       "measured (p_input_W, depletion) table)");
}

}  // namespace shgsim
