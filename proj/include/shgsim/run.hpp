#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "shgsim/analysis.hpp"
#include "shgsim/config.hpp"
#include "shgsim/resonator_geometry.hpp"
#include "shgsim/table.hpp"

namespace shgsim {

enum class Command { simulate, sweep, scan, fit, match, eigenmode };

inline std::optional<Command> command_from_name(const std::string& name) {
  if (name == "simulate") return Command::simulate;
  if (name == "sweep") return Command::sweep;
  if (name == "scan") return Command::scan;
  if (name == "fit") return Command::fit;
  if (name == "match") return Command::match;
  if (name == "eigenmode") return Command::eigenmode;
  return std::nullopt;
}

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
};

inline GridSpec parse_grid_spec(const std::string& text) {
  GridSpec g;
  char colon1 = 0, colon2 = 0;
  std::istringstream in(text);
  if (!(in >> g.start >> colon1 >> g.stop >> colon2 >> g.count) || colon1 != ':' ||
      colon2 != ':' || !(in >> std::ws).eof() || g.count < 1)
    throw std::invalid_argument("--grid expects start:stop:n, got '" + text + "'");
  return g;
}

inline std::vector<double> linspace(double start, double stop, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  for (int i = 0; i < count; ++i)
    out.push_back(start + (stop - start) * i / (count - 1));
  return out;
}

struct RunOptions {
  Command command = Command::simulate;
  RunConfig config;
  std::string out_path;
  std::optional<double> power_override;   // --power-W
  std::optional<GridSpec> grid_override;  // --grid start:stop:n
};

namespace detail {

inline std::string hash_hex(const SimSystem& sys, const SimConfig& config) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(spec_fingerprint(sys, config)));
  return buf;
}

inline std::vector<std::pair<double, double>> read_fit_data(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("fit: cannot open data file '" + path + "'");
  std::vector<std::pair<double, double>> data;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::string cleaned = stripped;
    for (char& ch : cleaned)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream row(cleaned);
    double p = 0.0, d = 0.0;
    if (!(row >> p >> d)) {
      if (data.empty()) continue;  // tolerate a header row
      throw std::runtime_error("fit: malformed data row " +
                               std::to_string(line_no) + " in '" + path + "'");
    }
    data.emplace_back(p, d);
  }
  return data;
}

}  // namespace detail

/// Execute one subcommand: writes the tabular artifact to `out_path` and the
/// key-value summary to `out_path + ".summary"`. Returns 0 on success, 2 on
/// solver failure (diagnostic printed verbatim to `diag`).
inline int run_command(const RunOptions& options, std::ostream& diag) {
  const RunConfig& cfg = options.config;
  const SimSystem& sys = cfg.system;
  const SimConfig& sim = cfg.sim;

  TableWriter table;
  SummaryWriter summary;
  table.add_metadata("specs_hash", detail::hash_hex(sys, sim));
  summary.add("specs_hash", detail::hash_hex(sys, sim));

  try {
    switch (options.command) {
      case Command::simulate: {
        const double p = options.power_override.value_or(cfg.simulate.pump_power);
        table.add_metadata("command", "simulate");
        const SteadyStateResult r = on_resonance(p, sys, sim);
        table.set_header({"p_input_W", "efficiency", "p_harmonic_W",
                          "p_harmonic_detected_W", "p_reflected_W",
                          "p_circulating_W", "depletion", "detuning_rad",
                          "iterations", "converged"});
        table.add_row({r.p_input, r.external_efficiency, r.p_harmonic_out,
                       r.p_harmonic_detected, r.p_reflected_fundamental,
                       r.p_circulating_fundamental, r.depletion, r.detuning,
                       static_cast<double>(r.iterations), r.converged ? 1.0 : 0.0});
        summary.add("p_input_W", r.p_input);
        summary.add("efficiency", r.external_efficiency);
        summary.add("p_harmonic_W", r.p_harmonic_out);
        summary.add("p_harmonic_detected_W", r.p_harmonic_detected);
        summary.add("p_reflected_W", r.p_reflected_fundamental);
        summary.add("p_circulating_W", r.p_circulating_fundamental);
        summary.add("depletion", r.depletion);
        summary.add("coupling_regime", to_string(r.coupling_regime));
        summary.add("iterations", static_cast<double>(r.iterations));
        summary.add("converged", r.converged ? "true" : "false");
        summary.add("residual", r.residual);
        break;
      }
      case Command::sweep: {
        std::vector<double> grid;
        if (options.grid_override) {
          const GridSpec& g = *options.grid_override;
          grid = linspace(g.start, g.stop, g.count);
        } else {
          grid = linspace(cfg.sweep.power_start, cfg.sweep.power_stop,
                          cfg.sweep.power_points);
        }
        table.add_metadata("command", "sweep");
        const EfficiencyCurve curve = sweep_power(grid, sys, sim);
        table.set_header({"p_input_W", "efficiency", "p_harmonic_W"});
        int failures = 0;
        double best_eff = 0.0, best_p = 0.0;
        for (const PowerPoint& pt : curve.points) {
          if (!pt.ok) {
            ++failures;
            summary.add("error_at_" + format_value(pt.p_input) + "_W", pt.error);
            continue;
          }
          table.add_row({pt.p_input, pt.efficiency, pt.p_harmonic});
          if (pt.efficiency >= best_eff) {
            best_eff = pt.efficiency;
            best_p = pt.p_input;
          }
        }
        summary.add("points", static_cast<double>(curve.points.size()));
        summary.add("failures", static_cast<double>(failures));
        summary.add("efficiency_max", best_eff);
        summary.add("p_at_efficiency_max_W", best_p);
        break;
      }
      case Command::scan: {
        const double p = options.power_override.value_or(cfg.scan.pump_power);
        if (!(p > 0.0))
          throw std::invalid_argument("scan: pump power must be positive");
        std::vector<double> grid;
        if (options.grid_override) {
          const GridSpec& g = *options.grid_override;
          grid = linspace(g.start, g.stop, g.count);
        } else {
          grid = linspace(-pi, pi, cfg.scan.samples);
        }
        table.add_metadata("command", "scan");
        const std::vector<SteadyStateResult> trace = scan_detuning(p, grid, sys, sim);
        table.set_header({"detuning_rad", "relative_reflection", "efficiency",
                          "p_harmonic_W"});
        for (const SteadyStateResult& r : trace)
          table.add_row({r.detuning, r.p_reflected_fundamental / p,
                         r.external_efficiency, r.p_harmonic_out});
        const SteadyStateResult locked = solve_steady_state(p, 0.0, sys, sim);
        summary.add("p_input_W", p);
        summary.add("locked_level", locked.p_reflected_fundamental / p);
        summary.add("depletion", locked.depletion);
        summary.add("efficiency_locked", locked.external_efficiency);
        break;
      }
      case Command::fit: {
        require_fit_data_path(cfg);
        const auto data = detail::read_fit_data(cfg.fit.data_path);
        table.add_metadata("command", "fit");
        const FitResult fit =
            fit_deff(data, sys, sim, cfg.fit.bracket_lo, cfg.fit.bracket_hi);
        table.set_header({"p_input_W", "depletion_measured", "depletion_model",
                          "residual"});
        for (std::size_t i = 0; i < data.size(); ++i)
          table.add_row({data[i].first, data[i].second,
                         data[i].second + fit.residuals[i], fit.residuals[i]});
        summary.add("d_eff_pm_per_V", fit.d_eff * 1e12);
        summary.add("objective", fit.objective);
        summary.add("evaluations", static_cast<double>(fit.evaluations));
        break;
      }
      case Command::match: {
        table.add_metadata("command", "match");
        const double p_matched = matched_power_search(
            sys, sim, {cfg.match.bracket_lo, cfg.match.bracket_hi});
        const SteadyStateResult r = on_resonance(p_matched, sys, sim);
        table.set_header({"p_matched_W", "efficiency", "p_harmonic_W",
                          "p_reflected_matched_W"});
        table.add_row({p_matched, r.external_efficiency, r.p_harmonic_out,
                       r.p_reflected_fundamental -
                           (1.0 - sys.cavity.mode_matching) * p_matched});
        summary.add("p_matched_W", p_matched);
        summary.add("efficiency_at_match", r.external_efficiency);
        summary.add("coupling_regime", to_string(r.coupling_regime));
        break;
      }
      case Command::eigenmode: {
        table.add_metadata("command", "eigenmode");
        const EigenmodeResult mode = cavity_eigenmode(sys.cavity, sys.crystal, sys.beam);
        table.set_header({"waist_um", "waist_position_mm", "rayleigh_range_mm",
                          "stability"});
        table.add_row({mode.waist_radius * 1e6, mode.waist_position * 1e3,
                       mode.rayleigh_range * 1e3, mode.stability});
        summary.add("waist_um", mode.waist_radius * 1e6);
        summary.add("waist_position_mm", mode.waist_position * 1e3);
        summary.add("rayleigh_range_mm", mode.rayleigh_range * 1e3);
        summary.add("stability", mode.stability);
        break;
      }
    }
    table.write(options.out_path);
    summary.write(options.out_path + ".summary");
  } catch (const std::exception& e) {
    diag << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace shgsim
