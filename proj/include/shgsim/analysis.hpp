#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shgsim/cavity.hpp"
#include "shgsim/hash.hpp"
#include "shgsim/minimize.hpp"

namespace shgsim {

inline std::uint64_t spec_fingerprint(const SimSystem& sys, const SimConfig& config) {
  Fnv1a h;
  const CrystalSpec& c = sys.crystal;
  for (double v : {c.length, c.d_eff, c.n_fundamental, c.n_harmonic,
                   c.alpha_fundamental, c.alpha_harmonic, c.ar_residual_reflectivity,
                   c.hr_reflectivity_fundamental, c.hr_reflectivity_harmonic,
                   c.delta_k, c.qpm_temperature})
    h.update(v);
  const CavitySpec& v = sys.cavity;
  for (double x : {v.coupler_R_fundamental, v.coupler_R_harmonic, v.coupler_radius,
                   v.air_gap, v.mode_matching, v.dbs_T_harmonic, v.harmonic_rephase})
    h.update(x);
  const BeamSpec& b = sys.beam;
  for (double x : {b.wavelength_fundamental, b.waist_radius, b.focus_position})
    h.update(x);
  h.update(static_cast<double>(config.segment_count));
  h.update(config.tolerance);
  h.update(static_cast<double>(config.max_iterations));
  h.update(config.relaxation);
  return h.value();
}

struct PowerPoint {
  double p_input = 0.0;
  double efficiency = 0.0;
  double p_harmonic = 0.0;
  bool ok = true;
  std::string error;  // solver diagnostic when ok is false
};

struct EfficiencyCurve {
  std::vector<PowerPoint> points;
  SimSystem system;
  SimConfig config;
  std::uint64_t specs_hash = 0;
};

/// Conversion efficiency and harmonic power versus input power, each point
/// solved at its efficiency-optimal detuning. Solver failures annotate the
/// point and the sweep continues.
inline EfficiencyCurve sweep_power(const std::vector<double>& p_grid,
                                   const SimSystem& sys, const SimConfig& config) {
  for (double p : p_grid)
    if (!(p >= 0.0))
      throw std::invalid_argument("sweep_power: powers must be nonnegative");
  for (std::size_t i = 1; i < p_grid.size(); ++i)
    if (!(p_grid[i] > p_grid[i - 1]))
      throw std::invalid_argument("sweep_power: power grid must be strictly increasing");

  EfficiencyCurve curve;
  curve.system = sys;
  curve.config = config;
  curve.specs_hash = spec_fingerprint(sys, config);
  const SegmentGrid grid = make_grid(sys, config);
  curve.points.reserve(p_grid.size());
  for (double p : p_grid) {
    PowerPoint point;
    point.p_input = p;
    try {
      const SteadyStateResult r = on_resonance(p, sys, config, grid);
      point.efficiency = r.external_efficiency;
      point.p_harmonic = r.p_harmonic_out;
    } catch (const std::exception& e) {
      point.ok = false;
      point.error = e.what();
    }
    curve.points.push_back(std::move(point));
  }
  return curve;
}

struct DepletionSample {
  double detuning = 0.0;            // rad
  double relative_reflection = 0.0; // reflected / input
};

struct DepletionTrace {
  std::vector<DepletionSample> samples;
  double reference_zero = 0.0;   // full-conversion reference level
  double reference_full = 1.0;   // off-resonant (no conversion) level
  double locked_level = 0.0;     // relative reflection locked on resonance
};

/// Normalized reflected-power trace over one free spectral range centered on
/// resonance, with the two reference levels of the depletion measurement.
inline DepletionTrace depletion_trace(double p_pump, const SimSystem& sys,
                                      const SimConfig& config, int n_samples) {
  if (n_samples < 16)
    throw std::invalid_argument("depletion_trace: need at least 16 samples");
  if (!(p_pump > 0.0))
    throw std::invalid_argument("depletion_trace: pump power must be positive");

  std::vector<double> grid_points;
  grid_points.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i)
    grid_points.push_back(-pi + 2.0 * pi * i / (n_samples - 1));

  DepletionTrace trace;
  const std::vector<SteadyStateResult> solved =
      scan_detuning(p_pump, grid_points, sys, config);
  trace.samples.reserve(solved.size());
  for (std::size_t i = 0; i < solved.size(); ++i)
    trace.samples.push_back(
        {grid_points[i], solved[i].p_reflected_fundamental / p_pump});

  const SegmentGrid grid = make_grid(sys, config);
  const SteadyStateResult locked = solve_steady_state(p_pump, 0.0, sys, config, grid);
  trace.locked_level = locked.p_reflected_fundamental / p_pump;
  return trace;
}

struct FitResult {
  double d_eff = 0.0;           // m/V
  double objective = 0.0;       // sum of squared depletion residuals
  std::vector<double> residuals;
  int evaluations = 0;
};

namespace detail {

inline double model_depletion(double p_input, double d_eff, SimSystem sys,
                              const SimConfig& config) {
  sys.crystal.d_eff = d_eff;
  const SegmentGrid grid = make_grid(sys, config);
  // Resonance sits at zero detuning under the artifact's phase conventions.
  return solve_steady_state(p_input, 0.0, sys, config, grid).depletion;
}

}  // namespace detail

/// Least-squares estimate of the effective nonlinearity from measured
/// (input power, depletion) pairs; scalar golden-section line search over
/// d_eff in [1, 20] pm/V. A single pair degenerates to 1-DOF interpolation.
inline FitResult fit_deff(const std::vector<std::pair<double, double>>& measured,
                          const SimSystem& sys, const SimConfig& config,
                          double bracket_lo = 1.0e-12, double bracket_hi = 20.0e-12) {
  if (measured.empty())
    throw std::invalid_argument("fit_deff: need at least one data point");
  bool any_power = false;
  for (const auto& [p, d] : measured) {
    if (!(p >= 0.0)) throw std::invalid_argument("fit_deff: negative input power");
    if (p > 0.0) any_power = true;
  }
  if (!any_power)
    throw std::invalid_argument("fit_deff: degenerate data, all powers zero");
  for (std::size_t i = 0; i < measured.size(); ++i)
    for (std::size_t j = i + 1; j < measured.size(); ++j)
      if (measured[i].first == measured[j].first)
        throw std::invalid_argument("fit_deff: input powers must be distinct");

  int evals = 0;
  auto objective = [&](double d_eff) {
    ++evals;
    double ssq = 0.0;
    for (const auto& [p, depl] : measured) {
      const double r = detail::model_depletion(p, d_eff, sys, config) - depl;
      ssq += r * r;
    }
    return ssq;
  };
  const MinimizeResult best =
      golden_section_min(objective, bracket_lo, bracket_hi,
                         1e-4 * (bracket_hi - bracket_lo), /*polish=*/true);

  FitResult fit;
  fit.d_eff = best.x;
  fit.objective = best.fx;
  fit.evaluations = evals;
  fit.residuals.reserve(measured.size());
  for (const auto& [p, depl] : measured)
    fit.residuals.push_back(detail::model_depletion(p, best.x, sys, config) - depl);
  return fit;
}

struct CouplingReport {
  double effective_internal_loss = 0.0;  // fractional round-trip loss,
                                         // conversion included
  CouplingRegime coupling_regime = CouplingRegime::over_coupled;
  double reflection_on_resonance = 0.0;  // matched-mode power fraction
  double overcoupling_correction = 0.0;  // percentage points
};

/// Power-dependent coupling analysis at one operating point. The reported
/// correction is the gap between the efficiency a depletion measurement
/// implies (one minus the locked relative reflection) and the ledger-true
/// external efficiency; by energy conservation it equals the internal-loss
/// share of the input.
inline CouplingReport coupling_analysis(double p_pump, const SimSystem& sys,
                                        const SimConfig& config) {
  const SegmentGrid grid = make_grid(sys, config);
  const SteadyStateResult r = on_resonance(p_pump, sys, config, grid);
  CouplingReport report;
  report.effective_internal_loss = r.internal_round_trip_loss;
  report.coupling_regime = r.coupling_regime;
  report.reflection_on_resonance = 1.0 - r.depletion;
  if (p_pump > 0.0) {
    const double locked_level = r.p_reflected_fundamental / p_pump;
    const double naive_efficiency = 1.0 - locked_level;
    report.overcoupling_correction =
        (naive_efficiency - r.external_efficiency) * 100.0;
  }
  return report;
}

/// Pump power that nulls the on-resonance matched-mode reflection (impedance
/// matching point), located by golden-section inside `bracket`.
inline double matched_power_search(const SimSystem& sys, const SimConfig& config,
                                   std::pair<double, double> bracket) {
  const auto [lo, hi] = bracket;
  if (!(lo > 0.0 && hi > lo))
    throw std::invalid_argument("matched_power_search: invalid bracket");
  const SegmentGrid grid = make_grid(sys, config);
  auto reflected = [&](double p) {
    const SteadyStateResult r = on_resonance(p, sys, config, grid);
    return r.p_reflected_fundamental - (1.0 - sys.cavity.mode_matching) * p;
  };
  const double f_lo = reflected(lo);
  const double f_hi = reflected(hi);
  const MinimizeResult best =
      golden_section_min(reflected, lo, hi, 1e-4 * (hi - lo), /*polish=*/true);
  if (best.fx >= std::min(f_lo, f_hi))
    throw std::runtime_error(
        "matched_power_search: no interior reflection minimum in bracket "
        "(edge values " + std::to_string(f_lo) + " W and " +
        std::to_string(f_hi) + " W, best interior " +
        std::to_string(best.fx) + " W)");
  return best.x;
}

}  // namespace shgsim
