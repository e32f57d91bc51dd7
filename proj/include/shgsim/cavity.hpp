#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "shgsim/beam.hpp"
#include "shgsim/cavity_spec.hpp"
#include "shgsim/constants.hpp"
#include "shgsim/crystal.hpp"
#include "shgsim/errors.hpp"
#include "shgsim/fields.hpp"
#include "shgsim/focusing.hpp"
#include "shgsim/minimize.hpp"
#include "shgsim/propagation.hpp"

namespace shgsim {

/// Everything the steady-state solver needs to know about the physical setup.
struct SimSystem {
  CrystalSpec crystal;
  CavitySpec cavity;
  BeamSpec beam;
};

struct SimConfig {
  int segment_count = 128;
  double tolerance = 1e-10;          // relative change of circulating amplitudes
  std::size_t max_iterations = 100000;
  double relaxation = 1.0;           // successive-substitution mixing factor
};

inline void validate(const SimConfig& c) {
  if (c.segment_count < 8)
    throw std::invalid_argument("sim.segment_count: must be at least 8");
  if (!(c.tolerance > 0.0))
    throw std::invalid_argument("sim.tolerance: must be positive");
  if (c.max_iterations == 0)
    throw std::invalid_argument("sim.max_iterations: must be positive");
  if (!(c.relaxation > 0.0 && c.relaxation <= 1.0))
    throw std::invalid_argument("sim.relaxation: must lie in (0,1]");
}

inline SegmentGrid make_grid(const SimSystem& sys, const SimConfig& config) {
  return make_grid(sys.crystal, single_pass_coefficient(sys.crystal, sys.beam),
                   config.segment_count);
}

struct CavityState {
  FieldPair circulating;      // just inside the coupler, toward the crystal
  std::size_t iteration = 0;
  double residual = 0.0;
};

/// Per-round-trip loss ledger (watts, at the current circulating power).
struct LossLedger {
  double absorbed_fundamental = 0.0;
  double absorbed_harmonic = 0.0;
  double facet = 0.0;
  double hr_transmission = 0.0;
  double coupler_harmonic_residual = 0.0;

  double total() const {
    return absorbed_fundamental + absorbed_harmonic + facet + hr_transmission +
           coupler_harmonic_residual;
  }
};

struct RoundTripResult {
  CavityState state;        // circulating field for the next iteration
  complex harmonic_out;     // emitted through the coupler this round trip
  complex reflected;        // matched-mode reflection leaving at the coupler
  LossLedger losses;
};

enum class CouplingRegime { over_coupled, under_coupled, impedance_matched };

inline const char* to_string(CouplingRegime r) {
  switch (r) {
    case CouplingRegime::over_coupled: return "over";
    case CouplingRegime::under_coupled: return "under";
    default: return "impedance-matched";
  }
}

/// One full cavity map: crystal forward pass, HR reflection (with the
/// configured harmonic rephasing), crystal backward pass, lumped fundamental
/// detuning phase, then the coupler, which emits the harmonic, reflects the
/// circulating fundamental and injects the matched pump. Coupler convention:
/// lossless beamsplitter with real sqrt(R) and imaginary sqrt(1-R), which
/// makes detuning = 0 resonant.
inline RoundTripResult round_trip(const CavityState& state, double pump_amplitude,
                                  double detuning, const SimSystem& sys,
                                  const SegmentGrid& grid) {
  const CrystalSpec& cry = sys.crystal;
  const CavitySpec& cav = sys.cavity;
  RoundTripResult out;

  PassResult fwd = crystal_pass(state.circulating, Direction::forward, cry, grid);
  FieldPair f = fwd.fields_out;

  out.losses.hr_transmission =
      f.power_fundamental() * (1.0 - cry.hr_reflectivity_fundamental) +
      f.power_harmonic() * (1.0 - cry.hr_reflectivity_harmonic);
  f.fundamental *= std::sqrt(cry.hr_reflectivity_fundamental);
  f.harmonic *= std::sqrt(cry.hr_reflectivity_harmonic) *
                std::exp(complex{0.0, cav.harmonic_rephase});

  PassResult bwd = crystal_pass(f, Direction::backward, cry, grid);
  f = bwd.fields_out;

  out.losses.absorbed_fundamental =
      fwd.absorbed_fundamental + bwd.absorbed_fundamental;
  out.losses.absorbed_harmonic = fwd.absorbed_harmonic + bwd.absorbed_harmonic;
  out.losses.facet = fwd.facet_loss + bwd.facet_loss;

  f.fundamental *= std::exp(complex{0.0, detuning});

  out.losses.coupler_harmonic_residual =
      f.power_harmonic() * cav.coupler_R_harmonic;
  out.harmonic_out = f.harmonic * std::sqrt(1.0 - cav.coupler_R_harmonic);

  const double r = std::sqrt(cav.coupler_R_fundamental);
  const double t = std::sqrt(1.0 - cav.coupler_R_fundamental);
  out.state.circulating.fundamental =
      r * f.fundamental + complex{0.0, t} * pump_amplitude;
  out.state.circulating.harmonic = {0.0, 0.0};
  out.reflected = r * pump_amplitude + complex{0.0, t} * f.fundamental;
  out.state.iteration = state.iteration + 1;
  out.state.residual = state.residual;
  return out;
}

struct SteadyStateResult {
  double p_input = 0.0;                   // W
  double p_reflected_fundamental = 0.0;   // W, includes mode-mismatched light
  double p_harmonic_out = 0.0;            // W, at the coupler
  double p_harmonic_detected = 0.0;       // W, after the dichroic splitter
  double p_circulating_fundamental = 0.0; // W
  double external_efficiency = 0.0;
  double depletion = 0.0;                 // of the matched input mode
  CouplingRegime coupling_regime = CouplingRegime::over_coupled;
  std::size_t iterations = 0;
  bool converged = false;
  double detuning = 0.0;                  // rad, round-trip phase offset
  double residual = 0.0;                  // final convergence metric
  std::vector<double> residual_history;
  LossLedger losses;                      // per round trip at steady state
  double internal_round_trip_loss = 0.0;  // fractional, conversion included
  double ledger_residual = 0.0;           // relative energy-balance defect
};

namespace detail {

inline double relative_change(const complex& now, const complex& before) {
  const double scale = std::max(std::abs(now), 1e-300);
  return std::abs(now - before) / scale;
}

}  // namespace detail

/// Fixed-point iteration of the round-trip map from zero initial field.
/// Converged when the relative change of both circulating amplitudes stays
/// below `config.tolerance` for three consecutive iterations.
inline SteadyStateResult solve_steady_state(double p_pump, double detuning,
                                            const SimSystem& sys,
                                            const SimConfig& config,
                                            const SegmentGrid& grid) {
  validate(sys.crystal);
  validate(sys.cavity);
  validate(sys.beam);
  validate(config);
  if (!(p_pump >= 0.0))
    throw std::invalid_argument("solve_steady_state: pump power must be nonnegative");

  const double p_matched = sys.cavity.mode_matching * p_pump;
  const double pump_amplitude = std::sqrt(p_matched);

  CavityState state;
  complex prev_circ{0.0, 0.0};
  complex prev_harm{0.0, 0.0};
  std::vector<double> history;
  history.reserve(256);
  int consecutive = 0;
  bool converged = false;

  while (state.iteration < config.max_iterations) {
    RoundTripResult rt = round_trip(state, pump_amplitude, detuning, sys, grid);
    complex next = rt.state.circulating.fundamental;
    if (config.relaxation != 1.0)
      next = prev_circ + config.relaxation * (next - prev_circ);

    const double residual = std::max(detail::relative_change(next, prev_circ),
                                     detail::relative_change(rt.harmonic_out, prev_harm));
    history.push_back(residual);
    prev_circ = next;
    prev_harm = rt.harmonic_out;
    state = rt.state;
    state.circulating.fundamental = next;
    state.residual = residual;

    if (residual < config.tolerance) {
      if (++consecutive >= 3) {
        converged = true;
        break;
      }
    } else {
      consecutive = 0;
    }
  }

  if (!converged) {
    const std::size_t tail_len = std::min<std::size_t>(history.size(), 50);
    std::vector<double> tail(history.end() - tail_len, history.end());
    throw convergence_error(
        state.iteration, std::move(tail),
        "solve_steady_state: no steady state after " +
            std::to_string(state.iteration) + " iterations (residual " +
            std::to_string(state.residual) + ")");
  }

  // Harvest outputs and the energy ledger with one snapshot round trip from
  // the converged state; at the fixed point the stored energy is stationary.
  RoundTripResult rt = round_trip(state, pump_amplitude, detuning, sys, grid);

  SteadyStateResult result;
  result.p_input = p_pump;
  result.detuning = detuning;
  const double p_refl_matched = std::norm(rt.reflected);
  result.p_reflected_fundamental =
      p_refl_matched + (1.0 - sys.cavity.mode_matching) * p_pump;
  result.p_harmonic_out = std::norm(rt.harmonic_out);
  result.p_harmonic_detected = result.p_harmonic_out * sys.cavity.dbs_T_harmonic;
  result.p_circulating_fundamental = state.circulating.power_fundamental();
  result.external_efficiency =
      p_pump > 0.0 ? result.p_harmonic_out / p_pump : 0.0;
  result.depletion = p_matched > 0.0 ? 1.0 - p_refl_matched / p_matched : 0.0;
  result.iterations = state.iteration;
  result.converged = converged;
  result.residual = state.residual;
  result.residual_history = std::move(history);
  result.losses = rt.losses;

  // Fractional round-trip loss seen by the circulating fundamental
  // (conversion included); linear-limit fallback for an empty cavity.
  const double p_circ = result.p_circulating_fundamental;
  double internal_loss;
  if (p_circ > 0.0) {
    const double survived =
        std::norm(rt.state.circulating.fundamental -
                  complex{0.0, std::sqrt(1.0 - sys.cavity.coupler_R_fundamental)} *
                      pump_amplitude) /
        sys.cavity.coupler_R_fundamental;
    internal_loss = 1.0 - survived / p_circ;
  } else {
    const double ar = sys.crystal.ar_residual_reflectivity;
    internal_loss = 1.0 - (1.0 - ar) * (1.0 - ar) *
                              std::exp(-2.0 * sys.crystal.alpha_fundamental *
                                       sys.crystal.length) *
                              sys.crystal.hr_reflectivity_fundamental;
  }
  result.internal_round_trip_loss = internal_loss;

  const double transmission = 1.0 - sys.cavity.coupler_R_fundamental;
  const double band = 1e-4 * transmission;
  if (std::abs(internal_loss - transmission) <= band)
    result.coupling_regime = CouplingRegime::impedance_matched;
  else if (transmission > internal_loss)
    result.coupling_regime = CouplingRegime::over_coupled;
  else
    result.coupling_regime = CouplingRegime::under_coupled;

  if (p_pump > 0.0) {
    result.ledger_residual =
        (p_pump - result.p_reflected_fundamental - result.p_harmonic_out -
         rt.losses.total()) /
        p_pump;
  }
  return result;
}

inline SteadyStateResult solve_steady_state(double p_pump, double detuning,
                                            const SimSystem& sys,
                                            const SimConfig& config) {
  return solve_steady_state(p_pump, detuning, sys, config, make_grid(sys, config));
}

/// Steady state at the detuning that maximizes the external efficiency,
/// searched over one free spectral range by golden section with a parabolic
/// polish. For a passive cavity (no nonlinearity) the circulating power is
/// maximized instead.
inline SteadyStateResult on_resonance(double p_pump, const SimSystem& sys,
                                      const SimConfig& config,
                                      const SegmentGrid& grid) {
  const bool passive = grid.kappa == 0.0 || p_pump == 0.0;
  auto objective = [&](double det) {
    const SteadyStateResult r = solve_steady_state(p_pump, det, sys, config, grid);
    return passive ? -r.p_circulating_fundamental : -r.external_efficiency;
  };
  const MinimizeResult best =
      golden_section_min(objective, -pi, pi, 1e-4 * 2.0 * pi, /*polish=*/true);
  return solve_steady_state(p_pump, best.x, sys, config, grid);
}

inline SteadyStateResult on_resonance(double p_pump, const SimSystem& sys,
                                      const SimConfig& config) {
  return on_resonance(p_pump, sys, config, make_grid(sys, config));
}

/// Quasi-static detuning scan: independent steady-state solves per grid
/// point (slow-scan assumption; no ring-down dynamics).
inline std::vector<SteadyStateResult> scan_detuning(double p_pump,
                                                    const std::vector<double>& grid_points,
                                                    const SimSystem& sys,
                                                    const SimConfig& config) {
  for (std::size_t i = 1; i < grid_points.size(); ++i)
    if (!(grid_points[i] > grid_points[i - 1]))
      throw std::invalid_argument("scan_detuning: grid must be strictly increasing");
  const SegmentGrid grid = make_grid(sys, config);
  std::vector<SteadyStateResult> trace;
  trace.reserve(grid_points.size());
  for (double det : grid_points)
    trace.push_back(solve_steady_state(p_pump, det, sys, config, grid));
  return trace;
}

}  // namespace shgsim
