#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "shgsim/crystal.hpp"
#include "shgsim/errors.hpp"
#include "shgsim/fields.hpp"

namespace shgsim {

enum class Direction { forward, backward };

/// Discretization of the crystal into propagation segments plus the
/// effective-plane-wave coupling constant derived from the single-pass
/// coefficient: kappa = sqrt(E_NL) / L, so that a lossless low-power pass
/// reproduces P2 = E_NL * P1^2.
struct SegmentGrid {
  int segment_count = 128;
  double dz = 0.0;      // m, = length / segment_count
  double kappa = 0.0;   // 1/(sqrt(W) m)
};

inline SegmentGrid make_grid(const CrystalSpec& crystal, double single_pass_enl,
                             int segment_count = 128) {
  if (segment_count < 8)
    throw std::invalid_argument("sim.segment_count: must be at least 8");
  if (!(single_pass_enl >= 0.0))
    throw std::invalid_argument("make_grid: E_NL must be nonnegative");
  SegmentGrid grid;
  grid.segment_count = segment_count;
  grid.dz = crystal.length / segment_count;
  grid.kappa = std::sqrt(single_pass_enl) / crystal.length;
  return grid;
}

/// Energy ledger of one directional crystal transit.
struct PassResult {
  FieldPair fields_out;
  double absorbed_fundamental = 0.0;  // W
  double absorbed_harmonic = 0.0;     // W
  double facet_loss = 0.0;            // W, anti-reflection residual
};

namespace detail {

struct Derivative {
  complex d1, d2;
};

// Coupled-wave right-hand side at crystal coordinate z.
inline Derivative coupled_rhs(const complex& a1, const complex& a2,
                              const SegmentGrid& grid, const CrystalSpec& c,
                              double z) {
  const complex i{0.0, 1.0};
  complex mismatch{1.0, 0.0};
  if (c.delta_k != 0.0)
    mismatch = std::exp(complex{0.0, c.delta_k * z});
  return {-0.5 * c.alpha_fundamental * a1 +
              i * grid.kappa * a2 * std::conj(a1) * mismatch,
          -0.5 * c.alpha_harmonic * a2 +
              i * grid.kappa * a1 * a1 / mismatch};
}

}  // namespace detail

/// Advance the field pair by one segment (classical RK4 step). `z_start` is
/// the crystal coordinate at the segment entry along the travel direction;
/// `z_sign` is +1 traveling away from the plane facet, -1 toward it. The
/// phase-mismatch factor is evaluated at the physical crystal coordinate,
/// which makes forward and backward transits of the symmetric crystal
/// identical by construction.
inline FieldPair propagate_segment(const FieldPair& fields, const SegmentGrid& grid,
                                   const CrystalSpec& crystal, double z_start = 0.0,
                                   double z_sign = 1.0) {
  const double h = grid.dz;
  const auto& f = fields;
  const auto k1 = detail::coupled_rhs(f.fundamental, f.harmonic, grid, crystal, z_start);
  const auto k2 = detail::coupled_rhs(f.fundamental + 0.5 * h * k1.d1,
                                      f.harmonic + 0.5 * h * k1.d2, grid, crystal,
                                      z_start + z_sign * 0.5 * h);
  const auto k3 = detail::coupled_rhs(f.fundamental + 0.5 * h * k2.d1,
                                      f.harmonic + 0.5 * h * k2.d2, grid, crystal,
                                      z_start + z_sign * 0.5 * h);
  const auto k4 = detail::coupled_rhs(f.fundamental + h * k3.d1,
                                      f.harmonic + h * k3.d2, grid, crystal,
                                      z_start + z_sign * h);
  FieldPair out;
  out.fundamental = f.fundamental + h / 6.0 * (k1.d1 + 2.0 * k2.d1 + 2.0 * k3.d1 + k4.d1);
  out.harmonic = f.harmonic + h / 6.0 * (k1.d2 + 2.0 * k2.d2 + 2.0 * k3.d2 + k4.d2);
  return out;
}

/// One directional transit of the crystal. The anti-reflection residual of
/// the plane facet applies on entry for a forward pass (plane facet -> HR
/// facet) and on exit for a backward pass; the curved facet is the cavity
/// mirror and is handled by the caller. The ledger closes exactly:
/// power_in = power_out + absorbed + facet_loss.
inline PassResult crystal_pass(FieldPair fields, Direction direction,
                               const CrystalSpec& crystal, const SegmentGrid& grid) {
  PassResult result;
  const double ar = crystal.ar_residual_reflectivity;
  const double t_ar = std::sqrt(1.0 - ar);

  if (direction == Direction::forward) {
    result.facet_loss += fields.power_total() * ar;
    fields.fundamental *= t_ar;
    fields.harmonic *= t_ar;
  }

  const double power_in = fields.power_total();
  // Simpson accumulation of the per-wavelength absorption integrals; the
  // totals are rescaled below so the pass ledger closes exactly.
  double abs1 = 0.0, abs2 = 0.0;
  const double h = grid.dz;
  for (int k = 0; k < grid.segment_count; ++k) {
    double z0, sign;
    if (direction == Direction::forward) {
      z0 = crystal.length * k / grid.segment_count;
      sign = 1.0;
    } else {
      z0 = crystal.length * (grid.segment_count - k) / grid.segment_count;
      sign = -1.0;
    }
    const auto k1 = detail::coupled_rhs(fields.fundamental, fields.harmonic, grid, crystal, z0);
    const complex s2_1 = fields.fundamental + 0.5 * h * k1.d1;
    const complex s2_2 = fields.harmonic + 0.5 * h * k1.d2;
    const auto k2 = detail::coupled_rhs(s2_1, s2_2, grid, crystal, z0 + sign * 0.5 * h);
    const complex s3_1 = fields.fundamental + 0.5 * h * k2.d1;
    const complex s3_2 = fields.harmonic + 0.5 * h * k2.d2;
    const auto k3 = detail::coupled_rhs(s3_1, s3_2, grid, crystal, z0 + sign * 0.5 * h);
    const complex s4_1 = fields.fundamental + h * k3.d1;
    const complex s4_2 = fields.harmonic + h * k3.d2;
    const auto k4 = detail::coupled_rhs(s4_1, s4_2, grid, crystal, z0 + sign * h);

    FieldPair next;
    next.fundamental = fields.fundamental +
                       h / 6.0 * (k1.d1 + 2.0 * k2.d1 + 2.0 * k3.d1 + k4.d1);
    next.harmonic = fields.harmonic +
                    h / 6.0 * (k1.d2 + 2.0 * k2.d2 + 2.0 * k3.d2 + k4.d2);
    if (!next.finite())
      throw integrator_error(static_cast<std::size_t>(k),
                             "crystal_pass: integrator blow-up in segment " +
                                 std::to_string(k));

    abs1 += crystal.alpha_fundamental * h / 6.0 *
            (std::norm(fields.fundamental) + 2.0 * (std::norm(s2_1) + std::norm(s3_1)) +
             std::norm(next.fundamental));
    abs2 += crystal.alpha_harmonic * h / 6.0 *
            (std::norm(fields.harmonic) + 2.0 * (std::norm(s2_2) + std::norm(s3_2)) +
             std::norm(next.harmonic));
    fields = next;
  }

  // Attribute the exact transit power deficit to the two absorption channels
  // in proportion to the Simpson estimates.
  const double deficit = power_in - fields.power_total();
  const double estimate = abs1 + abs2;
  if (estimate > 0.0) {
    result.absorbed_fundamental = deficit * (abs1 / estimate);
    result.absorbed_harmonic = deficit * (abs2 / estimate);
  } else {
    result.absorbed_fundamental = 0.5 * deficit;
    result.absorbed_harmonic = 0.5 * deficit;
  }

  if (direction == Direction::backward) {
    result.facet_loss += fields.power_total() * ar;
    fields.fundamental *= t_ar;
    fields.harmonic *= t_ar;
  }
  result.fields_out = fields;
  return result;
}

}  // namespace shgsim
