#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "shgsim/beam.hpp"
#include "shgsim/cavity_spec.hpp"
#include "shgsim/constants.hpp"
#include "shgsim/crystal.hpp"
#include "shgsim/errors.hpp"

namespace shgsim {

/// 2x2 ray-transfer matrix, physical-angle convention: ray = (height, angle).
struct Abcd {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  friend Abcd operator*(const Abcd& m, const Abcd& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }
  static Abcd translation(double dist) { return {1.0, dist, 0.0, 1.0}; }
  static Abcd flat_interface(double n_in, double n_out) {
    return {1.0, 0.0, 0.0, n_in / n_out};
  }
  /// Reflection off a mirror with radius of curvature r (concave toward the
  /// incident beam, r > 0); curvature acts on angles independently of the
  /// surrounding medium in this convention.
  static Abcd curved_mirror(double r) { return {1.0, 0.0, -2.0 / r, 1.0}; }
  static Abcd flat_mirror() { return {1.0, 0.0, 0.0, 1.0}; }
};

struct EigenmodeResult {
  double waist_radius = 0.0;       // m, fundamental TEM00 waist
  double waist_position = 0.0;     // m inside the crystal from the plane facet
  double rayleigh_range = 0.0;     // m, inside the crystal
  double stability = 0.0;          // half-trace of the round-trip matrix
};

/// Geometric description of the standing-wave resonator for the mode solve:
/// curved HR crystal facet, crystal slab, plane facet, air gap, coupler.
struct ResonatorGeometry {
  double air_gap = 24e-3;              // m, coupler to plane crystal facet
  double coupler_radius = 25e-3;       // m
  double hr_radius = 12e-3;            // m, curved crystal facet
};

/// Fundamental TEM00 eigenmode of the cavity via the round-trip ray-transfer
/// matrix referenced just after the coupler, traveling toward the crystal.
/// `segmentation` subdivides the free propagations (the result is invariant
/// under refinement; exposed for verification).
inline EigenmodeResult cavity_eigenmode(const ResonatorGeometry& geom,
                                        const CrystalSpec& crystal,
                                        const BeamSpec& beam,
                                        int segmentation = 1) {
  validate(crystal);
  validate(beam);
  if (!(geom.air_gap > 0.0))
    throw std::invalid_argument("cavity.air_gap_mm: must be positive");
  const double n = crystal.n_fundamental;

  auto split_translation = [segmentation](double dist) {
    Abcd m;
    for (int i = 0; i < segmentation; ++i)
      m = Abcd::translation(dist / segmentation) * m;
    return m;
  };

  const Abcd gap = split_translation(geom.air_gap);
  const Abcd slab = split_translation(crystal.length);
  const Abcd into = Abcd::flat_interface(1.0, n);
  const Abcd outof = Abcd::flat_interface(n, 1.0);
  const Abcd hr = geom.hr_radius > 0.0 ? Abcd::curved_mirror(geom.hr_radius)
                                       : Abcd::flat_mirror();
  const Abcd coupler = geom.coupler_radius > 0.0
                           ? Abcd::curved_mirror(geom.coupler_radius)
                           : Abcd::flat_mirror();

  const Abcd round_trip =
      coupler * gap * outof * slab * hr * slab * into * gap;

  const double half_trace = 0.5 * (round_trip.a + round_trip.d);
  if (!(std::abs(half_trace) < 1.0))
    throw geometry_error(half_trace,
                         "cavity_eigenmode: resonator is not stable "
                         "(|half-trace| = " + std::to_string(std::abs(half_trace)) + ")");

  // Self-consistent complex beam parameter q at the reference plane:
  // C q^2 + (D - A) q - B = 0 with positive imaginary part.
  const double disc = 4.0 * (1.0 - half_trace * half_trace);
  std::complex<double> q{(round_trip.a - round_trip.d) / (2.0 * round_trip.c),
                         std::sqrt(disc) / (2.0 * round_trip.c)};
  if (q.imag() < 0.0) q = std::conj(q);

  // Propagate into the crystal: crossing a flat interface into index n
  // scales q by n; the waist sits where the real part vanishes.
  const std::complex<double> q_crystal = (q + geom.air_gap) * n;
  EigenmodeResult result;
  result.stability = half_trace;
  result.waist_position = -q_crystal.real();
  result.rayleigh_range = q_crystal.imag();
  result.waist_radius = std::sqrt(beam.wavelength_fundamental *
                                  result.rayleigh_range / (pi * n));
  return result;
}

inline EigenmodeResult cavity_eigenmode(const CavitySpec& cavity,
                                        const CrystalSpec& crystal,
                                        const BeamSpec& beam,
                                        int segmentation = 1) {
  validate(cavity);
  return cavity_eigenmode(
      ResonatorGeometry{cavity.air_gap, cavity.coupler_radius, crystal.hr_radius},
      crystal, beam, segmentation);
}

}  // namespace shgsim
