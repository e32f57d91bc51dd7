#pragma once

#include <stdexcept>

#include "shgsim/constants.hpp"

namespace shgsim {

/// Gaussian beam of the cavity TEM00 mode at the fundamental wavelength.
/// The harmonic wavelength is exactly half the fundamental by construction.
struct BeamSpec {
  double wavelength_fundamental = 1550e-9;  // m
  double waist_radius = 37.6e-6;            // m
  double focus_position = 1.117e-3;         // m from the plane crystal facet

  double wavelength_harmonic() const { return wavelength_fundamental / 2.0; }

  /// Rayleigh range inside a medium of index n.
  double rayleigh_range(double n) const {
    return pi * waist_radius * waist_radius * n / wavelength_fundamental;
  }
};

inline void validate(const BeamSpec& b) {
  if (!(b.wavelength_fundamental > 0.0))
    throw std::invalid_argument("beam.wavelength_fundamental_nm: must be positive");
  if (!(b.waist_radius > 0.0))
    throw std::invalid_argument("beam.waist_radius_um: must be positive");
}

}  // namespace shgsim
