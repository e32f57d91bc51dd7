#pragma once

#include <cmath>
#include <stdexcept>

namespace shgsim {

/// Refractive index of KTP for z-polarized light from a published Sellmeier
/// dispersion relation (wavelength in micrometres, valid ~0.43-3.5 um).
/// Used only to derive the default index entries of the bundled config
/// template; the solver itself takes indices as plain inputs.
inline double ktp_index_z(double wavelength_um) {
  if (wavelength_um <= 0.0)
    throw std::invalid_argument("ktp_index_z: wavelength must be positive");
  const double l2 = wavelength_um * wavelength_um;
  const double n2 =
      4.59423 + 0.06206 / (l2 - 0.04763) + 110.80672 / (l2 - 86.12171);
  if (n2 <= 0.0)
    throw std::invalid_argument("ktp_index_z: wavelength outside validity range");
  return std::sqrt(n2);
}

}  // namespace shgsim
