#pragma once

#include <stdexcept>
#include <string>

namespace shgsim {

/// Nonlinear crystal: geometry, dispersion, absorption and facet coatings.
/// The plane facet carries the anti-reflection coating; the curved facet is
/// the highly reflective cavity end mirror.
struct CrystalSpec {
  double length = 9.3 * 1e-3;           // m
  double d_eff = 7.3e-12;               // m/V
  double n_fundamental = 1.8157731;     // from KTP Sellmeier dispersion, z-pol
  double n_harmonic = 1.8468324;
  double alpha_fundamental = 0.005;     // power absorption, 1/m (0.005 %/cm)
  double alpha_harmonic = 0.028;        // 1/m (0.028 %/cm)
  double ar_residual_reflectivity = 5e-4;    // per plane-facet crossing
  double hr_reflectivity_fundamental = 0.9995;
  double hr_reflectivity_harmonic = 0.9995;
  double hr_radius = 12e-3;             // m, curvature of the coated facet (0 = flat)
  double delta_k = 0.0;                 // phase mismatch, 1/m (ideal QPM)
  double qpm_temperature = 45.0;        // deg C, metadata only
};

inline void validate(const CrystalSpec& c) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("crystal." + field + ": " + why);
  };
  if (!(c.length > 0.0)) fail("length_mm", "must be positive");
  if (!(c.d_eff >= 0.0)) fail("d_eff_pm_per_V", "must be nonnegative");
  if (!(c.n_fundamental > 1.0)) fail("n_fundamental", "must exceed 1");
  if (!(c.n_harmonic > 1.0)) fail("n_harmonic", "must exceed 1");
  if (!(c.alpha_fundamental >= 0.0)) fail("alpha_fundamental_percent_per_cm", "must be nonnegative");
  if (!(c.alpha_harmonic >= 0.0)) fail("alpha_harmonic_percent_per_cm", "must be nonnegative");
  if (!(c.ar_residual_reflectivity >= 0.0 && c.ar_residual_reflectivity <= 1.0))
    fail("ar_residual_reflectivity", "must lie in [0,1]");
  if (!(c.hr_reflectivity_fundamental >= 0.0 && c.hr_reflectivity_fundamental <= 1.0))
    fail("hr_reflectivity_fundamental", "must lie in [0,1]");
  if (!(c.hr_reflectivity_harmonic >= 0.0 && c.hr_reflectivity_harmonic <= 1.0))
    fail("hr_reflectivity_harmonic", "must lie in [0,1]");
  if (!(c.hr_radius >= 0.0)) fail("hr_radius_mm", "must be nonnegative");
}

}  // namespace shgsim
