#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "shgsim/beam.hpp"
#include "shgsim/constants.hpp"
#include "shgsim/crystal.hpp"

namespace shgsim {

namespace detail {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 8> gl16_nodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
inline constexpr std::array<double, 8> gl16_weights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

template <typename F>
auto gauss_legendre(F&& f, double a, double b, int panels) {
  using R = decltype(f(a));
  R total{};
  const double dw = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * dw;
    const double half = 0.5 * dw;
    R panel{};
    for (std::size_t i = 0; i < gl16_nodes.size(); ++i) {
      panel += gl16_weights[i] *
               (f(mid - half * gl16_nodes[i]) + f(mid + half * gl16_nodes[i]));
    }
    total += half * panel;
  }
  return total;
}

}  // namespace detail

/// Gaussian-beam focusing factor h(xi) for second-harmonic generation with
/// zero walk-off and zero phase offset, xi = L / (2 z_R). Evaluated by
/// quadrature of the standard overlap integral
///   h = |int_{-xi}^{xi} dtau / (1 + i tau)|^2 / (4 xi).
/// Tends to xi in the weak-focusing limit.
inline double boyd_kleinman_factor(double focus_param) {
  if (!(focus_param > 0.0))
    throw std::domain_error("boyd_kleinman_factor: focus parameter must be positive");
  const double xi = focus_param;
  const int panels = std::max(8, static_cast<int>(std::ceil(2.0 * xi)));
  const std::complex<double> integral = detail::gauss_legendre(
      [](double tau) { return 1.0 / std::complex<double>(1.0, tau); }, -xi, xi,
      panels);
  return std::norm(integral) / (4.0 * xi);
}

/// Single-pass nonlinear coefficient E_NL in 1/W, defined through the
/// low-power relation P2 = E_NL * P1^2 for one crystal transit, with the
/// transverse Gaussian overlap folded in via the focusing factor.
inline double single_pass_coefficient(const CrystalSpec& crystal, const BeamSpec& beam) {
  validate(crystal);
  validate(beam);
  if (crystal.d_eff == 0.0) return 0.0;
  const double omega1 = 2.0 * pi * speed_of_light / beam.wavelength_fundamental;
  const double xi =
      crystal.length / (2.0 * beam.rayleigh_range(crystal.n_fundamental));
  const double h = boyd_kleinman_factor(xi);
  const double c4 = speed_of_light * speed_of_light * speed_of_light * speed_of_light;
  return 2.0 * omega1 * omega1 * omega1 * crystal.d_eff * crystal.d_eff *
         crystal.length * h /
         (pi * vacuum_permittivity * c4 * crystal.n_fundamental * crystal.n_harmonic);
}

/// Plane-wave fallback of the same coefficient (h -> xi limit); scales with
/// L^2 and inversely with the waist area.
inline double single_pass_coefficient_plane_wave(const CrystalSpec& crystal,
                                                 const BeamSpec& beam) {
  validate(crystal);
  validate(beam);
  const double omega1 = 2.0 * pi * speed_of_light / beam.wavelength_fundamental;
  const double c3 = speed_of_light * speed_of_light * speed_of_light;
  const double w2 = beam.waist_radius * beam.waist_radius;
  return 2.0 * omega1 * omega1 * crystal.d_eff * crystal.d_eff * crystal.length *
         crystal.length /
         (pi * vacuum_permittivity * c3 * crystal.n_fundamental *
          crystal.n_fundamental * crystal.n_harmonic * w2);
}

}  // namespace shgsim
