#pragma once

#include <cmath>
#include <complex>

namespace shgsim {

using complex = std::complex<double>;

/// Complex field amplitudes of the fundamental and harmonic waves,
/// power-normalized so that |amplitude|^2 is an optical power in watts.
struct FieldPair {
  complex fundamental{0.0, 0.0};
  complex harmonic{0.0, 0.0};

  double power_fundamental() const { return std::norm(fundamental); }
  double power_harmonic() const { return std::norm(harmonic); }
  double power_total() const { return std::norm(fundamental) + std::norm(harmonic); }

  bool finite() const {
    return std::isfinite(fundamental.real()) && std::isfinite(fundamental.imag()) &&
           std::isfinite(harmonic.real()) && std::isfinite(harmonic.imag());
  }
};

}  // namespace shgsim
