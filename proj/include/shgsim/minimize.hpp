#pragma once

#include <cmath>
#include <functional>
#include <utility>

namespace shgsim {

struct MinimizeResult {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

/// Bounded golden-section minimization of a unimodal scalar function.
/// `xtol` is the absolute bracket-width tolerance. When `polish` is set, one
/// parabolic-vertex refinement runs on the final triplet; this sharpens the
/// minimizer location far below the golden bracket without extra assumptions.
template <typename F>
MinimizeResult golden_section_min(F&& f, double lo, double hi, double xtol,
                                  bool polish = false) {
  constexpr double invphi = 0.6180339887498949;
  int evals = 0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  evals += 2;
  while ((b - a) > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  double xm = (fc < fd) ? c : d;
  double fm = (fc < fd) ? fc : fd;

  if (polish) {
    // Parabola through (a, f(a)), (xm, fm), (b, f(b)); accept the vertex if
    // it lands inside the bracket and improves on the incumbent.
    const double fa = f(a), fb = f(b);
    evals += 2;
    const double num = (xm - a) * (xm - a) * (fm - fb) - (xm - b) * (xm - b) * (fm - fa);
    const double den = (xm - a) * (fm - fb) - (xm - b) * (fm - fa);
    if (den != 0.0) {
      const double xv = xm - 0.5 * num / den;
      if (xv > lo && xv < hi) {
        const double fv = f(xv);
        ++evals;
        if (fv < fm) {
          xm = xv;
          fm = fv;
        }
      }
    }
  }
  return {xm, fm, evals};
}

}  // namespace shgsim
