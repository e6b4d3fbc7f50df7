#pragma once

#include <cmath>
#include <utility>

namespace gsmooth::detail {

struct LineMinimum {
  double x;
  double value;
};

// Golden-section search for a minimum of `f` on [lo, hi]. Assumes the
// function is unimodal on the bracket; stops once the bracket is narrower
// than `tolerance`.
template <class Fn>
LineMinimum golden_section_minimize(Fn&& f, double lo, double hi, double tolerance,
                                    int max_iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iterations && (hi - lo) > tolerance; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc < fd ? LineMinimum{c, fc} : LineMinimum{d, fd};
}

}  // namespace gsmooth::detail
