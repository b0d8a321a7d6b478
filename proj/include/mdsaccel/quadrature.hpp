#pragma once

#include <cmath>
#include <string>

#include "mdsaccel/errors.hpp"

namespace mdsaccel::quadrature {

struct SimpsonOptions {
  double abs_tol = 1e-10;
  int min_depth = 4;  // guards against a lucky coarse estimate
  int max_depth = 48;
};

namespace detail {

template <class F>
double adaptive_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                     int depth, const SimpsonOptions& opts) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth >= opts.min_depth && std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth >= opts.max_depth)
    throw NumericError("adaptive Simpson did not converge on [" + std::to_string(a) + ", " + std::to_string(b) +
                       "]");
  return adaptive_step(f, a, m, fa, flm, fm, left, tol / 2, depth + 1, opts) +
         adaptive_step(f, m, b, fm, frm, fb, right, tol / 2, depth + 1, opts);
}

}  // namespace detail

/// Adaptive Simpson with Richardson correction. Throws NumericError when the
/// recursion limit is hit before the panel error drops below tolerance.
template <class F>
double adaptive_simpson(const F& f, double a, double b, const SimpsonOptions& opts = {}) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double result = detail::adaptive_step(f, a, b, fa, fm, fb, whole, opts.abs_tol, 0, opts);
  if (!std::isfinite(result)) throw NumericError("adaptive Simpson produced a non-finite value");
  return result;
}

}  // namespace mdsaccel::quadrature
