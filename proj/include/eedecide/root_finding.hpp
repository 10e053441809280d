#pragma once

#include <cmath>
#include <sstream>

#include "eedecide/errors.hpp"

namespace eedecide {

struct BisectionOptions {
  int max_iterations = 200;
  double x_tolerance = 1e-14;  // stop when the bracket is narrower than this
  double f_tolerance = 0.0;    // stop when |f(mid)| <= this
};

struct BisectionResult {
  double root;
  double residual;
  int iterations;
};

/// Bisection for a continuous function with a sign change on [lo, hi].
/// Returns the bracket point with the smallest residual.
template <class F>
BisectionResult bisect(F&& fn, double lo, double hi, const BisectionOptions& opts = {}) {
  double f_lo = fn(lo);
  double f_hi = fn(hi);
  if (std::isnan(f_lo) || std::isnan(f_hi)) throw SolverError("bisect: NaN at bracket endpoint");
  if (f_lo == 0.0) return {lo, 0.0, 0};
  if (f_hi == 0.0) return {hi, 0.0, 0};
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "bisect: no sign change on [" << lo << ", " << hi << "] (f=" << f_lo << ", " << f_hi
        << ")";
    throw SolverError(msg.str());
  }

  auto closest = [&](int it) {
    return std::abs(f_lo) <= std::abs(f_hi) ? BisectionResult{lo, f_lo, it}
                                            : BisectionResult{hi, f_hi, it};
  };
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    // Bracket down to adjacent doubles.
    if (mid <= lo || mid >= hi) return closest(it);
    const double f_mid = fn(mid);
    if (std::isnan(f_mid)) throw SolverError("bisect: NaN inside bracket");
    if (f_mid == 0.0 || std::abs(f_mid) <= opts.f_tolerance) return {mid, f_mid, it};
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
    if (hi - lo < opts.x_tolerance) return closest(it);
  }
  std::ostringstream msg;
  msg << "bisect: no convergence after " << opts.max_iterations << " iterations";
  throw SolverError(msg.str());
}

}  // namespace eedecide
