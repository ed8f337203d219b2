#pragma once

#include <utility>

// One-dimensional golden-section minimization, shared by the curve sampler,
// the roof optimizer, and the verification suite.

namespace tangleroof::detail {

// Minimum of f on [a, b] for a unimodal f; shrinks the bracket to `window`
// and returns {argmin, min}.
template <typename F>
std::pair<double, double> golden_min(F&& f, double a, double b, double window) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > window) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace tangleroof::detail
