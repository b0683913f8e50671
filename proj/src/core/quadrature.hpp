#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace stabletree::quad {

// 12-point Gauss-Legendre rule on [-1,1], positive half (symmetric).
inline constexpr double kGL12Node[6] = {
    0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
    0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
inline constexpr double kGL12Weight[6] = {
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

template <class F>
double gl12(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 6; ++i) {
    const double d = h * kGL12Node[i];
    acc += kGL12Weight[i] * (f(c - d) + f(c + d));
  }
  return acc * h;
}

// Composite GL12 over [a,b] with a caller-supplied local panel width
// step(s) > 0; panels never exceed (b-a)/min_panels.
template <class F, class Step>
double panels(F&& f, double a, double b, Step&& step, int min_panels = 8) {
  if (!(b > a)) return 0.0;
  const double cap = (b - a) / static_cast<double>(min_panels);
  double acc = 0.0, s = a;
  long count = 0;
  while (s < b) {
    double h = step(s);
    if (!(h > 0.0)) throw std::invalid_argument("panel step must be positive");
    if (h > cap) h = cap;
    const double e = std::min(b, s + h);
    acc += gl12(f, s, e);
    s = e;
    if (++count > 2000000)
      throw std::runtime_error("panel integration exceeded its budget");
  }
  return acc;
}

namespace detail {
template <class F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int depth = 48) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace stabletree::quad
