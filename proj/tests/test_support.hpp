#pragma once

#include <cmath>
#include <functional>

// Test-side oracles, kept independent of the library's numerics.
namespace oracle {

inline double simpson_slice(double a, double b, double fa, double fm,
                            double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_slice(a, m, fa, flm, fm);
  const double right = simpson_slice(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Adaptive Simpson integration.
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = simpson_slice(a, b, fa, fm, fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60);
}

inline double normal_pdf(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
}

// Pr{Z > x} by numerical integration of the standard normal density.
inline double normal_tail(double x) {
  if (x > 42.0) return 0.0;
  if (x < -42.0) return 1.0;
  const double upper = 42.0;
  return integrate([](double t) { return normal_pdf(t); }, x, upper, 1e-14);
}

}  // namespace oracle
