#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace fdmac {

struct IntegrationResult {
  double value = 0.0;
  double abs_error = 0.0;  // achieved error estimate
  bool converged = false;
  int subdivisions = 0;
};

namespace detail {

// Gauss-Kronrod 15-point nodes/weights on [-1,1] with the embedded
// 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void gk15(const F& f, double a, double b, double* value, double* error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kKronrodWeights[i] * (f1 + f2);
    if (i % 2 == 1) {
      gauss += kGaussWeights[i / 2] * (f1 + f2);
    }
  }
  *value = kronrod * half;
  *error = std::abs((kronrod - gauss) * half);
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a,b] to absolute
// tolerance abs_tol. The worst panel is split first; non-convergence is
// reported with the achieved error estimate instead of throwing.
template <class F>
IntegrationResult integrate(const F& f, double a, double b, double abs_tol,
                            int max_subdivisions = 4000) {
  IntegrationResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }

  std::priority_queue<detail::Panel> panels;
  detail::Panel first{a, b, 0.0, 0.0};
  detail::gk15(f, a, b, &first.value, &first.error);
  panels.push(first);

  double total_value = first.value;
  double total_error = first.error;
  int splits = 0;

  while (total_error > abs_tol && splits < max_subdivisions) {
    detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval exhausted at double precision
      panels.push(worst);
      break;
    }
    detail::Panel left{worst.a, mid, 0.0, 0.0};
    detail::Panel right{mid, worst.b, 0.0, 0.0};
    detail::gk15(f, left.a, left.b, &left.value, &left.error);
    detail::gk15(f, right.a, right.b, &right.value, &right.error);
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++splits;
  }

  result.value = total_value;
  result.abs_error = std::max(total_error, 0.0);
  result.converged = total_error <= abs_tol;
  result.subdivisions = splits;
  return result;
}

}  // namespace fdmac
