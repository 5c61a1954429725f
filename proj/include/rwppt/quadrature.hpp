#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "rwppt/error.hpp"

namespace rwppt {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  std::size_t max_panels = 100000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;      // sum of panel error estimates
  double l1 = 0.0;         // integral of |f|, used for the roundoff floor
  std::size_t panels = 0;
};

namespace detail {

// Non-negative half of the 15-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<std::array<double, 2>, 8> kGauss15 = {{
    {0.00000000000000000e+00, 2.02578241925560898e-01},
    {2.01194093997434514e-01, 1.98431485327111246e-01},
    {3.94151347077563385e-01, 1.86161000015561878e-01},
    {5.70972172608538830e-01, 1.66269205816993781e-01},
    {7.24417731360170070e-01, 1.39570677926153908e-01},
    {8.48206583410427206e-01, 1.07159220467171773e-01},
    {9.37273392400705951e-01, 7.03660474881080689e-02},
    {9.87992518020485377e-01, 3.07532419961186465e-02},
}};

struct PanelSum {
  double value;
  double l1;
};

template <class F>
PanelSum gauss15(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fc = f(mid);
  double sum = kGauss15[0][1] * fc;
  double l1 = kGauss15[0][1] * std::abs(fc);
  for (std::size_t k = 1; k < kGauss15.size(); ++k) {
    const double dx = half * kGauss15[k][0];
    const double f1 = f(mid - dx);
    const double f2 = f(mid + dx);
    sum += kGauss15[k][1] * (f1 + f2);
    l1 += kGauss15[k][1] * (std::abs(f1) + std::abs(f2));
  }
  return {sum * half, l1 * std::abs(half)};
}

struct Panel {
  double a, b;
  double value, error, l1;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel make_panel(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const PanelSum whole = gauss15(f, a, b);
  const PanelSum left = gauss15(f, a, mid);
  const PanelSum right = gauss15(f, mid, b);
  const double refined = left.value + right.value;
  return {a, b, refined, std::abs(refined - whole.value), left.l1 + right.l1};
}

}  // namespace detail

/// Globally adaptive Gauss-Legendre quadrature over [breaks.front(), breaks.back()].
///
/// Each panel is scored by comparing one 15-point rule against two on its
/// halves; the worst panel is bisected until the summed estimate meets
/// max(abs_tol, rel_tol*|I|, 100*eps*int|f|). Interior breakpoints should sit
/// on kinks of the integrand.
template <class F>
QuadratureResult integrate(F&& f, std::span<const double> breaks,
                           const QuadratureOptions& opts = {}) {
  if (breaks.size() < 2) throw ArgumentError("integrate: need at least two breakpoints");
  std::priority_queue<detail::Panel> queue;
  QuadratureResult out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) continue;
    queue.push(detail::make_panel(f, breaks[i], breaks[i + 1]));
  }
  auto totals = [&] {
    // Periodic full rescan keeps the running sums free of cancellation drift.
    double value = 0.0, error = 0.0, l1 = 0.0;
    auto copy = queue;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      l1 += copy.top().l1;
      copy.pop();
    }
    out.value = value;
    out.error = error;
    out.l1 = l1;
  };
  totals();
  double value = out.value, error = out.error, l1 = out.l1;
  constexpr double kRoundoff = 100.0 * std::numeric_limits<double>::epsilon();
  std::size_t panels = queue.size();
  std::size_t since_rescan = 0;
  while (!queue.empty()) {
    const double target = std::max({opts.abs_tol, opts.rel_tol * std::abs(value), kRoundoff * l1});
    if (error <= target) break;
    if (panels >= opts.max_panels) {
      out.panels = panels;
      throw NumericalError("integrate: panel budget exhausted (error estimate " +
                               std::to_string(error) + ")",
                           error);
    }
    const detail::Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw NumericalError("integrate: interval collapsed below machine resolution", error);
    }
    const detail::Panel left = detail::make_panel(f, worst.a, mid);
    const detail::Panel right = detail::make_panel(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    queue.push(left);
    queue.push(right);
    ++panels;
    if (++since_rescan == 1024) {
      totals();
      value = out.value;
      error = out.error;
      l1 = out.l1;
      since_rescan = 0;
    }
  }
  totals();
  out.panels = panels;
  return out;
}

template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  const std::array<double, 2> breaks = {a, b};
  return integrate(std::forward<F>(f), std::span<const double>(breaks), opts);
}

}  // namespace rwppt
