#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "wpd/core.hpp"

namespace wpd {

/// Weighted node sums for a batch of integrands f_i(k), i < n_out:
/// sums[i] = sum_j weights[j] f_i(ks[j]), l1[i] = sum_j weights[j] |f_i(ks[j])|.
struct NodeSums {
  std::vector<cplx> sums;
  std::vector<double> l1;
};

/// Composite Simpson on [a, b] with n0 initial intervals, refined by halving the step
/// (old nodes are reused through the trapezoid recursion). Every output must satisfy
/// |S_2n - S_n| <= tol * max(|S_2n|, floor_rel * max_i |S_2n,i|), or sit at the roundoff level
/// 1e-12 * integral of |f_i|; NumericalError otherwise.
/// `eval(ks, weights)` returns NodeSums for the supplied nodes.
template <class Eval>
std::vector<cplx> simpson_doubling(double a, double b, std::size_t n0, int max_doublings, double tol,
                                   std::size_t n_out, Eval&& eval, double floor_rel = 1e-8) {
  const double span = b - a;
  std::size_t n = std::max<std::size_t>(n0, 2);
  std::vector<cplx> trap(n_out), simpson(n_out), prev(n_out);
  std::vector<double> l1(n_out, 0.0);
  {
    std::vector<double> ks(n + 1), ws(n + 1, 1.0);
    for (std::size_t j = 0; j <= n; ++j) ks[j] = a + span * static_cast<double>(j) / static_cast<double>(n);
    ws.front() = ws.back() = 0.5;
    const NodeSums s = eval(ks, ws);
    const double h = span / static_cast<double>(n);
    for (std::size_t i = 0; i < n_out; ++i) {
      trap[i] = h * s.sums[i];
      l1[i] = h * s.l1[i];
    }
  }
  for (int level = 0; level <= max_doublings; ++level) {
    const double h = span / static_cast<double>(n);
    std::vector<double> ks(n), ws(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) ks[j] = a + h * (static_cast<double>(j) + 0.5);
    const NodeSums s = eval(ks, ws);
    for (std::size_t i = 0; i < n_out; ++i) {
      const cplx t2 = 0.5 * trap[i] + 0.5 * h * s.sums[i];
      simpson[i] = (4.0 * t2 - trap[i]) / 3.0;
      trap[i] = t2;
      l1[i] = 0.5 * l1[i] + 0.5 * h * s.l1[i];
    }
    n *= 2;
    if (level > 0) {
      double top = 0.0;
      for (const auto& v : simpson) top = std::max(top, std::abs(v));
      std::size_t worst = 0;
      double worst_ratio = 0.0;
      for (std::size_t i = 0; i < n_out; ++i) {
        const double err = std::abs(simpson[i] - prev[i]);
        if (err <= 1e-12 * l1[i]) continue;  // roundoff level of the node sum
        const double ratio = err / std::max(std::max(std::abs(simpson[i]), floor_rel * top), 1e-300);
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst = i;
        }
      }
      if (worst_ratio <= tol) return simpson;
      if (level == max_doublings) {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "quadrature did not converge after %d doublings (output %zu): last estimates "
                      "(%.10g, %.10g) and (%.10g, %.10g)",
                      max_doublings, worst, prev[worst].real(), prev[worst].imag(), simpson[worst].real(),
                      simpson[worst].imag());
        throw NumericalError(buf);
      }
    }
    prev = simpson;
  }
  throw NumericalError("quadrature did not converge");
}

/// Intervals giving ~16 samples per oscillation for a phase rate `rate` over `span`,
/// rounded up and never below 64.
inline std::size_t intervals_for_rate(double span, double rate) {
  const double n = std::ceil(16.0 * span * rate / (2.0 * kPi));
  if (!(n < static_cast<double>(std::size_t{1} << 26))) {
    throw NumericalError("quadrature grid would exceed 2^26 intervals");
  }
  return std::max<std::size_t>(64, static_cast<std::size_t>(n));
}

}  // namespace wpd
