#pragma once

#include <vector>

#include "wpd/core.hpp"

namespace wpd {

/// k' inside the square potential. Real for a well; purely imaginary (evanescent)
/// for a barrier below threshold. Im k' >= 0 always.
cplx interior_momentum(double k, const SquareWellSpec& well);

/// Exact partial-wave phase shift from matching logarithmic derivatives at r = w.
/// l = 0 uses the closed continuum-matched form -kw + atan((k/k') tan(k'w));
/// l > 0 returns the principal branch in (-pi/2, pi/2].
double delta_exact(int l, double k, const SquareWellSpec& well);

/// Low-momentum expansion
///   tan(delta_l) = -(kw)^(2l+1) / ((2l-1)!! (2l+1)!!) * (z_l - l) / (z_l + l + 1),
/// z_l evaluated at x = k' w. Throws NumericalError at a zero-energy resonance.
double delta_lowk(int l, double k, const SquareWellSpec& well);

/// Number of l = 0 bound states of an attractive well, found by counting nodes of the
/// zero-energy radial solution (interior sin(k0 r) plus its linear exterior continuation).
int count_bound_states_s(const SquareWellSpec& well);

struct PhaseShiftSample {
  double k = 0.0;
  double delta = 0.0;  // unwrapped
  double z = 0.0;      // z_l at x = k' w; NaN at a log-derivative pole
};

struct PhaseShiftTable {
  int l = 0;
  SquareWellSpec well;
  std::vector<PhaseShiftSample> samples;
};

/// Tabulates delta_exact on an increasing k grid and removes pi jumps so adjacent
/// samples differ by less than pi/2.
PhaseShiftTable tabulate_phase_shifts(int l, const SquareWellSpec& well, const std::vector<double>& ks);

std::vector<double> geometric_grid(double k_min, double k_max, std::size_t n);

struct LevinsonResult {
  double lhs = 0.0;  // delta0(k_min) - delta0(k_max), unwrapped
  double rhs = 0.0;  // pi * bound-state count
  int bound_states = 0;
  bool pass = false;
};

struct LevinsonOptions {
  double k_min_w = 1e-4;
  /// 0 selects max(200, 1000 (k0 w)^2) so the high-k tail k0^2 w / (2k) stays below 1e-3 rad.
  double k_max_w = 0.0;
  double tolerance = 1e-2;
};

LevinsonResult levinson_check(const SquareWellSpec& well, const LevinsonOptions& opts = {});

}  // namespace wpd
