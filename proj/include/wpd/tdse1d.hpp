#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "wpd/core.hpp"

namespace wpd {

/// n interior points strictly inside (x_min, x_max); psi = 0 on both ends (Dirichlet).
/// x_i = x_min + (i + 1) dx with dx = (x_max - x_min) / (n + 1).
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 256;
  double dt = 1e-3;

  double dx() const { return (x_max - x_min) / static_cast<double>(n + 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i + 1) * dx(); }
  /// Uniform grid with spacing close to `spacing`.
  static Grid1D with_spacing(double x_min, double x_max, double spacing, double dt);
};

void validate(const Grid1D& g);

struct FieldState {
  double t = 0.0;
  std::vector<cplx> values;
};

/// exp(i q0 (x - x0) - (x - x0)^2 / (4 sigma^2)) sampled on the grid.
FieldState gaussian_state(const Grid1D& grid, const GaussianPacketSpec& packet);

/// Sum |psi_i|^2 dx (the trapezoid rule with the zero boundary values).
double discrete_norm(const FieldState& s, const Grid1D& grid);

/// Signed potential of a square plate occupying [left, left + w].
std::vector<double> plate_potential(const Grid1D& grid, const SquareWellSpec& plate, double left);

/// Crank-Nicolson propagator for H = -(1/2m) d^2/dx^2 + V with a prefactored tridiagonal solve.
class CrankNicolson {
public:
  CrankNicolson(const Grid1D& grid, std::vector<double> potential, double mass);
  void step(FieldState& s) const;
  const Grid1D& grid() const { return grid_; }

private:
  Grid1D grid_;
  std::vector<double> potential_;
  double mass_;
  cplx off_;                    // off-diagonal of (I + i dt H / 2)
  std::vector<cplx> diag_rhs_;  // diagonal of (I - i dt H / 2)
  std::vector<cplx> cprime_;    // Thomas forward-sweep factors
  std::vector<cplx> inv_den_;
  mutable std::vector<cplx> scratch_;  // one propagator per thread
};

struct EvolveResult {
  std::vector<FieldState> snapshots;  // initial state first, then every `stride` steps
  bool boundary_contaminated = false;
  double max_edge_ratio = 0.0;  // largest |psi(edge)| / max |psi| seen at a snapshot
  bool dt_above_heuristic = false;  // dt > 0.5 m dx^2
};

using SnapshotObserver = std::function<void(const FieldState&)>;

/// Evolves n_steps. Every `stride` steps (and after the last step) the state is checked for
/// boundary contamination, passed to `observer` and, if `store` is set, kept as a snapshot.
EvolveResult cn_evolve(const FieldState& initial, const Grid1D& grid, const std::vector<double>& potential,
                       double mass, std::size_t n_steps, std::size_t stride = 50,
                       const SnapshotObserver& observer = {}, bool store = true);

struct CountSample {
  double t = 0.0;
  double count = 0.0;
};

/// n_total * (window integral of |psi|^2) / (initial norm), trapezoid rule on the piecewise-linear
/// density. Throws ConfigError if the window leaves the grid.
double window_probability(const FieldState& s, const Grid1D& grid, double a, double b);
std::vector<CountSample> detector_counts(const std::vector<FieldState>& history, const Grid1D& grid,
                                         const DetectorSpec& det, double initial_norm);

/// Strict local maxima of the count series above 1e-3 of its largest value.
int count_series_maxima(const std::vector<CountSample>& series);

/// Everything needed for one detector-count run.
struct ExperimentConfig {
  std::string name;
  GaussianPacketSpec packet;
  SquareWellSpec plate;  // barrier
  double plate_left = 0.0;
  DetectorSpec detector;
  Grid1D grid;
  double t_end = 0.0;
  std::size_t stride = 50;             // steps between detector samples
  std::size_t snapshot_stride = 5000;  // steps between stored density snapshots
};

/// Named presets: "figure1-full" (the full-size parameters in natural units; far too fine
/// to integrate at desk scale), "figure1-scaled" (narrow packet) and "figure1-scaled-wide".
ExperimentConfig experiment_preset(const std::string& name = "figure1-scaled");
std::vector<std::string> experiment_preset_names();

struct ExperimentResult {
  EvolveResult evolution;
  std::vector<CountSample> counts;
  double transmitted = 0.0;  // probability beyond the plate at the final time
  int count_maxima = 0;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace wpd
