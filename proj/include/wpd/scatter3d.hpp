#pragma once

#include <cstddef>
#include <vector>

#include "wpd/core.hpp"

namespace wpd {

/// Momentum grid for the partial-wave integral. Zero/negative entries mean "choose
/// automatically": k in [max(0, q0 - 8/sigma), q0 + 8/sigma], n from the phase rate.
struct QuadratureSpec {
  double k_min = -1.0;
  double k_max = -1.0;
  std::size_t n = 0;
  int l_max = 0;
  double tolerance = 1e-6;  // relative change between successive doublings
  bool explicit_range = false;  // Dirac module: use [k_min, k_max] as given (k_min may be negative)
  int max_doublings = 6;
};

enum class PathTag { Incoming, Scattered, Total };

struct WaveSample {
  Vec3 position{0.0, 0.0, 0.0};
  double r = 0.0;
  double t = 0.0;
  cplx value{0.0, 0.0};
  PathTag path = PathTag::Total;
};

/// Quantities of the s-wave closed form. d = sqrt(D.D) with D = r0 + 2i sigma^2 q0
/// (complex dot product, Re d >= 0). `lambda` follows the printed ln(lambda) = z0/(d(z0+1))
/// and is used only by the printed-formula diagnostics.
struct SWaveClosedFormParams {
  cplx d;
  double z0 = 0.0;
  cplx lambda;
  double scattering_length = 0.0;  // a_s = w z0/(z0+1) = w (1 - tan x / x)

  static SWaveClosedFormParams from(const GaussianPacketSpec& packet, const SquareWellSpec& well);
};

/// sigma^2 + i t/(2m), the complex width parameter of the free evolution.
cplx spreading_width(double sigma, double t, double mass);

/// Freely evolved packet: integral d^3k exp(-(k-q0)^2 sigma^2 - i k.r0 - i k^2 t/2m + i k.r).
cplx psi_in(const Vec3& r, double t, const GaussianPacketSpec& packet, double mass);

/// Angular factor I_L = 4 pi (-i)^L j_L(k d) P_L(D.rhat / d) of the k-direction integral.
cplx angular_factor(int L, double k, const GaussianPacketSpec& packet, const Vec3& rhat);

/// Scattered wave by k-quadrature of the partial-wave sum with exact phase shifts.
/// Throws NumericalError with the last two estimates if doubling does not converge.
cplx psi_scatt_quadrature(double r, const Vec3& rhat, double t, const GaussianPacketSpec& packet,
                          const SquareWellSpec& well, const QuadratureSpec& quad = {});

/// Same integral on many radii along one direction; the phase-shift table is shared.
std::vector<cplx> psi_scatt_quadrature_profile(const std::vector<double>& rs, const Vec3& rhat, double t,
                                               const GaussianPacketSpec& packet, const SquareWellSpec& well,
                                               const QuadratureSpec& quad = {});

/// Long-time s-wave scattered wave in closed form (Faddeeva functions), using
/// e^{i delta} sin(delta) ~ -k a_s e^{-i k a_s} with z0 frozen at k = 0.
/// Throws NumericalError("half-bound-state resonance") when z0 + 1 vanishes.
cplx psi_scatt_closed(double r, double t, const GaussianPacketSpec& packet, const SquareWellSpec& well);

/// The scattered-wave formula exactly as printed, with lambda as defined there. Diagnostic only.
cplx psi_scatt_printed(double r, double t, const GaussianPacketSpec& packet, const SquareWellSpec& well);

/// The printed backward full-wave sin-form. Diagnostic only.
cplx psi_backward_printed(double r, double t, const GaussianPacketSpec& packet, const SquareWellSpec& well);

enum class Direction { Backward, Forward };

/// Unit vector against q0 (backward) or along q0 (forward).
Vec3 direction_vector(const GaussianPacketSpec& packet, Direction dir);

/// psi_in + psi_scatt_closed at distance r along the chosen direction.
WaveSample psi_total(double r, Direction dir, double t, const GaussianPacketSpec& packet,
                     const SquareWellSpec& well);

/// |psi_in + psi_scatt|^2 at angle theta from the q0 axis (theta = 0 forward, pi backward).
double angular_density(double r, double theta, double t, const GaussianPacketSpec& packet,
                       const SquareWellSpec& well);

struct ProfilePoint {
  double r = 0.0;
  double density = 0.0;
};

std::vector<ProfilePoint> density_profile(const std::vector<double>& rs, Direction dir, double t,
                                          const GaussianPacketSpec& packet, const SquareWellSpec& well);

/// Strict interior local maxima above 1e-3 of the global maximum. Boundary samples never count.
int count_peaks(const std::vector<ProfilePoint>& profile);
int count_peaks(const std::vector<double>& values);

/// Largest (hi - lo)/(hi + lo) over adjacent extrema whose density exceeds
/// `floor` times the global maximum. 0 for a profile with no interior extrema.
double fringe_visibility(const std::vector<ProfilePoint>& profile, double floor = 1e-2);

/// Radial grid that covers the reflected packet at time t: uniform on [2w, r_max] with
/// r_max = 2(|r0| + |q0| t/m) + 3 t/(2 m sigma).
std::vector<double> pattern_r_grid(const GaussianPacketSpec& packet, const SquareWellSpec& well, double t,
                                   std::size_t n_points);

/// Peak count of the backward profile on pattern_r_grid.
int backward_peak_count(const GaussianPacketSpec& packet, const SquareWellSpec& well, double t,
                        std::size_t n_points = 20000);

/// The sigma-ladder protocol: well strength, packet distance and observation time are
/// fixed; sigma values are multiples of sqrt(w/q0).
struct PatternProtocol {
  double w = 1.0;
  double q0 = 1.0;
  double mass = 1.0;
  double strength = 1.0;  // sqrt(2 m V0) w
  PotentialSign sign = PotentialSign::Well;
  double distance = 50.0;
  double t = 1000.0;
  std::size_t n_points = 20000;

  double sigma_unit() const;
  GaussianPacketSpec packet(double sigma_multiple) const;
  SquareWellSpec well() const;
};

struct PatternRow {
  double sigma = 0.0;
  int n_peaks = 0;
  bool blurred = false;
};

std::vector<PatternRow> run_pattern(const PatternProtocol& protocol, const std::vector<double>& sigma_multiples);

}  // namespace wpd
