#pragma once

#include <utility>
#include <vector>

#include "wpd/core.hpp"
#include "wpd/scatter3d.hpp"

namespace wpd {

// One-dimensional Dirac scattering on a scalar square potential occupying (-w, w).
// The mass entering everything below is well.mass.

struct SpinorSample {
  double x = 0.0;
  double t = 0.0;
  cplx u{0.0, 0.0};
  cplx v{0.0, 0.0};
  double density() const { return std::norm(u) + std::norm(v); }
};

struct DiracCoeffs {
  cplx b, c, d, f;
  cplx g;
  cplx delta_det;  // Delta
  cplx k_prime;    // sqrt(E^2 - m*^2), Im >= 0
  double m_star = 0.0;
  double energy = 0.0;
};

/// Continuous: amplitudes that make both spinor components continuous at x = -w and x = w.
/// Printed: the closed-form coefficient set as usually written. Every coefficient carries an extra e^{2ikw},
/// so the spinor is discontinuous at the edges unless kw is a multiple of pi.
enum class CoeffConvention { Continuous, Printed };

/// m* = m - V0 for a well, m + V0 for a barrier.
double effective_mass(const SquareWellSpec& well);

/// Matching coefficients at momentum k != 0. Throws NumericalError
/// ("transmission resonance degenerate") when Delta vanishes.
DiracCoeffs dirac_coeffs(double k, const SquareWellSpec& well, CoeffConvention conv = CoeffConvention::Continuous);

/// Stationary spinor (phi_1, phi_2) at x for momentum k; zero at k = 0.
std::pair<cplx, cplx> dirac_stationary(double k, double x, const SquareWellSpec& well,
                                       CoeffConvention conv = CoeffConvention::Continuous);

/// 2 sigma^2 (E E0 - k q0 - m^2) written as 4 sigma^2 m^2 sinh^2((eta - eta0)/2), eta = asinh(k/m),
/// which stays accurate in both the nonrelativistic and nearly massless regimes.
double dirac_weight_exponent(double k, double q0, double mass, double sigma);

/// Momenta where the weight exponent equals `cut`: m sinh(eta0 -+ 2 asinh(sqrt(cut)/(2 sigma m))).
std::pair<double, double> dirac_k_range(double q0, double mass, double sigma, double cut = 100.0);

/// Initial spinor packet (U, V) at each x by k-quadrature.
std::vector<SpinorSample> dirac_initial_packet(const std::vector<double>& xs, const GaussianPacketSpec& packet,
                                               double mass, const QuadratureSpec& quad = {});
SpinorSample dirac_initial_packet(double x, const GaussianPacketSpec& packet, double mass,
                                  const QuadratureSpec& quad = {});

/// Scattered packet (U(x,t), V(x,t)) on a set of points, all three regions supported.
std::vector<SpinorSample> dirac_evolve(const std::vector<double>& xs, double t, const GaussianPacketSpec& packet,
                                       const SquareWellSpec& well, const QuadratureSpec& quad = {},
                                       CoeffConvention conv = CoeffConvention::Continuous);
SpinorSample dirac_evolve(double x, double t, const GaussianPacketSpec& packet, const SquareWellSpec& well,
                          const QuadratureSpec& quad = {});

/// |U|^2 + |V|^2 on an x-grid lying entirely left of the potential (x < -w).
std::vector<ProfilePoint> reflected_profile(double t, const std::vector<double>& xs, const GaussianPacketSpec& packet,
                                            const SquareWellSpec& well, const QuadratureSpec& quad = {});

/// Trapezoid integral of |U|^2 + |V|^2 over uniformly spaced samples.
double spinor_norm(const std::vector<SpinorSample>& samples);

}  // namespace wpd
