#pragma once

#include "wpd/core.hpp"

namespace wpd {

/// Highest angular momentum accepted by the Bessel routines unless a caller raises it.
inline constexpr int kDefaultLmax = 10;

/// Spherical Bessel function j_l(z), analytic continuation for complex z.
/// Power series below |z| = 0.5, trigonometric start plus recurrence above.
cplx sph_bessel_j(int l, cplx z);
double sph_bessel_j(int l, double x);

/// j_l(z) * exp(-|Im z|). Finite where j_l itself would overflow.
cplx sph_bessel_j_scaled(int l, cplx z);

/// Spherical Neumann function y_l(x) for real x > 0 (upward recurrence).
double sph_bessel_y(int l, double x);

/// Derivatives with respect to the argument.
cplx sph_bessel_jp(int l, cplx z);
double sph_bessel_yp(int l, double x);

/// z_l = x j_l'(x) / j_l(x). Throws NumericalError("log-derivative pole") at zeros of j_l.
double log_deriv_z(int l, double x);
/// Complex form, used for evanescent interiors where x is imaginary.
cplx log_deriv_z(int l, cplx x);

/// Legendre polynomial via Bonnet recurrence. Throws ConfigError for |u| > 1.
double legendre_p(int L, double u);
/// Unrestricted complex argument (needed when the packet displacement vector is complex).
cplx legendre_p(int L, cplx u);

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z).
cplx faddeeva_w(cplx z);
/// exp(shift) * w(z), combined in the exponent so large-|z| lower half-plane values do not overflow.
cplx faddeeva_w_shifted(cplx z, cplx shift);

/// (2l+1)!! computed in log space; (-1)!! = 1.
double log_double_factorial_odd(int l);

}  // namespace wpd
