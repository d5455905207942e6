#include "wpd/specialfn.hpp"

#include <array>
#include <cmath>
#include <string>

namespace wpd {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_order(int l) {
  if (l < 0) throw ConfigError("l", "angular momentum must be non-negative");
}

// j_l(z) by its power series; accurate for |z| below ~1 at any order.
cplx series_j(int l, cplx z) {
  const cplx z2 = -0.5 * z * z;
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= z2 / (static_cast<double>(k) * (2.0 * l + 2.0 * k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  cplx lead = 1.0;
  for (int n = 1; n <= l; ++n) lead *= z / (2.0 * n + 1.0);
  return lead * sum;
}

}  // namespace

cplx sph_bessel_j_scaled(int l, cplx z) {
  check_order(l);
  const double ay = std::abs(z.imag());
  const double az = std::abs(z);
  if (az < 0.5) return series_j(l, z) * std::exp(-ay);

  // sin z and cos z carrying the factor exp(-|Im z|).
  const cplx ep = std::exp(kI * z - ay);
  const cplx em = std::exp(-kI * z - ay);
  const cplx s = (ep - em) / (2.0 * kI);
  const cplx c = 0.5 * (ep + em);
  const cplx j0 = s / z;
  if (l == 0) return j0;
  const cplx j1 = s / (z * z) - c / z;
  if (l == 1) return j1;

  if (az > static_cast<double>(l)) {
    cplx jm = j0, jc = j1;
    for (int n = 1; n < l; ++n) {
      const cplx jn = (2.0 * n + 1.0) / z * jc - jm;
      jm = jc;
      jc = jn;
    }
    return jc;
  }

  // Miller: downward recurrence from well above l, normalised against j0 or j1.
  const int start = l + 20 + static_cast<int>(az);
  cplx fp = 0.0, f = 1e-30, fl = 0.0, f1 = 0.0, f0 = 0.0;
  for (int n = start; n >= 1; --n) {
    const cplx fm = (2.0 * n + 1.0) / z * f - fp;
    fp = f;
    f = fm;
    if (n - 1 == l) fl = f;
    if (n - 1 == 1) f1 = f;
    if (n - 1 == 0) f0 = f;
    if (std::abs(f) > 1e250) {
      f *= 1e-250;
      fp *= 1e-250;
      fl *= 1e-250;
      f1 *= 1e-250;
    }
  }
  const cplx scale = std::abs(j0) >= std::abs(j1) ? j0 / f0 : j1 / f1;
  return fl * scale;
}

cplx sph_bessel_j(int l, cplx z) {
  return sph_bessel_j_scaled(l, z) * std::exp(std::abs(z.imag()));
}

double sph_bessel_j(int l, double x) { return sph_bessel_j(l, cplx(x, 0.0)).real(); }

double sph_bessel_y(int l, double x) {
  check_order(l);
  if (!(x > 0.0)) throw ConfigError("x", "spherical Neumann function needs x > 0");
  const double y0 = -std::cos(x) / x;
  if (l == 0) return y0;
  double ym = y0;
  double yc = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int n = 1; n < l; ++n) {
    const double yn = (2.0 * n + 1.0) / x * yc - ym;
    ym = yc;
    yc = yn;
  }
  return yc;
}

cplx sph_bessel_jp(int l, cplx z) {
  check_order(l);
  if (l == 0) return -sph_bessel_j(1, z);
  return (static_cast<double>(l) * sph_bessel_j(l - 1, z) - (l + 1.0) * sph_bessel_j(l + 1, z)) / (2.0 * l + 1.0);
}

double sph_bessel_yp(int l, double x) {
  check_order(l);
  if (l == 0) return -sph_bessel_y(1, x);
  return (l * sph_bessel_y(l - 1, x) - (l + 1.0) * sph_bessel_y(l + 1, x)) / (2.0 * l + 1.0);
}

cplx log_deriv_z(int l, cplx x) {
  check_order(l);
  // Both functions carry the same exp(-|Im x|) factor, which cancels in the ratio.
  const cplx j = sph_bessel_j_scaled(l, x);
  const cplx jp = l == 0 ? -sph_bessel_j_scaled(1, x)
                         : (static_cast<double>(l) * sph_bessel_j_scaled(l - 1, x) - (l + 1.0) * sph_bessel_j_scaled(l + 1, x)) /
                               (2.0 * l + 1.0);
  const cplx num = x * jp;
  if (std::abs(j) < 1e-12 * std::abs(num)) {
    throw NumericalError("log-derivative pole: j_" + std::to_string(l) + " vanishes at x = " +
                         std::to_string(std::abs(x)));
  }
  return num / j;
}

double log_deriv_z(int l, double x) {
  if (!(x > 0.0)) throw ConfigError("x", "log-derivative needs x > 0");
  return log_deriv_z(l, cplx(x, 0.0)).real();
}

double legendre_p(int L, double u) {
  check_order(L);
  if (!(std::abs(u) <= 1.0)) throw ConfigError("u", "Legendre argument must lie in [-1, 1]");
  return legendre_p(L, cplx(u, 0.0)).real();
}

cplx legendre_p(int L, cplx u) {
  check_order(L);
  if (L == 0) return 1.0;
  cplx pm = 1.0, pc = u;
  for (int n = 1; n < L; ++n) {
    const cplx pn = ((2.0 * n + 1.0) * u * pc - static_cast<double>(n) * pm) / (n + 1.0);
    pm = pc;
    pc = pn;
  }
  return pc;
}

double log_double_factorial_odd(int l) {
  // log((2l+1)!!), with l = -1 giving log((-1)!!) = 0.
  double s = 0.0;
  for (int n = 3; n <= 2 * l + 1; n += 2) s += std::log(static_cast<double>(n));
  return s;
}

namespace {

// Weideman's rational expansion of w(z) in the upper half-plane.
constexpr int kWeidemanN = 64;

struct WeidemanTable {
  std::array<double, kWeidemanN> c{};
  double L = 0.0;
  WeidemanTable() {
    constexpr int M = 2 * kWeidemanN;
    L = std::sqrt(kWeidemanN / std::sqrt(2.0));
    std::array<double, 2 * M> f{};
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double theta = k * kPi / M;
      const double t = L * std::tan(theta / 2.0);
      f[static_cast<std::size_t>(k + M)] = std::exp(-t * t) * (L * L + t * t);
    }
    for (int n = 1; n <= kWeidemanN; ++n) {
      double s = 0.0;
      for (int k = -M + 1; k <= M - 1; ++k) s += f[static_cast<std::size_t>(k + M)] * std::cos(kPi * k * n / M);
      c[static_cast<std::size_t>(n - 1)] = s / (2.0 * M);
    }
  }
};

const WeidemanTable& weideman() {
  static const WeidemanTable table;
  return table;
}

cplx faddeeva_upper(cplx z) {
  const auto& t = weideman();
  const cplx den = t.L - kI * z;
  const cplx Z = (t.L + kI * z) / den;
  cplx p = 0.0;
  for (int n = kWeidemanN - 1; n >= 0; --n) p = p * Z + t.c[static_cast<std::size_t>(n)];
  return 2.0 * p / (den * den) + (1.0 / std::sqrt(kPi)) / den;
}

}  // namespace

cplx faddeeva_w(cplx z) { return faddeeva_w_shifted(z, 0.0); }

cplx faddeeva_w_shifted(cplx z, cplx shift) {
  if (z.imag() >= 0.0) return std::exp(shift) * faddeeva_upper(z);
  // Reflection w(z) = 2 exp(-z^2) - w(-z).
  return 2.0 * std::exp(shift - z * z) - std::exp(shift) * faddeeva_upper(-z);
}

}  // namespace wpd
