#include <doctest.h>

#include <cmath>
#include <vector>

#include "wpd/specialfn.hpp"

using namespace wpd;

namespace {

// Power series j_l(z) = z^l sum_k (-z^2/2)^k / (k! (2l+2k+1)!!), summed to 40 terms.
cplx series_j(int l, cplx z) {
  cplx pref = 1.0;
  for (int i = 1; i <= l; ++i) pref *= z / (2.0 * i + 1.0);
  cplx term = pref, sum = pref;
  for (int k = 1; k < 40; ++k) {
    term *= -z * z / (2.0 * k * (2.0 * l + 2.0 * k + 1.0));
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_SUITE("specialfn") {

TEST_CASE("j at the origin") {
  CHECK(sph_bessel_j(0, 0.0) == 1.0);
  CHECK(sph_bessel_j(1, 0.0) == 0.0);
}

TEST_CASE("j2(1) against a long power series") {
  const double s = series_j(2, 1.0).real();
  CHECK(std::abs(sph_bessel_j(2, 1.0) - s) < 1e-12 * std::abs(s));
}

TEST_CASE("real j and y against the standard library") {
  for (int l = 0; l <= 10; ++l) {
    for (double x : {0.05, 0.4, 0.7, 1.3, 5.0, 17.0, 45.0}) {
      const double ref = std::sph_bessel(l, x);
      CHECK(sph_bessel_j(l, x) == doctest::Approx(ref).epsilon(1e-10).scale(1e-300));
      if (x > 0.3 || l < 4) CHECK(sph_bessel_y(l, x) == doctest::Approx(std::sph_neumann(l, x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("complex j against the series at moderate arguments") {
  for (int l = 0; l <= 8; ++l) {
    for (cplx z : {cplx(0.3, 0.2), cplx(1.5, -0.7), cplx(2.0, 3.0), cplx(-0.4, 1.1), cplx(0.0, 2.5)}) {
      const cplx ref = series_j(l, z);
      CHECK(std::abs(sph_bessel_j(l, z) - ref) <= 1e-11 * std::abs(ref));
    }
  }
}

TEST_CASE("recurrence consistency") {
  for (int l = 1; l <= 8; ++l) {
    for (double r : {0.1, 0.5, 2.0, 10.0, 50.0}) {
      for (double ph : {0.0, 0.3, 1.2, 2.8}) {
        const cplx z = std::polar(r, ph);
        const cplx lhs = (2.0 * l + 1.0) * sph_bessel_j(l, z);
        const cplx rhs = z * (sph_bessel_j(l - 1, z) + sph_bessel_j(l + 1, z));
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), std::abs(z * sph_bessel_j(l - 1, z))));
      }
    }
  }
}

TEST_CASE("scaled j matches j times exp(-|Im z|)") {
  for (cplx z : {cplx(3.0, 4.0), cplx(0.2, -0.1), cplx(10.0, -20.0)}) {
    for (int l = 0; l <= 5; ++l) {
      const cplx ref = sph_bessel_j(l, z) * std::exp(-std::abs(z.imag()));
      CHECK(std::abs(sph_bessel_j_scaled(l, z) - ref) <= 1e-12 * std::abs(ref));
    }
  }
  CHECK(std::isfinite(std::abs(sph_bessel_j_scaled(3, cplx(5.0, 900.0)))));
}

TEST_CASE("j is real on the real axis") {
  for (int l = 0; l <= 10; ++l) {
    for (double x : {0.01, 0.49, 0.51, 3.0, 30.0}) CHECK(std::abs(sph_bessel_j(l, cplx(x, 0.0)).imag()) < 1e-14);
  }
}

TEST_CASE("derivative against central differences") {
  const double h = 1e-5;
  for (int l = 0; l <= 6; ++l) {
    for (double x : {0.3, 2.0, 9.0}) {
      const double fd = (sph_bessel_j(l, x + h) - sph_bessel_j(l, x - h)) / (2 * h);
      CHECK(sph_bessel_jp(l, cplx(x, 0.0)).real() == doctest::Approx(fd).epsilon(1e-7).scale(1e-9));
      const double fy = (sph_bessel_y(l, x + h) - sph_bessel_y(l, x - h)) / (2 * h);
      CHECK(sph_bessel_yp(l, x) == doctest::Approx(fy).epsilon(1e-6));
    }
  }
}

TEST_CASE("log derivative") {
  const double x = 1.0;
  CHECK(log_deriv_z(0, x) == doctest::Approx(x / std::tan(x) - 1.0).epsilon(1e-13));
  for (int l = 0; l <= 6; ++l) CHECK(std::abs(log_deriv_z(l, 1e-6) - l) < 1e-4);
  CHECK_THROWS_AS(log_deriv_z(0, kPi), NumericalError);
  // Imaginary argument: z0(i y) = y coth y - 1.
  const double y = 2.5;
  CHECK(std::abs(log_deriv_z(0, cplx(0.0, y)) - (y / std::tanh(y) - 1.0)) < 1e-12);
}

TEST_CASE("Legendre values") {
  for (double u : {-1.0, -0.3, 0.0, 0.9}) CHECK(legendre_p(0, u) == 1.0);
  CHECK(legendre_p(1, 0.3) == doctest::Approx(0.3));
  CHECK(legendre_p(2, 0.5) == doctest::Approx(-0.125));
  for (int L = 0; L <= 10; ++L) {
    for (double u : {-0.8, 0.1, 0.77}) CHECK(legendre_p(L, u) == doctest::Approx(std::legendre(L, u)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(legendre_p(2, 1.5), ConfigError);
  const cplx u(0.4, 0.0);
  CHECK(std::abs(legendre_p(3, u) - legendre_p(3, 0.4)) < 1e-15);
  const cplx v(1.2, 0.7);
  CHECK(std::abs(legendre_p(2, v) - 0.5 * (3.0 * v * v - 1.0)) < 1e-14);
}

TEST_CASE("Legendre orthogonality by Gauss-Legendre quadrature") {
  // 64-point Gauss-Legendre nodes by Newton iteration on P_64.
  const int n = 64;
  std::vector<double> xs(n), ws(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 50; ++it) {
      const double p = std::legendre(n, x), pm = std::legendre(n - 1, x);
      const double dp = n * (x * p - pm) / (x * x - 1.0);
      x -= p / dp;
    }
    const double pm = std::legendre(n - 1, x), p = std::legendre(n, x);
    const double dp = n * (x * p - pm) / (x * x - 1.0);
    xs[i] = x;
    ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  for (int a = 0; a <= 8; ++a) {
    for (int b = 0; b <= 8; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += ws[i] * legendre_p(a, xs[i]) * legendre_p(b, xs[i]);
      if (a != b) CHECK(std::abs(s) < 1e-10);
      else CHECK(s == doctest::Approx(2.0 / (2 * a + 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("Faddeeva function") {
  // Imaginary axis: w(iy) = exp(y^2) erfc(y).
  for (double y : {0.1, 1.0, 3.0, 8.0}) {
    const cplx v = faddeeva_w(cplx(0.0, y));
    CHECK(v.real() == doctest::Approx(std::exp(y * y) * std::erfc(y)).epsilon(1e-12));
    CHECK(std::abs(v.imag()) < 1e-15);
  }
  // Real axis: Re w(x) = exp(-x^2).
  for (double x : {0.2, 1.7, 4.0}) CHECK(faddeeva_w(cplx(x, 0.0)).real() == doctest::Approx(std::exp(-x * x)).epsilon(1e-12));
  // Upper half plane against (i/pi) integral exp(-s^2)/(z - s) ds by a fine trapezoid.
  for (cplx z : {cplx(0.5, 0.8), cplx(-2.0, 1.5), cplx(3.0, 0.6)}) {
    cplx s = 0.0;
    const double h = 1e-3;
    for (double t = -12.0; t <= 12.0; t += h) s += std::exp(-t * t) / (z - t);
    s *= cplx(0.0, h / kPi);
    CHECK(std::abs(faddeeva_w(z) - s) < 1e-9 * std::abs(s));
  }
  // Reflection: w(-z) = 2 exp(-z^2) - w(z).
  const cplx z(1.3, 0.4);
  CHECK(std::abs(faddeeva_w(-z) - (2.0 * std::exp(-z * z) - faddeeva_w(z))) < 1e-12);
  const cplx sh(-3.0, 0.2);
  CHECK(std::abs(faddeeva_w_shifted(z, sh) - std::exp(sh) * faddeeva_w(z)) < 1e-13);
  CHECK(std::isfinite(std::abs(faddeeva_w_shifted(cplx(0.0, -30.0), cplx(-950.0, 0.0)))));
}

TEST_CASE("double factorial") {
  CHECK(log_double_factorial_odd(-1) == 0.0);
  CHECK(std::exp(log_double_factorial_odd(0)) == doctest::Approx(1.0));
  CHECK(std::exp(log_double_factorial_odd(3)) == doctest::Approx(105.0));
  CHECK(std::exp(log_double_factorial_odd(7)) == doctest::Approx(2027025.0));
}

}
