#include <doctest.h>

#include <cmath>
#include <random>

#include "wpd/dirac1d.hpp"
#include "wpd/validation.hpp"

using namespace wpd;

TEST_SUITE("dirac1d") {

TEST_CASE("free case: nothing reflected") {
  SquareWellSpec free;
  for (double k : {0.01, 0.5, 3.0}) {
    const auto c = dirac_coeffs(k, free);
    CHECK(std::abs(c.b) < 1e-15);
    CHECK(std::abs(c.f) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("unitarity on random propagating momenta") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uk(1e-3, 10.0);
  const SquareWellSpec cases[] = {SquareWellSpec::from_strength(1.0), SquareWellSpec::from_strength(3.0, 0.5, 2.0),
                                  SquareWellSpec::from_strength(1.0, 1.0, 1.0, PotentialSign::Barrier)};
  for (const auto& well : cases) {
    for (int i = 0; i < 100; ++i) {
      const auto c = dirac_coeffs(uk(rng), well);
      CHECK(std::abs(std::norm(c.b) + std::norm(c.f) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("total reflection at threshold") {
  const auto well = SquareWellSpec::from_strength(1.0);
  CHECK(std::abs(dirac_coeffs(1e-4 / well.w, well).b + 1.0) < 1e-3);
  CHECK_THROWS_AS(dirac_coeffs(0.0, well), ConfigError);
}

TEST_CASE("spinor is continuous at both edges") {
  const auto well = SquareWellSpec::from_strength(1.3, 0.7, 1.5);
  double printed_jump = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double k = 0.05 * i;
    for (double xe : {-well.w, well.w}) {
      const auto a = dirac_stationary(k, xe - 1e-13, well), b = dirac_stationary(k, xe + 1e-13, well);
      CHECK(std::abs(a.first - b.first) < 1e-10);
      CHECK(std::abs(a.second - b.second) < 1e-10);
      const auto pa = dirac_stationary(k, xe - 1e-13, well, CoeffConvention::Printed);
      const auto pb = dirac_stationary(k, xe + 1e-13, well, CoeffConvention::Printed);
      printed_jump = std::max(printed_jump, std::abs(pa.first - pb.first));
    }
  }
  // The printed coefficient set differs by a k-dependent phase and breaks continuity.
  CHECK(printed_jump > 1e-2);
}

TEST_CASE("resting packet has no lower component at its centre") {
  const auto p = GaussianPacketSpec::one_d(-3.0, 0.0, 1.0);
  const auto s = dirac_initial_packet(-3.0, p, 1.0);
  CHECK(std::abs(s.v) < 1e-12 * std::abs(s.u));
}

TEST_CASE("nonrelativistic initial packet is Gaussian") {
  const double m = 100.0, q0 = 1.0, sigma = 2.0, x0 = -5.0;
  const auto p = GaussianPacketSpec::one_d(x0, q0, sigma);
  std::vector<double> xs;
  for (int i = -20; i <= 20; ++i) xs.push_back(x0 + 0.25 * i);
  const auto s = dirac_initial_packet(xs, p, m);
  const double peak = std::sqrt(kPi) / sigma;
  for (const auto& smp : s) {
    const double g = peak * std::exp(-(smp.x - x0) * (smp.x - x0) / (4.0 * sigma * sigma));
    CHECK(std::abs(std::abs(smp.u) - g) < 1e-2 * peak);
  }
}

TEST_CASE("free evolution at t = 0 equals the initial packet") {
  SquareWellSpec free;
  free.mass = 2.0;
  const auto p = GaussianPacketSpec::one_d(-10.0, 1.0, 1.5);
  const std::vector<double> xs = {-14.0, -10.5, -9.0, -6.0};
  const auto a = dirac_evolve(xs, 0.0, p, free);
  const auto b = dirac_initial_packet(xs, p, 2.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(std::abs(a[i].u - b[i].u) < 1e-8 * std::abs(b[i].u));
    CHECK(std::abs(a[i].v - b[i].v) < 1e-8 * std::abs(b[i].v) + 1e-14);
  }
}

TEST_CASE("norm is conserved through the scattering") {
  const auto well = SquareWellSpec::from_strength(1.5);
  const auto p = GaussianPacketSpec::one_d(-15.0, 1.0, 2.0);
  std::vector<double> xs;
  for (int i = -1200; i <= 1200; ++i) xs.push_back(0.1 * i);
  // Compared once the packet has left the potential: the density has kinks at x = +-w.
  const double n0 = spinor_norm(dirac_evolve(xs, 0.0, p, well));
  const double n1 = spinor_norm(dirac_evolve(xs, 60.0, p, well));
  CHECK(n0 > 0.0);
  CHECK(std::isfinite(n0));
  CHECK(std::abs(n1 - n0) < 1e-6 * n0);
}

TEST_CASE("nonrelativistic reduction") { CHECK(dirac_nonrel_error(2500.0, 71) < 1e-2); }

TEST_CASE("heavy narrow packet reflects with a pattern") {
  const double m = 100.0, x0 = -20.0;
  const auto p = GaussianPacketSpec::one_d(x0, 1.0, 2.0);
  SquareWellSpec well;
  well.v0 = 0.005;
  well.mass = m;
  const double v = 1.0 / std::sqrt(1.0 + m * m);
  const double t = 2.0 * std::abs(x0) / v;
  const double span = 3.0 * std::abs(x0) + t / (2.0 * m * 2.0) + 10.0;
  std::vector<double> xs;
  for (int i = 0; i < 800; ++i) xs.push_back(-well.w - 0.01 - span + span * i / 799.0);
  CHECK(count_peaks(reflected_profile(t, xs, p, well)) >= 3);
}

TEST_CASE("massless packet reflects as one undistorted peak") {
  const double x0 = -20.0, t = 60.0, dx = 0.1;
  const auto p = GaussianPacketSpec::one_d(x0, 1.0, 1e6);
  SquareWellSpec b;
  b.v0 = 200.0;
  b.sign = PotentialSign::Barrier;
  b.w = 0.05;
  b.mass = 1e-6;
  std::vector<double> xs;
  for (int i = 0; i < 300; ++i) xs.push_back(-55.0 + dx * i);
  const auto pr = reflected_profile(t, xs, p, b);
  std::size_t top = 0;
  for (std::size_t i = 0; i < pr.size(); ++i) {
    if (pr[i].density > pr[top].density) top = i;
  }
  CHECK(count_peaks(pr) == 1);
  CHECK(std::abs(pr[top].r - (-x0 - t - b.w)) <= dx + 1e-9);
}

TEST_CASE("reflected profile must stay left of the potential") {
  const auto well = SquareWellSpec::from_strength(1.0);
  const auto p = GaussianPacketSpec::one_d(-10.0, 1.0, 1.0);
  CHECK_THROWS_AS(reflected_profile(1.0, {-3.0, 0.0}, p, well), ConfigError);
}

}
