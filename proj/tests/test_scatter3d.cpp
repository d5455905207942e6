#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wpd/scatter3d.hpp"
#include "wpd/validation.hpp"

using namespace wpd;

namespace {

std::vector<double> peak_positions(const std::vector<ProfilePoint>& p) {
  double top = 0.0;
  for (const auto& s : p) top = std::max(top, s.density);
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    if (p[i].density > p[i - 1].density && p[i].density > p[i + 1].density && p[i].density > 1e-3 * top) {
      out.push_back(p[i].r);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("scatter3d") {

TEST_CASE("free packet at t = 0 and r = r0") {
  const auto p = GaussianPacketSpec::on_axis(7.0, 1.3, 0.8);
  const double ref = std::pow(kPi / (0.8 * 0.8), 1.5);
  CHECK(std::abs(psi_in(p.r0, 0.0, p, 1.0) - ref) < 1e-13 * ref);
}

TEST_CASE("resting packet spreads with the kernel") {
  auto p = GaussianPacketSpec::on_axis(3.0, 0.0, 1.2);
  for (double t : {0.5, 10.0, 300.0}) {
    const double ref = std::pow(kPi, 1.5) / std::pow(std::abs(spreading_width(1.2, t, 2.0)), 1.5);
    CHECK(std::abs(psi_in(p.r0, t, p, 2.0)) == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("free packet matches separable k-quadrature") { CHECK(free_packet_oracle_error(25, 99) < 1e-8); }

TEST_CASE("no potential, no scattered wave") {
  SquareWellSpec free;
  const auto p = GaussianPacketSpec::on_axis(5.0, 1.0, 1.0);
  CHECK(std::abs(psi_scatt_closed(4.0, 50.0, p, free)) == 0.0);
  CHECK(std::abs(psi_scatt_quadrature(4.0, {0.0, 0.0, 1.0}, 50.0, p, free)) == 0.0);
}

TEST_CASE("complex displacement") {
  const auto p = GaussianPacketSpec::on_axis(6.0, 0.0, 1.0);
  const auto c = SWaveClosedFormParams::from(p, SquareWellSpec::from_strength(1.0));
  CHECK(std::abs(c.d - 6.0) < 1e-14);
  const auto q = GaussianPacketSpec::on_axis(6.0, 2.0, 0.5);
  // D = r0 + 2 i sigma^2 q0 is parallel to z, so d = 6 - 2 i sigma^2 q0.
  const auto cq = SWaveClosedFormParams::from(q, SquareWellSpec::from_strength(1.0));
  CHECK(std::abs(cq.d - cplx(6.0, -1.0)) < 1e-14);
  CHECK(cq.scattering_length == doctest::Approx(1.0 - std::tan(1.0)));
}

TEST_CASE("closed form tracks the partial-wave quadrature at late times") {
  CHECK(closed_vs_quadrature_l2(2.0, 20.0, 30) < 5e-2);
}

TEST_CASE("s-wave dominance") {
  const auto p = GaussianPacketSpec::on_axis(5.0, 1.0, 1.0);
  const auto well = SquareWellSpec::from_strength(1.0);
  std::vector<double> rs;
  for (int i = 0; i < 20; ++i) rs.push_back(2.0 + i);
  QuadratureSpec q0, q4;
  q4.l_max = 4;
  const auto a = psi_scatt_quadrature_profile(rs, {0.0, 0.0, 1.0}, 200.0, p, well, q0);
  const auto b = psi_scatt_quadrature_profile(rs, {0.0, 0.0, 1.0}, 200.0, p, well, q4);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(a[i]);
  }
  CHECK(std::sqrt(num / den) < 1e-2);
}

TEST_CASE("quadrature is stable under grid doubling") {
  const auto p = GaussianPacketSpec::on_axis(5.0, 1.0, 1.0);
  const auto well = SquareWellSpec::from_strength(1.0);
  QuadratureSpec a;
  a.tolerance = 1e-8;
  QuadratureSpec b = a;
  b.n = 8192;
  const cplx va = psi_scatt_quadrature(6.0, {0.0, 0.0, 1.0}, 200.0, p, well, a);
  const cplx vb = psi_scatt_quadrature(6.0, {0.0, 0.0, 1.0}, 200.0, p, well, b);
  CHECK(std::abs(va - vb) < 1e-6 * std::abs(vb));
}

TEST_CASE("peak counter on constructed profiles") {
  std::vector<double> mono, sq;
  for (int i = 0; i < 200; ++i) {
    mono.push_back(std::exp(-0.01 * i));
    sq.push_back(std::pow(std::sin(4.0 * kPi * i / 199.0), 2));
  }
  CHECK(count_peaks(mono) == 0);
  CHECK(count_peaks(sq) == 4);
  CHECK_THROWS(count_peaks(std::vector<double>{1.0, 2.0}));
}

TEST_CASE("narrow packets diffract, wide ones do not") {
  PatternProtocol proto;
  const auto rows = run_pattern(proto, {0.1, 0.3, 1.0, 3.0, 10.0});
  CHECK(rows.front().n_peaks >= 3);
  CHECK(rows.back().n_peaks == 1);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].n_peaks <= rows[i - 1].n_peaks);
  CHECK_FALSE(rows.front().blurred);
  CHECK(rows.back().blurred);
}

TEST_CASE("forward profile has no fringes") {
  PatternProtocol proto;
  const auto pk = proto.packet(0.1);
  const auto rs = pattern_r_grid(pk, proto.well(), proto.t, 20000);
  const auto fwd = density_profile(rs, Direction::Forward, proto.t, pk, proto.well());
  CHECK(fringe_visibility(fwd) < 0.05);
}

TEST_CASE("a barrier diffracts as well") {
  PatternProtocol proto;
  proto.sign = PotentialSign::Barrier;
  const auto rows = run_pattern(proto, {0.1});
  CHECK(rows.front().n_peaks >= 3);
}

TEST_CASE("backward peaks do not depend on the impact parameter") {
  PatternProtocol proto;
  const auto pk = proto.packet(0.1);
  auto shifted = pk;
  shifted.r0[0] += 0.1 * norm(pk.r0);
  const auto well = proto.well();
  const auto rs = pattern_r_grid(pk, well, proto.t, 20000);
  const auto a = peak_positions(density_profile(rs, Direction::Backward, proto.t, pk, well));
  const auto b = peak_positions(density_profile(rs, Direction::Backward, proto.t, shifted, well));
  REQUIRE(a.size() >= 3);
  REQUIRE(b.size() >= 3);
  // The three outermost fringes, the ones that carry the pattern.
  for (std::size_t i = 1; i <= 3; ++i) {
    const double pa = a[a.size() - i], pb = b[b.size() - i];
    CHECK(std::abs(pa - pb) < 0.05 * pa);
  }
}

TEST_CASE("angular density composes the axis values") {
  const auto p = GaussianPacketSpec::on_axis(20.0, 1.0, 0.5);
  const auto well = SquareWellSpec::from_strength(1.0);
  for (double r : {5.0, 30.0}) {
    CHECK(angular_density(r, kPi, 100.0, p, well) ==
          doctest::Approx(std::norm(psi_total(r, Direction::Backward, 100.0, p, well).value)).epsilon(1e-12));
    CHECK(angular_density(r, 0.0, 100.0, p, well) ==
          doctest::Approx(std::norm(psi_total(r, Direction::Forward, 100.0, p, well).value)).epsilon(1e-12));
  }
  // Solid-angle integral at fixed radius: finite and positive.
  double s = 0.0;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    const double th = kPi * i / n;
    s += (i == 0 || i == n ? 0.5 : 1.0) * angular_density(40.0, th, 100.0, p, well) * std::sin(th);
  }
  s *= 2.0 * kPi * kPi / n * 40.0 * 40.0;
  CHECK(std::isfinite(s));
  CHECK(s > 0.0);
}

TEST_CASE("printed forms are evaluated but not normative") {
  const auto p = GaussianPacketSpec::on_axis(5.0, 1.0, 1.0);
  const auto well = SquareWellSpec::from_strength(1.0);
  CHECK(std::isfinite(std::abs(psi_scatt_printed(10.0, 200.0, p, well))));
  CHECK(std::isfinite(std::abs(psi_backward_printed(10.0, 200.0, p, well))));
}

}
