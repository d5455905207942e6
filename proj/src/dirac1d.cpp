#include "wpd/dirac1d.hpp"

#include <algorithm>
#include <cmath>

#include "wpd/parallel.hpp"
#include "wpd/quadrature.hpp"

namespace wpd {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx expi(cplx z) { return std::exp(kI * z); }

struct KRange {
  double lo, hi;
};

KRange resolve_range(const GaussianPacketSpec& packet, double mass, const QuadratureSpec& quad) {
  if (quad.explicit_range) {
    if (!(quad.k_max > quad.k_min)) throw ConfigError("k_grid", "quadrature needs k_max > k_min");
    return {quad.k_min, quad.k_max};
  }
  const auto [lo, hi] = dirac_k_range(packet.q0x(), mass, packet.sigma);
  return {lo, hi};
}

// Per-k data shared by every x on a node set.
struct Node {
  double k = 0.0;
  double e = 0.0;
  cplx amp;  // quadrature weight * packet weight * e^{-i k x0 - i E t}
  DiracCoeffs c;
  bool zero = false;
};

}  // namespace

double effective_mass(const SquareWellSpec& well) {
  return well.sign == PotentialSign::Well ? well.mass - well.v0 : well.mass + well.v0;
}

DiracCoeffs dirac_coeffs(double k, const SquareWellSpec& well, CoeffConvention conv) {
  validate(well);
  if (k == 0.0 || !std::isfinite(k)) throw ConfigError("k", "Dirac coefficients need finite k != 0");
  const double m = well.mass;
  const double ms = effective_mass(well);
  const double w = well.w;
  DiracCoeffs out;
  out.m_star = ms;
  out.energy = std::sqrt(k * k + m * m);
  const double E = out.energy;
  // E^2 - m*^2 without cancellation when m* is close to m.
  const double kp2 = k * k + (m - ms) * (m + ms);
  out.k_prime = kp2 >= 0.0 ? cplx(std::sqrt(kp2), 0.0) : cplx(0.0, std::sqrt(-kp2));
  if (std::abs(E + ms) < 1e-14 * (E + std::abs(ms))) {
    throw NumericalError("transmission resonance degenerate: E + m* = 0");
  }
  const cplx g = out.k_prime * (E + m) / (k * (E + ms));
  out.g = g;

  // Everything is divided by e4^2 so evanescent interiors cannot overflow; q = e^{2ik'w}.
  const cplx e2 = expi(-k * w);
  const cplx e3 = expi(out.k_prime * w);
  const cplx q = e3 * e3;
  const cplx dp = q * q * (1.0 - g) * (1.0 - g) - (1.0 + g) * (1.0 + g);
  const double scale = std::norm(q) * std::norm(1.0 - g) + std::norm(1.0 + g);
  if (!(std::abs(dp) > 1e-14 * scale)) throw NumericalError("transmission resonance degenerate: Delta = 0");
  out.delta_det = dp / q;  // Delta = e4^2 Delta', e4^2 = 1/q
  out.b = e2 * e2 * (1.0 - g * g) * (q * q - 1.0) / dp;
  out.c = -2.0 * e2 * e3 * (1.0 + g) / dp;
  out.d = 2.0 * e2 * e3 * q * (1.0 - g) / dp;
  out.f = -4.0 * g * e2 * e2 * q / dp;
  if (conv == CoeffConvention::Printed) {
    const cplx e1sq = expi(2.0 * k * w);
    out.b *= e1sq;
    out.c *= e1sq;
    out.d *= e1sq;
    out.f *= e1sq;
  }
  return out;
}

namespace {

std::pair<cplx, cplx> stationary_from(const DiracCoeffs& c, double k, double x, const SquareWellSpec& well) {
  const double m = well.mass;
  const double w = well.w;
  const double E = c.energy;
  if (x < -w) {
    const cplx in = expi(k * x), out = c.b * expi(-k * x);
    return {in + out, kI * k / (E + m) * (in - out)};
  }
  if (x > w) {
    const cplx tr = c.f * expi(k * x);
    return {tr, kI * k / (E + m) * tr};
  }
  const cplx a = c.c * expi(c.k_prime * x), b = c.d * expi(-c.k_prime * x);
  return {a + b, kI * c.k_prime / (E + c.m_star) * (a - b)};
}

}  // namespace

std::pair<cplx, cplx> dirac_stationary(double k, double x, const SquareWellSpec& well, CoeffConvention conv) {
  if (k == 0.0) return {0.0, 0.0};
  return stationary_from(dirac_coeffs(k, well, conv), k, x, well);
}

double dirac_weight_exponent(double k, double q0, double mass, double sigma) {
  const double half = 0.5 * (std::asinh(k / mass) - std::asinh(q0 / mass));
  const double s = std::sinh(half);
  return 4.0 * sigma * sigma * mass * mass * s * s;
}

std::pair<double, double> dirac_k_range(double q0, double mass, double sigma, double cut) {
  if (!(cut > 0.0)) throw ConfigError("cut", "weight cut must be positive");
  const double eta0 = std::asinh(q0 / mass);
  const double spread = 2.0 * std::asinh(std::sqrt(cut) / (2.0 * sigma * mass));
  return {mass * std::sinh(eta0 - spread), mass * std::sinh(eta0 + spread)};
}

std::vector<SpinorSample> dirac_initial_packet(const std::vector<double>& xs, const GaussianPacketSpec& packet,
                                               double mass, const QuadratureSpec& quad) {
  validate(packet);
  if (!(mass > 0.0)) throw ConfigError("mass", "mass must be positive");
  const auto range = resolve_range(packet, mass, quad);
  const double x0 = packet.x0();
  const double q0 = packet.q0x();
  double rate = 0.0;
  for (double x : xs) rate = std::max(rate, std::abs(x - x0));
  const std::size_t n0 = quad.n > 0 ? quad.n : intervals_for_rate(range.hi - range.lo, rate + 1.0);
  const std::size_t nx = xs.size();

  auto eval = [&](const std::vector<double>& ks, const std::vector<double>& ws) {
    std::vector<cplx> amp(ks.size()), low(ks.size());
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const double k = ks[j];
      amp[j] = ws[j] * std::exp(-dirac_weight_exponent(k, q0, mass, packet.sigma));
      low[j] = kI * k / (std::sqrt(k * k + mass * mass) + mass);
    }
    NodeSums out{std::vector<cplx>(2 * nx), std::vector<double>(2 * nx, 0.0)};
    parallel_for(nx, [&](std::size_t i) {
      cplx su = 0.0, sv = 0.0;
      double au = 0.0, av = 0.0;
      for (std::size_t j = 0; j < ks.size(); ++j) {
        const cplx u = amp[j] * std::polar(1.0, ks[j] * (xs[i] - x0));
        const cplx v = low[j] * u;
        su += u;
        sv += v;
        au += std::abs(u);
        av += std::abs(v);
      }
      out.sums[2 * i] = su;
      out.sums[2 * i + 1] = sv;
      out.l1[2 * i] = au;
      out.l1[2 * i + 1] = av;
    });
    return out;
  };
  const auto vals = simpson_doubling(range.lo, range.hi, n0, quad.max_doublings, quad.tolerance, 2 * nx, eval);
  std::vector<SpinorSample> res(nx);
  for (std::size_t i = 0; i < nx; ++i) res[i] = {xs[i], 0.0, vals[2 * i], vals[2 * i + 1]};
  return res;
}

SpinorSample dirac_initial_packet(double x, const GaussianPacketSpec& packet, double mass, const QuadratureSpec& quad) {
  return dirac_initial_packet(std::vector<double>{x}, packet, mass, quad).front();
}

std::vector<SpinorSample> dirac_evolve(const std::vector<double>& xs, double t, const GaussianPacketSpec& packet,
                                       const SquareWellSpec& well, const QuadratureSpec& quad, CoeffConvention conv) {
  validate(packet);
  validate(well);
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("t", "time must be non-negative and finite");
  const double m = well.mass;
  const auto range = resolve_range(packet, m, quad);
  const double x0 = packet.x0();
  const double q0 = packet.q0x();
  double rate = 0.0;
  for (double x : xs) rate = std::max(rate, std::abs(x) + std::abs(x0) + t + 2.0 * well.w);
  const std::size_t n0 = quad.n > 0 ? quad.n : intervals_for_rate(range.hi - range.lo, rate + 1.0);
  const std::size_t nx = xs.size();

  auto eval = [&](const std::vector<double>& ks, const std::vector<double>& ws) {
    std::vector<Node> nodes(ks.size());
    parallel_for(ks.size(), [&](std::size_t j) {
      Node& nd = nodes[j];
      nd.k = ks[j];
      nd.e = std::sqrt(nd.k * nd.k + m * m);
      if (nd.k == 0.0) {
        nd.zero = true;
        return;
      }
      nd.c = dirac_coeffs(nd.k, well, conv);
      nd.amp = ws[j] * std::exp(-dirac_weight_exponent(nd.k, q0, m, packet.sigma)) *
               std::polar(1.0, -nd.k * x0 - nd.e * t);
    });
    NodeSums out{std::vector<cplx>(2 * nx), std::vector<double>(2 * nx, 0.0)};
    parallel_for(nx, [&](std::size_t i) {
      cplx su = 0.0, sv = 0.0;
      double au = 0.0, av = 0.0;
      for (const Node& nd : nodes) {
        if (nd.zero) continue;
        const auto [p1, p2] = stationary_from(nd.c, nd.k, xs[i], well);
        const cplx u = nd.amp * p1, v = nd.amp * p2;
        su += u;
        sv += v;
        au += std::abs(u);
        av += std::abs(v);
      }
      out.sums[2 * i] = su;
      out.sums[2 * i + 1] = sv;
      out.l1[2 * i] = au;
      out.l1[2 * i + 1] = av;
    });
    return out;
  };
  const auto vals = simpson_doubling(range.lo, range.hi, n0, quad.max_doublings, quad.tolerance, 2 * nx, eval);
  std::vector<SpinorSample> res(nx);
  for (std::size_t i = 0; i < nx; ++i) res[i] = {xs[i], t, vals[2 * i], vals[2 * i + 1]};
  return res;
}

SpinorSample dirac_evolve(double x, double t, const GaussianPacketSpec& packet, const SquareWellSpec& well,
                          const QuadratureSpec& quad) {
  return dirac_evolve(std::vector<double>{x}, t, packet, well, quad).front();
}

std::vector<ProfilePoint> reflected_profile(double t, const std::vector<double>& xs, const GaussianPacketSpec& packet,
                                            const SquareWellSpec& well, const QuadratureSpec& quad) {
  for (double x : xs) {
    if (!(x < -well.w)) throw ConfigError("x_max", "reflected profile needs every x < -w");
  }
  const auto samples = dirac_evolve(xs, t, packet, well, quad);
  std::vector<ProfilePoint> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) out[i] = {samples[i].x, samples[i].density()};
  return out;
}

double spinor_norm(const std::vector<SpinorSample>& s) {
  if (s.size() < 2) return 0.0;
  const double dx = s[1].x - s[0].x;
  double sum = 0.5 * (s.front().density() + s.back().density());
  for (std::size_t i = 1; i + 1 < s.size(); ++i) sum += s[i].density();
  return sum * dx;
}

}  // namespace wpd
