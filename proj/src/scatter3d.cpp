#include "wpd/scatter3d.hpp"

#include <algorithm>
#include <cmath>

#include "wpd/parallel.hpp"
#include "wpd/phaseshift.hpp"
#include "wpd/quadrature.hpp"
#include "wpd/specialfn.hpp"

namespace wpd {

namespace {

constexpr cplx kI{0.0, 1.0};

using CVec3 = std::array<cplx, 3>;

cplx cdot(const CVec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// D = r0 + 2i sigma^2 q0
CVec3 complex_displacement(const GaussianPacketSpec& p) {
  const double s2 = p.sigma * p.sigma;
  CVec3 D;
  for (int i = 0; i < 3; ++i) D[i] = cplx(p.r0[i], 2.0 * s2 * p.q0[i]);
  return D;
}

cplx complex_distance(const GaussianPacketSpec& p) {
  const CVec3 D = complex_displacement(p);
  return std::sqrt(cdot(D, D));
}

cplx cos_argument(const GaussianPacketSpec& p, const Vec3& rhat) {
  const CVec3 D = complex_displacement(p);
  const cplx d = std::sqrt(cdot(D, D));
  return (D[0] * rhat[0] + D[1] * rhat[1] + D[2] * rhat[2]) / d;
}

cplx minus_i_pow(int L) {
  switch (L % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

Vec3 unit(const Vec3& v) {
  const double n = norm(v);
  return {v[0] / n, v[1] / n, v[2] / n};
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("t", "time must be non-negative and finite");
}

}  // namespace

SWaveClosedFormParams SWaveClosedFormParams::from(const GaussianPacketSpec& packet, const SquareWellSpec& well) {
  SWaveClosedFormParams p;
  p.d = complex_distance(packet);
  const cplx xi = interior_momentum(0.0, well) * well.w;
  // x cot x - 1 and w(1 - tan x / x); on an imaginary axis these become the coth/tanh forms.
  double xcot = 1.0, tan_over_x = 1.0;
  if (std::abs(xi) > 1e-8) {
    if (xi.imag() > 0.0) {
      const double y = xi.imag();
      xcot = y / std::tanh(y);
      tan_over_x = std::tanh(y) / y;
    } else {
      const double x = xi.real();
      xcot = x * std::cos(x) / std::sin(x);
      tan_over_x = std::tan(x) / x;
    }
  }
  p.z0 = xcot - 1.0;
  if (std::abs(p.z0 + 1.0) < 1e-10) throw NumericalError("half-bound-state resonance: z0 + 1 = 0");
  p.scattering_length = well.v0 == 0.0 ? 0.0 : well.w * (1.0 - tan_over_x);
  p.lambda = std::exp(p.z0 / (p.d * (p.z0 + 1.0)));
  return p;
}

cplx spreading_width(double sigma, double t, double mass) { return {sigma * sigma, t / (2.0 * mass)}; }

cplx psi_in(const Vec3& r, double t, const GaussianPacketSpec& packet, double mass) {
  check_time(t);
  const cplx a = spreading_width(packet.sigma, t, mass);
  const double s2 = packet.sigma * packet.sigma;
  cplx bb = 0.0;
  for (int i = 0; i < 3; ++i) {
    const cplx b(2.0 * s2 * packet.q0[i], r[i] - packet.r0[i]);
    bb += b * b;
  }
  const double q2 = dot(packet.q0, packet.q0);
  return std::pow(kPi / a, 1.5) * std::exp(bb / (4.0 * a) - s2 * q2);
}

cplx angular_factor(int L, double k, const GaussianPacketSpec& packet, const Vec3& rhat) {
  const cplx d = complex_distance(packet);
  if (std::abs(d) < 1e-300) return L == 0 ? cplx(4.0 * kPi) : cplx(0.0);
  return 4.0 * kPi * minus_i_pow(L) * sph_bessel_j(L, k * d) * legendre_p(L, cos_argument(packet, rhat));
}

std::vector<cplx> psi_scatt_quadrature_profile(const std::vector<double>& rs, const Vec3& rhat, double t,
                                               const GaussianPacketSpec& packet, const SquareWellSpec& well,
                                               const QuadratureSpec& quad) {
  check_time(t);
  validate(packet);
  validate(well);
  for (double r : rs) {
    if (!(r > well.w)) throw ConfigError("r", "scattered wave is evaluated outside the well (r > w)");
  }
  if (quad.l_max < 0) throw ConfigError("lmax", "l_max must be non-negative");
  std::vector<cplx> out(rs.size(), cplx(0.0));
  if (well.v0 == 0.0 || rs.empty()) return out;

  const double sigma = packet.sigma;
  const double s2 = sigma * sigma;
  const double q0 = packet.q0_magnitude();
  const double k_lo = quad.k_min >= 0.0 ? quad.k_min : std::max(0.0, q0 - 8.0 / sigma);
  const double k_hi = quad.k_max > 0.0 ? quad.k_max : q0 + 8.0 / sigma;
  if (!(k_hi > k_lo)) throw ConfigError("k_grid", "quadrature needs k_max > k_min");

  const cplx d = complex_distance(packet);
  const cplx u = std::abs(d) < 1e-300 ? cplx(1.0) : cos_argument(packet, rhat);
  std::vector<cplx> legendre(static_cast<std::size_t>(quad.l_max) + 1);
  for (int L = 0; L <= quad.l_max; ++L) legendre[static_cast<std::size_t>(L)] = legendre_p(L, u);
  const double inv_2m = 1.0 / (2.0 * well.mass);

  // k^2 * (1/k) * sum_L (2L+1) e^{i delta} sin(delta) I_L * exp(-sigma^2(k^2+q0^2) - i k^2 t/2m)
  auto coeff = [&](double k) -> cplx {
    if (k <= 0.0) return 0.0;
    const cplx kd = k * d;
    const double grow = std::abs(kd.imag());
    cplx sum = 0.0;
    for (int L = 0; L <= quad.l_max; ++L) {
      const double delta = delta_exact(L, k, well);
      const cplx amp = std::polar(std::sin(delta), delta);
      const cplx jl = std::abs(d) < 1e-300 ? cplx(L == 0 ? 1.0 : 0.0) : sph_bessel_j_scaled(L, kd);
      sum += (2.0 * L + 1.0) * amp * minus_i_pow(L) * jl * legendre[static_cast<std::size_t>(L)];
    }
    const double env = std::exp(grow - s2 * (k * k + q0 * q0));
    return 4.0 * kPi * k * env * sum * std::polar(1.0, -k * k * t * inv_2m);
  };

  double rate = 0.0;
  for (double r : rs) {
    rate = std::max(rate, std::abs(r - k_lo * t / well.mass) + std::abs(d));
    rate = std::max(rate, std::abs(r - k_hi * t / well.mass) + std::abs(d));
  }
  const std::size_t n0 = quad.n > 0 ? quad.n : intervals_for_rate(k_hi - k_lo, rate);

  auto eval = [&](const std::vector<double>& ks, const std::vector<double>& ws) {
    std::vector<cplx> cs(ks.size());
    parallel_for(ks.size(), [&](std::size_t j) { cs[j] = ws[j] * coeff(ks[j]); });
    NodeSums out{std::vector<cplx>(rs.size()), std::vector<double>(rs.size())};
    parallel_for(rs.size(), [&](std::size_t i) {
      cplx s = 0.0;
      double a = 0.0;
      for (std::size_t j = 0; j < ks.size(); ++j) {
        const cplx v = cs[j] * std::polar(1.0, ks[j] * rs[i]);
        s += v;
        a += std::abs(v);
      }
      out.sums[i] = s;
      out.l1[i] = a;
    });
    return out;
  };
  auto vals = simpson_doubling(k_lo, k_hi, n0, quad.max_doublings, quad.tolerance, rs.size(), eval);
  for (std::size_t i = 0; i < rs.size(); ++i) out[i] = vals[i] / rs[i];
  return out;
}

cplx psi_scatt_quadrature(double r, const Vec3& rhat, double t, const GaussianPacketSpec& packet,
                          const SquareWellSpec& well, const QuadratureSpec& quad) {
  return psi_scatt_quadrature_profile({r}, rhat, t, packet, well, quad).front();
}

cplx psi_scatt_closed(double r, double t, const GaussianPacketSpec& packet, const SquareWellSpec& well) {
  check_time(t);
  if (!(r > 0.0)) throw ConfigError("r", "radius must be positive");
  if (well.v0 == 0.0) return 0.0;
  const auto p = SWaveClosedFormParams::from(packet, well);
  const cplx a = spreading_width(packet.sigma, t, well.mass);
  const cplx sa = std::sqrt(a);
  const cplx d = p.d;
  if (std::abs(d) < 1e-12 * well.w) throw NumericalError("closed form needs a nonzero packet displacement d");
  const double rho = r - p.scattering_length;
  const double q0 = packet.q0_magnitude();
  const cplx shift = -packet.sigma * packet.sigma * q0 * q0;
  const cplx zp = (rho + d) / (2.0 * sa);
  const cplx zm = (rho - d) / (2.0 * sa);
  const cplx bracket = (rho + d) * faddeeva_w_shifted(zp, shift) - (rho - d) * faddeeva_w_shifted(zm, shift);
  return -std::pow(kPi, 1.5) * p.scattering_length / (2.0 * r * d * std::pow(a, 1.5)) * bracket;
}

cplx psi_scatt_printed(double r, double t, const GaussianPacketSpec& packet, const SquareWellSpec& well) {
  check_time(t);
  const auto p = SWaveClosedFormParams::from(packet, well);
  const cplx a = spreading_width(packet.sigma, t, well.mass);
  const cplx y2 = -(r + p.d) * (r + p.d) / (4.0 * a) + p.lambda;
  return -std::pow(kPi / a, 1.5) * ((r + p.d) / r) * std::exp(y2);
}

cplx psi_backward_printed(double r, double t, const GaussianPacketSpec& packet, const SquareWellSpec& well) {
  if (!(t > 0.0)) throw ConfigError("t", "the printed backward form needs t > 0");
  const auto p = SWaveClosedFormParams::from(packet, well);
  const double m = well.mass;
  const double s2 = packet.sigma * packet.sigma;
  const double q0 = packet.q0_magnitude();
  const double r0 = norm(packet.r0);
  const cplx a = spreading_width(packet.sigma, t, m);
  const cplx arg = m * r / t * cplx(r0, 2.0 * q0 * s2) + p.lambda / 2.0;
  const cplx x = -q0 * q0 * s2 - r * r * m * m / (t * t) + kI * t / (2.0 * m) * r * r + p.lambda / 2.0;
  return 2.0 * kI * std::pow(kPi / a, 1.5) * std::sin(arg) * std::exp(x);
}

Vec3 direction_vector(const GaussianPacketSpec& packet, Direction dir) {
  Vec3 back{0.0, 0.0, 1.0};
  if (norm(packet.q0) > 0.0) {
    back = unit(-1.0 * packet.q0);
  } else if (norm(packet.r0) > 0.0) {
    back = unit(packet.r0);
  }
  return dir == Direction::Backward ? back : -1.0 * back;
}

WaveSample psi_total(double r, Direction dir, double t, const GaussianPacketSpec& packet,
                     const SquareWellSpec& well) {
  WaveSample s;
  s.r = r;
  s.t = t;
  s.position = r * direction_vector(packet, dir);
  s.value = psi_in(s.position, t, packet, well.mass) + psi_scatt_closed(r, t, packet, well);
  s.path = PathTag::Total;
  return s;
}

double angular_density(double r, double theta, double t, const GaussianPacketSpec& packet,
                       const SquareWellSpec& well) {
  const Vec3 f = direction_vector(packet, Direction::Forward);
  // Any unit vector orthogonal to the axis.
  const Vec3 trial = std::abs(f[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  const Vec3 e = unit(trial - dot(trial, f) * f);
  const Vec3 pos = r * (std::cos(theta) * f + std::sin(theta) * e);
  return std::norm(psi_in(pos, t, packet, well.mass) + psi_scatt_closed(r, t, packet, well));
}

std::vector<ProfilePoint> density_profile(const std::vector<double>& rs, Direction dir, double t,
                                          const GaussianPacketSpec& packet, const SquareWellSpec& well) {
  std::vector<ProfilePoint> out(rs.size());
  parallel_for(rs.size(), [&](std::size_t i) {
    out[i].r = rs[i];
    out[i].density = std::norm(psi_total(rs[i], dir, t, packet, well).value);
  });
  return out;
}

int count_peaks(const std::vector<double>& v) {
  if (v.size() < 3) throw ConfigError("profile", "peak counting needs at least 3 samples");
  const double floor = 1e-3 * *std::max_element(v.begin(), v.end());
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] > floor) ++peaks;
  }
  return peaks;
}

int count_peaks(const std::vector<ProfilePoint>& profile) {
  std::vector<double> v(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) v[i] = profile[i].density;
  return count_peaks(v);
}

double fringe_visibility(const std::vector<ProfilePoint>& profile, double floor) {
  if (profile.size() < 3) throw ConfigError("profile", "visibility needs at least 3 samples");
  double top = 0.0;
  for (const auto& p : profile) top = std::max(top, p.density);
  struct Extremum {
    double value;
    bool is_max;
  };
  std::vector<Extremum> ext;
  for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
    const double a = profile[i - 1].density, b = profile[i].density, c = profile[i + 1].density;
    if (b > a && b >= c) ext.push_back({b, true});
    if (b < a && b <= c) ext.push_back({b, false});
  }
  double vis = 0.0;
  for (std::size_t i = 1; i < ext.size(); ++i) {
    if (ext[i].is_max == ext[i - 1].is_max) continue;
    if (ext[i].value <= floor * top || ext[i - 1].value <= floor * top) continue;
    const double hi = std::max(ext[i].value, ext[i - 1].value);
    const double lo = std::min(ext[i].value, ext[i - 1].value);
    vis = std::max(vis, (hi - lo) / (hi + lo));
  }
  return vis;
}

std::vector<double> pattern_r_grid(const GaussianPacketSpec& packet, const SquareWellSpec& well, double t,
                                   std::size_t n_points) {
  if (n_points < 64) throw ConfigError("n_points", "profiles need at least 64 points");
  const double m = well.mass;
  const double r_min = 2.0 * well.w;
  const double r_max = 2.0 * (norm(packet.r0) + packet.q0_magnitude() * t / m) + 3.0 * t / (2.0 * m * packet.sigma);
  std::vector<double> rs(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    rs[i] = r_min + (r_max - r_min) * static_cast<double>(i) / static_cast<double>(n_points - 1);
  }
  return rs;
}

int backward_peak_count(const GaussianPacketSpec& packet, const SquareWellSpec& well, double t,
                        std::size_t n_points) {
  return count_peaks(density_profile(pattern_r_grid(packet, well, t, n_points), Direction::Backward, t, packet, well));
}

double PatternProtocol::sigma_unit() const { return std::sqrt(w / q0); }

GaussianPacketSpec PatternProtocol::packet(double sigma_multiple) const {
  return GaussianPacketSpec::on_axis(distance, q0, sigma_multiple * sigma_unit());
}

SquareWellSpec PatternProtocol::well() const { return SquareWellSpec::from_strength(strength, w, mass, sign); }

std::vector<PatternRow> run_pattern(const PatternProtocol& protocol, const std::vector<double>& sigma_multiples) {
  std::vector<PatternRow> rows;
  const auto wl = protocol.well();
  for (double s : sigma_multiples) {
    const auto pk = protocol.packet(s);
    PatternRow row;
    row.sigma = pk.sigma;
    row.n_peaks = backward_peak_count(pk, wl, protocol.t, protocol.n_points);
    row.blurred = blur_threshold(pk, wl) == BlurState::Blurred;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wpd
