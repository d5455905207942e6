#include "wpd/phaseshift.hpp"

#include <cmath>
#include <limits>

#include "wpd/parallel.hpp"
#include "wpd/specialfn.hpp"

namespace wpd {

namespace {

void check_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("k", "momentum must be positive and finite");
}

// Folds an angle into (-pi/2, pi/2].
double fold_half(double a) {
  while (a > kPi / 2) a -= kPi;
  while (a <= -kPi / 2) a += kPi;
  return a;
}

double delta0_closed(double k, const SquareWellSpec& well) {
  const cplx kp = interior_momentum(k, well);
  const double w = well.w;
  double branch = 0.0;
  if (std::abs(kp) < 1e-12 * std::max(1.0, k)) {
    branch = std::atan(k * w);
  } else if (std::abs(kp.imag()) > std::abs(kp.real())) {
    const double kappa = kp.imag();
    branch = std::atan(k * std::tanh(kappa * w) / kappa);
  } else {
    const double q = kp.real();
    branch = fold_half(std::atan2(k * std::sin(q * w), q * std::cos(q * w)));
  }
  return -k * w + branch;
}

}  // namespace

cplx interior_momentum(double k, const SquareWellSpec& well) {
  if (!(k >= 0.0)) throw ConfigError("k", "momentum must be non-negative");
  const double k2 = k * k - 2.0 * well.mass * well.signed_potential();
  if (k2 >= 0.0) return {std::sqrt(k2), 0.0};
  return {0.0, std::sqrt(-k2)};
}

double delta_exact(int l, double k, const SquareWellSpec& well) {
  check_k(k);
  validate(well);
  if (l < 0) throw ConfigError("l", "angular momentum must be non-negative");
  if (well.v0 == 0.0) return 0.0;
  if (l == 0) return delta0_closed(k, well);

  const double x = k * well.w;
  const cplx kp = interior_momentum(k, well);
  const cplx xi = kp * well.w;
  const double j = sph_bessel_j(l, x), jp = sph_bessel_jp(l, cplx(x)).real();
  const double y = sph_bessel_y(l, x), yp = sph_bessel_yp(l, x);

  double num = 0.0, den = 0.0, scale = 0.0;
  if (std::abs(xi) < 1e-3) {
    // Near k' = 0 use the finite log-derivative, z_l -> l.
    const double z = std::abs(xi) == 0.0 ? static_cast<double>(l) : log_deriv_z(l, xi).real();
    num = x * jp - z * j;
    den = x * yp - z * y;
    scale = std::abs(x * jp) + std::abs(z * j) + std::abs(x * yp) + std::abs(z * y);
  } else {
    // Products avoid dividing by j_l(k'w), which vanishes at interior resonances.
    // Interior factors share a phase (i^l when k' is imaginary); strip it.
    const cplx J = sph_bessel_j_scaled(l, xi);
    const cplx Jp = xi * (static_cast<double>(l) * sph_bessel_j_scaled(l - 1, xi) - (l + 1.0) * sph_bessel_j_scaled(l + 1, xi)) /
                    (2.0 * l + 1.0);
    const cplx ref = std::abs(J) >= std::abs(Jp) ? J : Jp;
    const cplx phase = std::conj(ref) / std::abs(ref);
    const double Jr = (J * phase).real(), Jpr = (Jp * phase).real();
    num = x * jp * Jr - Jpr * j;
    den = x * yp * Jr - Jpr * y;
    scale = std::abs(x * jp * Jr) + std::abs(Jpr * j) + std::abs(x * yp * Jr) + std::abs(Jpr * y);
  }
  if (std::hypot(num, den) < 1e-14 * scale || !std::isfinite(num) || !std::isfinite(den)) {
    throw NumericalError("resonant matching: degenerate interior/exterior match at k = " + std::to_string(k));
  }
  return fold_half(std::atan2(num, den));
}

double delta_lowk(int l, double k, const SquareWellSpec& well) {
  check_k(k);
  validate(well);
  if (l < 0) throw ConfigError("l", "angular momentum must be non-negative");
  if (well.v0 == 0.0) return 0.0;
  const cplx xi = interior_momentum(k, well) * well.w;
  const double z = std::abs(xi) < 1e-300 ? static_cast<double>(l) : log_deriv_z(l, xi).real();
  const double den = z + l + 1.0;
  if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(z))) {
    throw NumericalError("zero-energy resonance: z_l + l + 1 = 0 (half-bound state)");
  }
  const double kw = k * well.w;
  double prefactor = 0.0;
  if (l <= 5) {
    double dfact = 1.0;  // (2l-1)!! (2l+1)!!
    for (int n = 3; n <= 2 * l + 1; n += 2) dfact *= n;
    for (int n = 3; n <= 2 * l - 1; n += 2) dfact *= n;
    prefactor = std::pow(kw, 2 * l + 1) / dfact;
  } else {
    prefactor = std::exp((2.0 * l + 1.0) * std::log(kw) - log_double_factorial_odd(l) -
                         log_double_factorial_odd(l - 1));
  }
  return std::atan(-prefactor * (z - l) / den);
}

int count_bound_states_s(const SquareWellSpec& well) {
  validate(well);
  if (well.sign == PotentialSign::Barrier || well.v0 == 0.0) return 0;
  const double k0 = std::sqrt(2.0 * well.mass * well.v0);
  const double w = well.w;
  // Interior nodes of u(r) = sin(k0 r) by sampling; exact zeros are skipped.
  const std::size_t n = std::max<std::size_t>(2000, static_cast<std::size_t>(100.0 * k0 * w));
  int nodes = 0;
  int last_sign = 1;  // u > 0 just right of the origin
  for (std::size_t i = 1; i < n; ++i) {
    const double u = std::sin(k0 * w * static_cast<double>(i) / static_cast<double>(n));
    if (u == 0.0) continue;
    const int s = u > 0.0 ? 1 : -1;
    if (s != last_sign) ++nodes;
    last_sign = s;
  }
  // Exterior zero-energy solution is linear: u(w) + u'(w) (r - w).
  const double uw = std::sin(k0 * w);
  const double upw = k0 * std::cos(k0 * w);
  if (std::abs(uw) <= 1e-14) {
    ++nodes;
  } else {
    const int s = uw > 0.0 ? 1 : -1;
    if (s != last_sign) ++nodes;  // sign flipped between the last sample and w
    if (uw * upw < 0.0) ++nodes;
  }
  return nodes;
}

std::vector<double> geometric_grid(double k_min, double k_max, std::size_t n) {
  if (!(k_min > 0.0) || !(k_max > k_min) || n < 2) {
    throw ConfigError("k_grid", "geometric grid needs 0 < k_min < k_max and n >= 2");
  }
  std::vector<double> ks(n);
  const double r = std::log(k_max / k_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) ks[i] = k_min * std::exp(r * static_cast<double>(i));
  ks.back() = k_max;
  return ks;
}

PhaseShiftTable tabulate_phase_shifts(int l, const SquareWellSpec& well, const std::vector<double>& ks) {
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (!(ks[i] > ks[i - 1])) throw ConfigError("k_grid", "k grid must be strictly increasing");
  }
  PhaseShiftTable table;
  table.l = l;
  table.well = well;
  table.samples.resize(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    auto& s = table.samples[i];
    s.k = ks[i];
    s.delta = delta_exact(l, ks[i], well);
    try {
      s.z = log_deriv_z(l, interior_momentum(ks[i], well) * well.w).real();
    } catch (const NumericalError&) {
      s.z = std::numeric_limits<double>::quiet_NaN();
    }
  });
  // Unwrap sequentially in k order.
  for (std::size_t i = 1; i < table.samples.size(); ++i) {
    const double prev = table.samples[i - 1].delta;
    double& cur = table.samples[i].delta;
    cur += kPi * std::round((prev - cur) / kPi);
  }
  return table;
}

LevinsonResult levinson_check(const SquareWellSpec& well, const LevinsonOptions& opts) {
  validate(well);
  const double w = well.w;
  const double strength = well.strength();
  const double k_max_w = opts.k_max_w > 0.0 ? opts.k_max_w : std::max(200.0, 1000.0 * strength * strength);
  if (!(opts.k_min_w > 0.0) || !(k_max_w > opts.k_min_w)) {
    throw ConfigError("k_max", "Levinson check needs 0 < k_min < k_max");
  }
  // Geometric up to kw = 1, then steps of 0.25 in kw (tan(k'w) has a pole every pi).
  std::vector<double> ks;
  const double knee = std::min(1.0, k_max_w);
  if (knee > opts.k_min_w) {
    ks = geometric_grid(opts.k_min_w / w, knee / w, 4000);
  } else {
    ks.push_back(opts.k_min_w / w);
  }
  const double step = 0.25 / w;
  for (double k = ks.back() + step; k < k_max_w / w; k += step) ks.push_back(k);
  if (ks.back() < k_max_w / w) ks.push_back(k_max_w / w);

  const auto table = tabulate_phase_shifts(0, well, ks);
  LevinsonResult r;
  r.lhs = table.samples.front().delta - table.samples.back().delta;
  r.bound_states = count_bound_states_s(well);
  r.rhs = kPi * r.bound_states;
  r.pass = std::abs(r.lhs - r.rhs) < opts.tolerance;
  return r;
}

}  // namespace wpd
