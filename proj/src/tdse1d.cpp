#include "wpd/tdse1d.hpp"

#include <algorithm>
#include <cmath>

namespace wpd {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr std::size_t kMaxGridPoints = 50'000'000;

}  // namespace

Grid1D Grid1D::with_spacing(double x_min, double x_max, double spacing, double dt) {
  if (!(spacing > 0.0) || !(x_max > x_min)) throw ConfigError("dx", "grid spacing must be positive");
  Grid1D g;
  g.x_min = x_min;
  g.x_max = x_max;
  const double cells = std::round((x_max - x_min) / spacing);
  g.n = cells > 2.0 ? static_cast<std::size_t>(cells) - 1 : 1;
  g.dt = dt;
  return g;
}

void validate(const Grid1D& g) {
  if (!std::isfinite(g.x_min) || !std::isfinite(g.x_max) || !(g.x_max > g.x_min)) {
    throw ConfigError("x_max", "grid needs x_max > x_min");
  }
  if (g.n < 256) throw ConfigError("n_grid", "grid needs at least 256 points");
  if (!(g.dt > 0.0) || !std::isfinite(g.dt)) throw ConfigError("dt", "time step must be positive");
}

FieldState gaussian_state(const Grid1D& grid, const GaussianPacketSpec& packet) {
  validate(packet);
  FieldState s;
  s.values.resize(grid.n);
  const double x0 = packet.x0(), q0 = packet.q0x(), s2 = packet.sigma * packet.sigma;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double y = grid.x(i) - x0;
    s.values[i] = std::exp(cplx(-y * y / (4.0 * s2), q0 * y));
  }
  return s;
}

double discrete_norm(const FieldState& s, const Grid1D& grid) {
  double sum = 0.0;
  for (const auto& v : s.values) sum += std::norm(v);
  return sum * grid.dx();
}

std::vector<double> plate_potential(const Grid1D& grid, const SquareWellSpec& plate, double left) {
  validate(plate);
  std::vector<double> v(grid.n, 0.0);
  const double right = left + plate.w;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    if (x >= left && x <= right) v[i] = plate.signed_potential();
  }
  return v;
}

CrankNicolson::CrankNicolson(const Grid1D& grid, std::vector<double> potential, double mass)
    : grid_(grid), potential_(std::move(potential)), mass_(mass) {
  validate(grid_);
  if (!(mass > 0.0)) throw ConfigError("mass", "mass must be positive");
  if (potential_.size() != grid_.n) throw ConfigError("potential", "potential size must match the grid");
  const double dx = grid_.dx();
  const double kin = 1.0 / (2.0 * mass * dx * dx);
  const double h = 0.5 * grid_.dt;
  off_ = kI * h * (-kin);
  const std::size_t n = grid_.n;
  diag_rhs_.resize(n);
  cprime_.resize(n);
  inv_den_.resize(n);
  cplx prev_c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hd = 2.0 * kin + potential_[i];
    diag_rhs_[i] = 1.0 - kI * h * hd;
    const cplx den = (1.0 + kI * h * hd) - off_ * prev_c;
    inv_den_[i] = 1.0 / den;
    cprime_[i] = off_ * inv_den_[i];
    prev_c = cprime_[i];
  }
}

void CrankNicolson::step(FieldState& s) const {
  auto& psi = s.values;
  const std::size_t n = psi.size();
  // Forward sweep builds the right-hand side on the fly; psi[i-1] is still the old value
  // because it is overwritten only in the back substitution.
  std::vector<cplx>& d = scratch_;
  if (d.size() != n) d.resize(n);
  cplx prev_d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx left = i > 0 ? psi[i - 1] : cplx(0.0);
    const cplx right = i + 1 < n ? psi[i + 1] : cplx(0.0);
    const cplx rhs = diag_rhs_[i] * psi[i] - off_ * (left + right);
    prev_d = (rhs - off_ * prev_d) * inv_den_[i];
    d[i] = prev_d;
  }
  psi[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) psi[i] = d[i] - cprime_[i] * psi[i + 1];
  s.t += grid_.dt;
}

EvolveResult cn_evolve(const FieldState& initial, const Grid1D& grid, const std::vector<double>& potential,
                       double mass, std::size_t n_steps, std::size_t stride, const SnapshotObserver& observer,
                       bool store) {
  if (stride == 0) throw ConfigError("stride", "snapshot stride must be positive");
  if (initial.values.size() != grid.n) throw ConfigError("n_grid", "state size must match the grid");
  const CrankNicolson cn(grid, potential, mass);
  EvolveResult res;
  res.dt_above_heuristic = grid.dt > 0.5 * mass * grid.dx() * grid.dx();
  auto observe = [&](const FieldState& s) {
    double top = 0.0;
    for (const auto& v : s.values) top = std::max(top, std::abs(v));
    const double edge = std::max(std::abs(s.values.front()), std::abs(s.values.back()));
    const double ratio = top > 0.0 ? edge / top : 0.0;
    res.max_edge_ratio = std::max(res.max_edge_ratio, ratio);
    if (ratio > 1e-6) res.boundary_contaminated = true;
    if (observer) observer(s);
    if (store) res.snapshots.push_back(s);
  };
  FieldState s = initial;
  observe(s);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    cn.step(s);
    if (k % stride == 0 || k == n_steps) observe(s);
  }
  return res;
}

double window_probability(const FieldState& s, const Grid1D& grid, double a, double b) {
  if (!(b > a)) throw ConfigError("det_dx", "detector window must have positive width");
  if (a < grid.x_min - 1e-12 * std::abs(grid.x_min) || b > grid.x_max + 1e-12 * std::abs(grid.x_max)) {
    throw ConfigError("det_center", "detector window lies outside the grid");
  }
  const double dx = grid.dx();
  const std::size_t nodes = grid.n + 2;  // including the two Dirichlet ends
  auto rho = [&](std::size_t j) { return j == 0 || j == nodes - 1 ? 0.0 : std::norm(s.values[j - 1]); };
  auto node_x = [&](std::size_t j) { return grid.x_min + static_cast<double>(j) * dx; };
  const auto first = static_cast<std::size_t>(std::max(0.0, std::floor((a - grid.x_min) / dx)));
  double sum = 0.0;
  for (std::size_t j = first; j + 1 < nodes; ++j) {
    const double xl = node_x(j), xr = node_x(j + 1);
    if (xl >= b) break;
    const double u = std::max(a, xl), v = std::min(b, xr);
    if (v <= u) continue;
    const double rl = rho(j), rr = rho(j + 1);
    auto lerp = [&](double x) { return rl + (rr - rl) * (x - xl) / dx; };
    sum += 0.5 * (v - u) * (lerp(u) + lerp(v));
  }
  return sum;
}

std::vector<CountSample> detector_counts(const std::vector<FieldState>& history, const Grid1D& grid,
                                         const DetectorSpec& det, double initial_norm) {
  validate(det);
  if (!(initial_norm > 0.0)) throw ConfigError("norm", "initial norm must be positive");
  std::vector<CountSample> out;
  out.reserve(history.size());
  for (const auto& s : history) {
    const double p = window_probability(s, grid, det.center - 0.5 * det.dx, det.center + 0.5 * det.dx);
    out.push_back({s.t, det.n_total * p / initial_norm});
  }
  return out;
}

int count_series_maxima(const std::vector<CountSample>& series) {
  if (series.size() < 3) return 0;
  double top = 0.0;
  for (const auto& c : series) top = std::max(top, c.count);
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < series.size(); ++i) {
    const double v = series[i].count;
    if (v > series[i - 1].count && v > series[i + 1].count && v > 1e-3 * top) ++peaks;
  }
  return peaks;
}

std::vector<std::string> experiment_preset_names() {
  return {"figure1-full", "figure1-scaled", "figure1-scaled-wide"};
}

ExperimentConfig experiment_preset(const std::string& name) {
  // Desk scale: w = m = 1, q0 w = 5, plate height 1e4 q0^2/2m, detector 5 w in front of the plate,
  // packet released 4 w in front of it. Narrow sigma/w = 0.1 lies below sqrt(w/q0) ~ 0.45, wide 0.5 above.
  ExperimentConfig c;
  c.name = name;
  if (name == "figure1-scaled" || name == "figure1-scaled-wide") {
    const double q0 = 5.0, m = 1.0, w = 1.0;
    const double sigma = name == "figure1-scaled" ? 0.1 * w : 0.5 * w;
    c.packet = GaussianPacketSpec::one_d(-4.0 * w, q0, sigma);
    c.plate.sign = PotentialSign::Barrier;
    c.plate.w = w;
    c.plate.mass = m;
    c.plate.v0 = 1e4 * q0 * q0 / (2.0 * m);
    c.plate_left = 0.0;
    c.detector = {-5.0 * w, 0.1 * w, 5e21};
    c.grid = Grid1D::with_spacing(-500.0 * w, 3.0 * w, 0.02 * w, 2e-4);
    c.t_end = 12.0;
    c.stride = 50;
    c.snapshot_stride = 5000;
    return c;
  }
  if (name == "figure1-full") {
    // Full-size values: N = 5e21, w = 1 cm, V0 = 4 eV, detector 1 mm wide at 5 cm, helium mass.
    const double w = 1.0;  // cm
    const double m = UnitSystem::helium_mass();
    const double v0 = UnitSystem::to_natural(Quantity::Energy, 4.0);
    const double q0 = std::sqrt(2.0 * m * v0 / 1e4);  // same plate-height ratio as the scaled run
    c.packet = GaussianPacketSpec::one_d(-4.0 * w, q0, 0.1 * w);
    c.plate.sign = PotentialSign::Barrier;
    c.plate.w = w;
    c.plate.mass = m;
    c.plate.v0 = v0;
    c.plate_left = 0.0;
    c.detector = {-5.0 * w, UnitSystem::to_natural(Quantity::Length, 0.1), 5e21};
    const double v = q0 / m;
    const double dx = 0.05 / q0;
    c.grid = Grid1D::with_spacing(-500.0 * w, 3.0 * w, dx, 0.5 * m * dx * dx);
    c.t_end = 60.0 * w / v;
    c.stride = 50;
    c.snapshot_stride = 5000;
    return c;
  }
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg.grid);
  validate(cfg.detector);
  if (cfg.grid.n > kMaxGridPoints) {
    throw ConfigError("preset", "grid of " + std::to_string(cfg.grid.n) + " points is beyond a desk-scale run");
  }
  if (cfg.snapshot_stride % cfg.stride != 0) {
    throw ConfigError("snapshot_stride", "snapshot stride must be a multiple of the detector stride");
  }
  const auto potential = plate_potential(cfg.grid, cfg.plate, cfg.plate_left);
  const FieldState init = gaussian_state(cfg.grid, cfg.packet);
  const double norm0 = discrete_norm(init, cfg.grid);
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.grid.dt));
  const double a = cfg.detector.center - 0.5 * cfg.detector.dx, b = cfg.detector.center + 0.5 * cfg.detector.dx;
  window_probability(init, cfg.grid, a, b);  // validates the window before the long run

  ExperimentResult res;
  std::size_t seen = 0;
  std::vector<FieldState> kept;
  FieldState last;
  auto observer = [&](const FieldState& s) {
    res.counts.push_back({s.t, cfg.detector.n_total * window_probability(s, cfg.grid, a, b) / norm0});
    res.transmitted = window_probability(s, cfg.grid, cfg.plate_left + cfg.plate.w, cfg.grid.x_max) / norm0;
    if (seen % (cfg.snapshot_stride / cfg.stride) == 0) kept.push_back(s);
    last = s;
    ++seen;
  };
  res.evolution = cn_evolve(init, cfg.grid, potential, cfg.plate.mass, n_steps, cfg.stride, observer, false);
  if (kept.empty() || kept.back().t != last.t) kept.push_back(std::move(last));
  res.evolution.snapshots = std::move(kept);
  res.count_maxima = count_series_maxima(res.counts);
  return res;
}

}  // namespace wpd
