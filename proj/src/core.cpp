#include "wpd/core.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace wpd {

GaussianPacketSpec GaussianPacketSpec::one_d(double x0, double q0, double sigma) {
  GaussianPacketSpec p;
  p.q0 = {q0, 0.0, 0.0};
  p.r0 = {x0, 0.0, 0.0};
  p.sigma = sigma;
  p.dim = Dimensionality::One;
  return p;
}

GaussianPacketSpec GaussianPacketSpec::on_axis(double distance, double q0, double sigma) {
  GaussianPacketSpec p;
  p.q0 = {0.0, 0.0, -q0};
  p.r0 = {0.0, 0.0, distance};
  p.sigma = sigma;
  p.dim = Dimensionality::Three;
  return p;
}

SquareWellSpec SquareWellSpec::from_strength(double strength, double w, double mass, PotentialSign sign) {
  SquareWellSpec s;
  s.w = w;
  s.mass = mass;
  s.sign = sign;
  s.v0 = strength * strength / (2.0 * mass * w * w);
  return s;
}

namespace {

double factor(Quantity q) {
  switch (q) {
    case Quantity::Length:
    case Quantity::Time:
    case Quantity::Momentum:
      return 1.0;
    case Quantity::Energy:
      return UnitSystem::kElectronVoltJ / UnitSystem::kHbarJs;
    case Quantity::Mass:
      // kg / (J s) is s/m^2; 1 m^2 = 1e4 cm^2.
      return UnitSystem::kAtomicMassKg / UnitSystem::kHbarJs * 1e-4;
  }
  return 1.0;
}

void require_finite(const std::string& field, double v) {
  if (!std::isfinite(v)) throw ConfigError(field, field + " must be finite");
}

void require_positive(const std::string& field, double v) {
  require_finite(field, v);
  if (!(v > 0.0)) throw ConfigError(field, field + " must be positive");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

double UnitSystem::to_natural(Quantity q, double si_value) { return si_value * factor(q); }
double UnitSystem::to_si(Quantity q, double natural_value) { return natural_value / factor(q); }
double UnitSystem::helium_mass() { return to_natural(Quantity::Mass, kHeliumMassU); }

void validate(const GaussianPacketSpec& p) {
  require_positive("sigma", p.sigma);
  for (double c : p.q0) require_finite("q0", c);
  for (double c : p.r0) require_finite(p.dim == Dimensionality::One ? "x0" : "r0", c);
}

void validate(const SquareWellSpec& w) {
  require_positive("w", w.w);
  require_positive("mass", w.mass);
  require_finite("v0", w.v0);
  if (w.v0 < 0.0) throw ConfigError("v0", "v0 must be non-negative (use sign = barrier)");
}

void validate(const DetectorSpec& d) {
  require_finite("det_center", d.center);
  require_positive("det_dx", d.dx);
  require_positive("n_total", d.n_total);
}

double require_number(const RawParams& raw, const std::string& key) {
  auto v = optional_number(raw, key);
  if (!v) throw ConfigError(key, "missing required key " + key);
  return *v;
}

std::optional<double> optional_number(const RawParams& raw, const std::string& key) {
  auto it = raw.find(key);
  if (it == raw.end()) return std::nullopt;
  const std::string& s = it->second;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(key, key + " is not a number: '" + s + "'");
  }
  if (!trim(s.substr(used)).empty()) throw ConfigError(key, key + " is not a number: '" + s + "'");
  require_finite(key, v);
  return v;
}

Vec3 parse_vector(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  std::vector<double> parts;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ConfigError(key, key + " has a non-numeric component '" + tok + "'");
    }
    if (used != tok.size()) throw ConfigError(key, key + " has a non-numeric component '" + tok + "'");
    require_finite(key, v);
    parts.push_back(v);
  }
  if (parts.size() != 3) throw ConfigError(key, key + " must be a scalar or three components");
  return {parts[0], parts[1], parts[2]};
}

SpecSet validate_config(const RawParams& raw, Dimensionality dim) {
  bool si = false;
  if (auto it = raw.find("units"); it != raw.end()) {
    if (it->second == "si") {
      si = true;
    } else if (it->second != "natural") {
      throw ConfigError("units", "units must be 'natural' or 'si'");
    }
  }
  auto conv = [si](Quantity q, double v) { return si ? UnitSystem::to_natural(q, v) : v; };

  SpecSet out;
  GaussianPacketSpec& p = out.packet;
  p.dim = dim;
  p.sigma = conv(Quantity::Length, require_number(raw, "sigma"));

  auto vector_or_scalar = [&](const std::string& key, Quantity q, bool axis_flip) -> Vec3 {
    auto it = raw.find(key);
    if (it == raw.end()) return {0.0, 0.0, 0.0};
    std::istringstream probe(it->second);
    std::string a, b;
    probe >> a >> b;
    if (b.empty()) {
      double s = conv(q, require_number(raw, key));
      if (dim == Dimensionality::One) return {s, 0.0, 0.0};
      return {0.0, 0.0, axis_flip ? -s : s};
    }
    if (dim == Dimensionality::One) throw ConfigError(key, key + " must be a scalar in one dimension");
    Vec3 v = parse_vector(key, it->second);
    return {conv(q, v[0]), conv(q, v[1]), conv(q, v[2])};
  };

  p.q0 = vector_or_scalar("q0", Quantity::Momentum, true);
  if (raw.count("r0") && raw.count("x0")) throw ConfigError("x0", "give either r0 or x0, not both");
  p.r0 = vector_or_scalar(raw.count("x0") ? "x0" : "r0", Quantity::Length, false);

  SquareWellSpec& w = out.well;
  w.w = conv(Quantity::Length, require_number(raw, "w"));
  w.mass = conv(Quantity::Mass, require_number(raw, "mass"));
  w.v0 = conv(Quantity::Energy, optional_number(raw, "v0").value_or(0.0));
  if (auto it = raw.find("sign"); it != raw.end()) {
    if (it->second == "well") {
      w.sign = PotentialSign::Well;
    } else if (it->second == "barrier") {
      w.sign = PotentialSign::Barrier;
    } else {
      throw ConfigError("sign", "sign must be 'well' or 'barrier'");
    }
  }

  validate(p);
  validate(w);

  if (raw.count("det_center") || raw.count("det_dx") || raw.count("n_total")) {
    DetectorSpec d;
    d.center = conv(Quantity::Length, require_number(raw, "det_center"));
    d.dx = conv(Quantity::Length, require_number(raw, "det_dx"));
    d.n_total = require_number(raw, "n_total");
    validate(d);
    out.detector = d;
  }
  return out;
}

BlurState blur_threshold(const GaussianPacketSpec& packet, const SquareWellSpec& well,
                         double comparison_constant) {
  validate(packet);
  validate(well);
  const double q = packet.q0_magnitude();
  if (!(q > 0.0)) throw ConfigError("q0", "blur criterion undefined for q0 = 0");
  if (!(comparison_constant > 0.0)) throw ConfigError("blur_constant", "blur_constant must be positive");
  return packet.sigma > comparison_constant * std::sqrt(well.w / q) ? BlurState::Blurred
                                                                     : BlurState::Persistent;
}

RawParams parse_config_text(const std::string& text) {
  RawParams out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value' on line " + std::to_string(lineno));
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key on line " + std::to_string(lineno));
    if (!out.emplace(key, value).second) throw ConfigError(key, "duplicate key " + key);
  }
  return out;
}

RawParams load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace wpd
