#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace wpd {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr double kPi = 3.14159265358979323846;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

/// Bad user-facing parameter. `field()` names the offending config key.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// A computation could not reach its stated accuracy or hit a singular point.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Dimensionality { One = 1, Three = 3 };

/// Gaussian packet psi(r,0) = exp(i q0.(r-r0) - (r-r0)^2/(4 sigma^2)).
/// In 1D only component 0 of q0/r0 is used (q0, x0).
struct GaussianPacketSpec {
  Vec3 q0{0.0, 0.0, 0.0};
  Vec3 r0{0.0, 0.0, 0.0};
  double sigma = 1.0;
  Dimensionality dim = Dimensionality::Three;

  double x0() const { return r0[0]; }
  double q0x() const { return q0[0]; }
  double q0_magnitude() const { return dim == Dimensionality::One ? std::abs(q0[0]) : norm(q0); }

  static GaussianPacketSpec one_d(double x0, double q0, double sigma);
  /// Backward-geometry convention: r0 = distance * z, q0 = -q0 * z (aimed at the origin).
  static GaussianPacketSpec on_axis(double distance, double q0, double sigma);
};

enum class PotentialSign { Well, Barrier };

/// Square potential of magnitude v0: -v0 inside for a well, +v0 for a barrier.
/// In 3D `w` is the radius; in the 1D Dirac module the region is (-w, w).
struct SquareWellSpec {
  double v0 = 0.0;
  PotentialSign sign = PotentialSign::Well;
  double w = 1.0;
  double mass = 1.0;

  double signed_potential() const { return sign == PotentialSign::Well ? -v0 : v0; }
  /// sqrt(2 m v0) w, the dimensionless well strength.
  double strength() const { return std::sqrt(2.0 * mass * v0) * w; }

  static SquareWellSpec from_strength(double strength, double w = 1.0, double mass = 1.0,
                                      PotentialSign sign = PotentialSign::Well);
};

struct DetectorSpec {
  double center = 0.0;
  double dx = 1.0;
  double n_total = 1.0;
};

enum class Quantity { Length, Time, Energy, Mass, Momentum };

/// hbar = 1 with centimetres and seconds as base units. Energies are then in 1/s and
/// masses in s/cm^2. The "SI" side takes cm, s, eV, atomic mass units and 1/cm.
struct UnitSystem {
  static constexpr double kHbarJs = 1.054571817e-34;
  static constexpr double kElectronVoltJ = 1.602176634e-19;
  static constexpr double kAtomicMassKg = 1.66053906660e-27;
  static constexpr double kHeliumMassU = 4.002602;

  static double to_natural(Quantity q, double si_value);
  static double to_si(Quantity q, double natural_value);
  static double helium_mass();
};

struct SpecSet {
  GaussianPacketSpec packet;
  SquareWellSpec well;
  std::optional<DetectorSpec> detector;
};

/// Flat key/value parameters as read from a config file or CLI.
using RawParams = std::map<std::string, std::string>;

/// Typed view of raw parameters with unit conversion applied. Throws ConfigError.
SpecSet validate_config(const RawParams& raw, Dimensionality dim = Dimensionality::Three);

/// Checks the invariants of already-typed specs (used by every entry point).
void validate(const GaussianPacketSpec& p);
void validate(const SquareWellSpec& w);
void validate(const DetectorSpec& d);

enum class BlurState { Persistent, Blurred };

/// Blurred iff sigma > c * sqrt(w / |q0|).
BlurState blur_threshold(const GaussianPacketSpec& packet, const SquareWellSpec& well,
                         double comparison_constant = 1.0);

/// Reads `key = value` lines; `#` starts a comment. Duplicate keys are an error.
RawParams parse_config_text(const std::string& text);
RawParams load_config_file(const std::string& path);

/// Numeric accessors that report the key on failure.
double require_number(const RawParams& raw, const std::string& key);
std::optional<double> optional_number(const RawParams& raw, const std::string& key);
Vec3 parse_vector(const std::string& key, const std::string& text);

}  // namespace wpd
