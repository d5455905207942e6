#pragma once

#include <functional>
#include <string>
#include <vector>

namespace wpd {

struct CheckResult {
  std::string id;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 = no limit
};

struct Check {
  std::string id;
  std::string name;
  double time_limit;
  std::function<CheckResult()> run;
};

/// The acceptance criteria, one entry per printed line. Each check times itself and fails
/// if it exceeds its runtime budget.
std::vector<Check> acceptance_checks();

/// Runs the checks (optionally only ids in `only`), reporting each result as it completes.
std::vector<CheckResult> run_checks(const std::vector<Check>& checks, const std::vector<std::string>& only = {},
                                    const std::function<void(const CheckResult&)>& on_result = {});

/// "PASS  3  Free-packet oracle  (1.2 s)  detail".
std::string format_result(const CheckResult& r);

// Quantities behind the criteria, exposed for the unit tests.

/// Max relative |delta_lowk - delta_exact| over the strengths at kw = 1e-3.
double lowk_worst_relative(const std::vector<double>& strengths, double kw = 1e-3);

/// Relative L2 difference between closed form and L = 0 quadrature on the backward axis.
double closed_vs_quadrature_l2(double r_min, double r_max, std::size_t n_r);

/// Max relative error of psi_in against the separable tensor-product quadrature at random points.
double free_packet_oracle_error(std::size_t n_points, unsigned seed = 12345);

/// L-infinity difference of Dirac |U|^2 + |V|^2 against the Schrodinger density, relative to
/// the Schrodinger maximum. Both are computed from the same nonrelativistic packet.
double dirac_nonrel_error(double t, std::size_t n_x);

struct CnQuality {
  double max_norm_drift_per_step = 0.0;
  double width_error = 0.0;
  double convergence_factor = 0.0;
};
CnQuality cn_quality(std::size_t n_steps = 10000);

}  // namespace wpd
