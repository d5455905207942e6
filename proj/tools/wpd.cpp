// wpd: command-line front end for the wave-packet scattering toolkit.
//
//   wpd <subcommand> [--config FILE] [--out DIR] [--preset NAME] [--jobs N] [--lmax N] [--manifest FILE]
//
// Every run writes CSV files plus <subcommand>.manifest.json into --out. Passing a manifest back
// with --manifest repeats the run with the recorded inputs.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "wpd/core.hpp"
#include "wpd/dirac1d.hpp"
#include "wpd/parallel.hpp"
#include "wpd/phaseshift.hpp"
#include "wpd/scatter3d.hpp"
#include "wpd/specialfn.hpp"
#include "wpd/tdse1d.hpp"
#include "wpd/validation.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace wpd;

namespace {

enum Exit { kOk = 0, kUsage = 2, kConfig = 3, kNumerical = 4 };

const std::set<std::string> kPhysicsKeys = {"units", "sigma", "w", "mass", "v0", "sign", "q0", "r0", "x0",
                                             "det_center", "det_dx", "n_total"};
const std::set<std::string> kRunKeys = {"t",          "r_min",       "r_max",        "n_points",  "l_max",
                                         "steps",      "stride",      "dt",           "x_min",     "x_max",
                                         "n_grid",     "k_min",       "k_max",        "n_k",       "direction",
                                         "plate_left", "snapshot_stride", "sweep_param", "sweep_values",
                                         "sweep_target"};

struct Options {
  std::string sub;
  std::string config;
  std::string out = ".";
  std::string preset;
  std::string manifest;
  unsigned jobs = 0;
  int lmax = -1;
  std::vector<std::string> only;
};

struct Run {
  Options opt;
  RawParams raw;
  std::vector<std::string> outputs;
  json flags = json::object();
};

void check_keys(const RawParams& raw) {
  for (const auto& [k, v] : raw) {
    if (!kPhysicsKeys.count(k) && !kRunKeys.count(k)) throw ConfigError(k, "unknown config key '" + k + "'");
  }
}

double num_or(const RawParams& raw, const std::string& key, double fallback) {
  return optional_number(raw, key).value_or(fallback);
}

std::size_t count_or(const RawParams& raw, const std::string& key, std::size_t fallback, std::size_t min = 1) {
  const auto v = optional_number(raw, key);
  if (!v) return fallback;
  if (!(*v >= static_cast<double>(min)) || *v != std::floor(*v) || *v > 1e9) {
    throw ConfigError(key, key + " must be an integer >= " + std::to_string(min));
  }
  return static_cast<std::size_t>(*v);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

// CSV writer: header row, %.17g numbers, LF endings.
class Csv {
public:
  Csv(Run& run, const std::string& name, const std::string& header) : path_((fs::path(run.opt.out) / name).string()) {
    f_ = std::fopen(path_.c_str(), "wb");
    if (!f_) throw ConfigError("out", "cannot write " + path_);
    std::fprintf(f_, "%s\n", header.c_str());
    run.outputs.push_back(path_);
  }
  ~Csv() {
    if (f_) std::fclose(f_);
  }
  Csv(const Csv&) = delete;
  Csv& operator=(const Csv&) = delete;

  Csv& num(double v) {
    sep();
    std::fprintf(f_, "%.17g", v);
    return *this;
  }
  Csv& text(const std::string& s) {
    sep();
    std::string q = s;
    for (auto& c : q) {
      if (c == ',' || c == '\n' || c == '"') c = ' ';
    }
    std::fputs(q.c_str(), f_);
    return *this;
  }
  void end() {
    std::fputc('\n', f_);
    first_ = true;
  }

private:
  void sep() {
    if (!first_) std::fputc(',', f_);
    first_ = false;
  }
  std::string path_;
  std::FILE* f_ = nullptr;
  bool first_ = true;
};

// Phase-shift tables only need the potential; sigma is a placeholder for the shared validator.
SquareWellSpec well_only(const RawParams& raw) {
  RawParams r = raw;
  if (!r.count("sigma")) r["sigma"] = "1";
  return validate_config(r, Dimensionality::One).well;
}

void run_phase_shifts(Run& run) {
  const auto well = well_only(run.raw);
  const int lmax = run.opt.lmax >= 0 ? run.opt.lmax : static_cast<int>(count_or(run.raw, "l_max", 0, 0));
  const double k_min = num_or(run.raw, "k_min", 1e-3 / well.w);
  const double k_max = num_or(run.raw, "k_max", 10.0 / well.w);
  const std::size_t n_k = count_or(run.raw, "n_k", 200, 2);
  if (!(k_min > 0.0) || !(k_max > k_min)) throw ConfigError("k_min", "need 0 < k_min < k_max");
  const auto ks = geometric_grid(k_min, k_max, n_k);
  Csv csv(run, "phase_shifts.csv", "k,l,delta_exact,delta_lowk,z_l");
  for (int l = 0; l <= lmax; ++l) {
    const auto table = tabulate_phase_shifts(l, well, ks);
    for (const auto& s : table.samples) {
      double low = std::nan("");
      try {
        low = delta_lowk(l, s.k, well);
      } catch (const NumericalError&) {
      }
      csv.num(s.k).num(l).num(s.delta).num(low).num(s.z).end();
    }
  }
}

void run_scatter3d(Run& run) {
  const auto specs = validate_config(run.raw, Dimensionality::Three);
  const double t = num_or(run.raw, "t", 0.0);
  if (!(t >= 0.0)) throw ConfigError("t", "t must be non-negative");
  const double r_min = num_or(run.raw, "r_min", 2.0 * specs.well.w);
  const double r_max = num_or(run.raw, "r_max", 20.0 * specs.well.w);
  if (!(r_min > specs.well.w) || !(r_max > r_min)) throw ConfigError("r_min", "need w < r_min < r_max");
  const auto rs = linspace(r_min, r_max, count_or(run.raw, "n_points", 200, 2));
  Direction dir = Direction::Backward;
  if (auto it = run.raw.find("direction"); it != run.raw.end()) {
    if (it->second == "forward") {
      dir = Direction::Forward;
    } else if (it->second != "backward") {
      throw ConfigError("direction", "direction must be 'backward' or 'forward'");
    }
  }
  const Vec3 rhat = direction_vector(specs.packet, dir);

  // Partial-wave quadrature when an L cutoff is requested, otherwise the s-wave closed form.
  const bool quadrature = run.opt.lmax >= 0 || run.raw.count("l_max");
  std::vector<cplx> sc(rs.size());
  if (quadrature) {
    QuadratureSpec q;
    q.l_max = run.opt.lmax >= 0 ? run.opt.lmax : static_cast<int>(count_or(run.raw, "l_max", 0, 0));
    sc = psi_scatt_quadrature_profile(rs, rhat, t, specs.packet, specs.well, q);
    run.flags["method"] = "quadrature";
    run.flags["l_max"] = q.l_max;
  } else {
    for (std::size_t i = 0; i < rs.size(); ++i) sc[i] = psi_scatt_closed(rs[i], t, specs.packet, specs.well);
    run.flags["method"] = "closed";
  }
  Csv csv(run, "scatter3d.csv", "r,t,re_in,im_in,re_sc,im_sc,density_total");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const cplx in = psi_in(rs[i] * rhat, t, specs.packet, specs.well.mass);
    csv.num(rs[i]).num(t).num(in.real()).num(in.imag()).num(sc[i].real()).num(sc[i].imag()).num(std::norm(in + sc[i]));
    csv.end();
  }
}

struct PatternOutcome {
  int n_peaks = 0;
  bool blurred = false;
};

PatternOutcome pattern_once(const RawParams& raw) {
  const auto specs = validate_config(raw, Dimensionality::Three);
  const double t = num_or(raw, "t", 1000.0);
  const auto n = count_or(raw, "n_points", 20000, 3);
  return {backward_peak_count(specs.packet, specs.well, t, n),
          blur_threshold(specs.packet, specs.well) == BlurState::Blurred};
}

void run_pattern_cmd(Run& run) {
  const auto specs = validate_config(run.raw, Dimensionality::Three);
  const auto res = pattern_once(run.raw);
  Csv csv(run, "pattern.csv", "sigma,n_peaks,blurred_flag");
  csv.num(specs.packet.sigma).num(res.n_peaks).num(res.blurred ? 1 : 0).end();
}

std::vector<double> dirac_grid(const RawParams& raw, const SquareWellSpec& well, double x0) {
  const double x_min = num_or(raw, "x_min", -3.0 * std::abs(x0) - 10.0 * well.w);
  const double x_max = num_or(raw, "x_max", 3.0 * std::abs(x0) + 10.0 * well.w);
  if (!(x_max > x_min)) throw ConfigError("x_max", "need x_min < x_max");
  return linspace(x_min, x_max, count_or(raw, "n_points", 801, 2));
}

void run_dirac(Run& run) {
  const auto specs = validate_config(run.raw, Dimensionality::One);
  const double t = num_or(run.raw, "t", 0.0);
  const auto xs = dirac_grid(run.raw, specs.well, specs.packet.x0());
  const auto samples = dirac_evolve(xs, t, specs.packet, specs.well);
  Csv csv(run, "dirac1d.csv", "x,t,re_u,im_u,re_v,im_v,density");
  for (const auto& s : samples) {
    csv.num(s.x).num(s.t).num(s.u.real()).num(s.u.imag()).num(s.v.real()).num(s.v.imag()).num(s.density()).end();
  }
}

// Reflected-side peak count at the time the packet centre would be back at its start.
int dirac_peaks(const RawParams& raw) {
  const auto specs = validate_config(raw, Dimensionality::One);
  const double m = specs.well.mass, q0 = specs.packet.q0x(), x0 = specs.packet.x0();
  if (!(x0 < -specs.well.w) || !(q0 > 0.0)) {
    throw ConfigError("x0", "reflected-peak count needs x0 < -w and q0 > 0");
  }
  const double v = q0 / std::sqrt(q0 * q0 + m * m);
  const double t = num_or(raw, "t", 2.0 * std::abs(x0) / v);
  const double span = 3.0 * std::abs(x0) + t / (2.0 * m * specs.packet.sigma) + 10.0;
  const double hi = -specs.well.w - 0.01;
  const auto xs = linspace(hi - span, hi, count_or(raw, "n_points", 800, 3));
  return count_peaks(reflected_profile(t, xs, specs.packet, specs.well));
}

ExperimentConfig experiment_from(const Run& run) {
  if (!run.opt.preset.empty()) return experiment_preset(run.opt.preset);
  const auto specs = validate_config(run.raw, Dimensionality::One);
  if (!specs.detector) throw ConfigError("det_center", "tdse1d needs det_center, det_dx and n_total");
  ExperimentConfig c;
  c.name = "config";
  c.packet = specs.packet;
  c.plate = specs.well;
  c.plate_left = num_or(run.raw, "plate_left", 0.0);
  c.detector = *specs.detector;
  c.grid.x_min = require_number(run.raw, "x_min");
  c.grid.x_max = require_number(run.raw, "x_max");
  c.grid.n = count_or(run.raw, "n_grid", 0, 1);
  c.grid.dt = require_number(run.raw, "dt");
  if (c.grid.n == 0) throw ConfigError("n_grid", "n_grid is required");
  if (run.raw.count("steps") && run.raw.count("t")) throw ConfigError("steps", "give either t or steps, not both");
  c.t_end = run.raw.count("steps") ? static_cast<double>(count_or(run.raw, "steps", 1)) * c.grid.dt
                                   : require_number(run.raw, "t");
  c.stride = count_or(run.raw, "stride", 50);
  c.snapshot_stride = count_or(run.raw, "snapshot_stride", 100 * c.stride);
  return c;
}

void run_tdse(Run& run) {
  const auto cfg = experiment_from(run);
  const auto res = run_experiment(cfg);
  {
    Csv csv(run, "tdse1d_snapshots.csv", "t,x,density");
    for (const auto& s : res.evolution.snapshots) {
      for (std::size_t i = 0; i < cfg.grid.n; ++i) csv.num(s.t).num(cfg.grid.x(i)).num(std::norm(s.values[i])).end();
    }
  }
  {
    Csv csv(run, "tdse1d_counts.csv", "t,count");
    for (const auto& c : res.counts) csv.num(c.t).num(c.count).end();
  }
  run.flags["boundary_contaminated"] = res.evolution.boundary_contaminated;
  run.flags["max_edge_ratio"] = res.evolution.max_edge_ratio;
  run.flags["dt_above_heuristic"] = res.evolution.dt_above_heuristic;
  run.flags["transmitted"] = res.transmitted;
  run.flags["count_maxima"] = res.count_maxima;
  if (res.evolution.boundary_contaminated) {
    std::fprintf(stderr, "warning: wave reached the grid edge (ratio %.3g)\n", res.evolution.max_edge_ratio);
  }
}

void run_sweep(Run& run) {
  const auto pit = run.raw.find("sweep_param");
  if (pit == run.raw.end()) throw ConfigError("sweep_param", "sweep needs sweep_param");
  const std::string param = pit->second;
  if (param != "sigma" && param != "q0" && param != "v0" && param != "w" && param != "mass") {
    throw ConfigError("sweep_param", "sweep_param must be one of sigma, q0, v0, w, mass");
  }
  const auto vit = run.raw.find("sweep_values");
  std::vector<std::string> values;
  if (vit != run.raw.end()) {
    std::istringstream in(vit->second);
    for (std::string tok; in >> tok;) values.push_back(tok);
  }
  if (values.empty()) throw ConfigError("sweep_values", "sweep_values must list at least one value");
  const std::string target = run.raw.count("sweep_target") ? run.raw.at("sweep_target") : "pattern";
  if (target != "pattern" && target != "dirac1d") {
    throw ConfigError("sweep_target", "sweep_target must be 'pattern' or 'dirac1d'");
  }
  RawParams base = run.raw;
  base.erase("sweep_param");
  base.erase("sweep_values");
  base.erase("sweep_target");

  // Every value is validated up front; a bad value is a config error for the whole sweep.
  std::vector<RawParams> cfgs;
  for (const auto& v : values) {
    RawParams r = base;
    r[param] = v;
    const double x = require_number(r, param);
    if (!std::isfinite(x)) throw ConfigError(param, "sweep values must be finite");
    validate_config(r, target == "pattern" ? Dimensionality::Three : Dimensionality::One);
    cfgs.push_back(std::move(r));
  }

  struct Row {
    int n_peaks = 0;
    bool blurred = false;
    std::string error;
  };
  std::vector<Row> rows(cfgs.size());
  const unsigned jobs = run.opt.jobs > 0 ? run.opt.jobs : default_jobs();
  parallel_for(
      cfgs.size(),
      [&](std::size_t i) {
        try {
          if (target == "pattern") {
            const auto o = pattern_once(cfgs[i]);
            rows[i] = {o.n_peaks, o.blurred, ""};
          } else {
            rows[i] = {dirac_peaks(cfgs[i]), false, ""};
          }
        } catch (const std::exception& e) {
          rows[i].error = e.what();
        }
      },
      jobs);

  Csv csv(run, "sweep.csv", param + ",n_peaks,blurred_flag,error");
  int failures = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv.num(require_number(cfgs[i], param));
    if (rows[i].error.empty()) {
      csv.num(rows[i].n_peaks).num(rows[i].blurred ? 1 : 0).text("");
    } else {
      ++failures;
      csv.text("").text("").text(rows[i].error);
    }
    csv.end();
  }
  run.flags["failed_rows"] = failures;
  run.flags["target"] = target;
}

int run_validate(Run& run) {
  const auto results = run_checks(acceptance_checks(), run.opt.only, [](const CheckResult& r) {
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
  });
  Csv csv(run, "validate.csv", "id,name,pass,seconds,detail");
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    csv.text(r.id).text(r.name).num(r.pass ? 1 : 0).num(r.seconds).text(r.detail).end();
  }
  run.flags["all_pass"] = all;
  return all ? kOk : kNumerical;
}

void write_manifest(const Run& run, double seconds) {
  json m;
  m["subcommand"] = run.opt.sub;
  m["config"] = run.raw;
  m["preset"] = run.opt.preset;
  m["lmax"] = run.opt.lmax;
  m["only"] = run.opt.only;
  m["outputs"] = run.outputs;
  m["wall_seconds"] = seconds;
  m["flags"] = run.flags;
  const auto path = fs::path(run.opt.out) / (run.opt.sub + ".manifest.json");
  std::ofstream(path, std::ios::binary) << m.dump(2) << '\n';
}

void load_manifest(Options& opt, RawParams& raw) {
  std::ifstream in(opt.manifest);
  if (!in) throw ConfigError("manifest", "cannot read " + opt.manifest);
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("manifest", std::string("bad manifest: ") + e.what());
  }
  if (m.value("subcommand", "") != opt.sub) throw ConfigError("manifest", "manifest is for '" + m.value("subcommand", "") + "'");
  raw = m.at("config").get<RawParams>();
  opt.preset = m.value("preset", "");
  opt.lmax = m.value("lmax", -1);
  opt.only = m.value("only", std::vector<std::string>{});
}

int dispatch(Options opt) {
  const auto t0 = std::chrono::steady_clock::now();
  Run run;
  if (!opt.manifest.empty()) {
    if (!opt.config.empty()) throw ConfigError("manifest", "give either --config or --manifest");
    load_manifest(opt, run.raw);
  } else if (!opt.config.empty()) {
    run.raw = load_config_file(opt.config);
  }
  run.opt = opt;
  check_keys(run.raw);
  if (!opt.preset.empty() && opt.sub != "tdse1d") throw ConfigError("preset", "--preset applies to tdse1d only");
  if (opt.sub != "validate" && opt.sub != "tdse1d" && opt.config.empty() && opt.manifest.empty()) {
    throw ConfigError("config", opt.sub + " needs --config");
  }
  if (opt.sub == "tdse1d" && opt.preset.empty() && run.raw.empty()) {
    throw ConfigError("config", "tdse1d needs --config or --preset");
  }
  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (ec) throw ConfigError("out", "cannot create " + opt.out);

  int code = kOk;
  if (opt.sub == "phase-shifts") {
    run_phase_shifts(run);
  } else if (opt.sub == "scatter3d") {
    run_scatter3d(run);
  } else if (opt.sub == "pattern") {
    run_pattern_cmd(run);
  } else if (opt.sub == "dirac1d") {
    run_dirac(run);
  } else if (opt.sub == "tdse1d") {
    run_tdse(run);
  } else if (opt.sub == "sweep") {
    run_sweep(run);
  } else if (opt.sub == "validate") {
    code = run_validate(run);
  }
  write_manifest(run, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-packet scattering by square potentials"};
  app.require_subcommand(1);
  Options opt;
  for (const char* name : {"phase-shifts", "scatter3d", "pattern", "dirac1d", "tdse1d", "sweep", "validate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config, "key = value config file");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--manifest", opt.manifest, "re-run from a manifest written by an earlier run");
    sub->add_option("--jobs", opt.jobs, "worker threads (sweep runs in parallel)");
    sub->add_option("--lmax", opt.lmax, "highest partial wave")->check(CLI::Range(0, 60));
    sub->add_option("--preset", opt.preset, "named experiment preset (tdse1d)");
    if (std::string(name) == "validate") sub->add_option("--only", opt.only, "criterion ids to run");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << app.help() << "error: " << e.what() << '\n';
    return kUsage;
  }
  opt.sub = app.get_subcommands().front()->get_name();
  try {
    return dispatch(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.field() << "]: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kNumerical;
  }
}
