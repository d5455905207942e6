#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(WPD_TEST_WORKDIR) / "cli_work";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_cfg(const std::string& name, const std::string& text) {
  fs::create_directories(kWork);
  const auto p = kWork / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

// Runs the CLI with stdout and stderr captured in <work>/log.txt; returns the exit code.
int wpd(const std::string& args) {
  fs::create_directories(kWork);
  const std::string cmd = std::string("\"") + WPD_CLI + "\" " + args + " > \"" + (kWork / "log.txt").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out_dir(const std::string& name) { return (kWork / name).string(); }

const char* kNarrow = "sigma = 0.1\nq0 = 1\nr0 = 50\nw = 1\nmass = 1\nv0 = 0.5\nt = 1000\n";

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("pattern writes its CSV and manifest") {
  const auto cfg = write_cfg("narrow.cfg", kNarrow);
  REQUIRE(wpd("pattern --config " + cfg.string() + " --out " + out_dir("pattern")) == 0);
  const auto rows = lines(slurp(kWork / "pattern" / "pattern.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "sigma,n_peaks,blurred_flag");
  CHECK(rows[1].find("0.10000000000000001,") == 0);
  CHECK(slurp(kWork / "pattern" / "pattern.csv").find('\r') == std::string::npos);
  CHECK(fs::exists(kWork / "pattern" / "pattern.manifest.json"));
}

TEST_CASE("config errors exit 3 and name the key") {
  const auto bad = write_cfg("bad.cfg", "sigma = 0\nq0 = 1\nr0 = 5\nw = 1\nmass = 1\n");
  CHECK(wpd("scatter3d --config " + bad.string() + " --out " + out_dir("bad")) == 3);
  CHECK(slurp(kWork / "log.txt").find("sigma") != std::string::npos);
  const auto unknown = write_cfg("unknown.cfg", std::string(kNarrow) + "colour = blue\n");
  CHECK(wpd("pattern --config " + unknown.string() + " --out " + out_dir("bad")) == 3);
  CHECK(slurp(kWork / "log.txt").find("colour") != std::string::npos);
  CHECK(wpd("pattern --config " + (kWork / "missing.cfg").string()) == 3);
  CHECK(wpd("tdse1d --preset nope --out " + out_dir("bad")) == 3);
  CHECK(wpd("tdse1d --preset figure1-full --out " + out_dir("bad")) == 3);
}

TEST_CASE("usage errors exit 2") {
  CHECK(wpd("") == 2);
  CHECK(wpd("frobnicate") == 2);
  CHECK(wpd("pattern --no-such-flag") == 2);
  CHECK(wpd("pattern --jobs many") == 2);
}

TEST_CASE("numerical failures exit 4") {
  // A needle-thin packet evaluated at an enormous time needs an impossibly fine k grid.
  const auto cfg = write_cfg("huge.cfg", "sigma = 0.001\nq0 = 1\nx0 = -5\nw = 1\nmass = 1\nv0 = 0.1\nt = 1e7\n"
                                         "n_points = 3\nx_min = -10\nx_max = -5\n");
  CHECK(wpd("dirac1d --config " + cfg.string() + " --out " + out_dir("huge")) == 4);
}

TEST_CASE("phase-shift table") {
  const auto cfg = write_cfg("ps.cfg", "w = 1\nmass = 1\nv0 = 2\nn_k = 7\n");
  REQUIRE(wpd("phase-shifts --config " + cfg.string() + " --lmax 2 --out " + out_dir("ps")) == 0);
  const auto rows = lines(slurp(kWork / "ps" / "phase_shifts.csv"));
  CHECK(rows[0] == "k,l,delta_exact,delta_lowk,z_l");
  CHECK(rows.size() == 1 + 3 * 7);
}

TEST_CASE("scatter3d and dirac1d columns") {
  const auto cfg = write_cfg("s3.cfg", "sigma = 1\nq0 = 1\nr0 = 5\nw = 1\nmass = 1\nv0 = 0.5\nt = 200\nn_points = 11\n");
  REQUIRE(wpd("scatter3d --config " + cfg.string() + " --out " + out_dir("s3")) == 0);
  auto rows = lines(slurp(kWork / "s3" / "scatter3d.csv"));
  CHECK(rows[0] == "r,t,re_in,im_in,re_sc,im_sc,density_total");
  CHECK(rows.size() == 12);
  REQUIRE(wpd("scatter3d --config " + cfg.string() + " --lmax 1 --out " + out_dir("s3q")) == 0);
  CHECK(slurp(kWork / "s3q" / "scatter3d.manifest.json").find("quadrature") != std::string::npos);

  const auto d = write_cfg("d.cfg", "sigma = 2\nq0 = 1\nx0 = -20\nw = 1\nmass = 10\nv0 = 0.05\nt = 50\nn_points = 21\n");
  REQUIRE(wpd("dirac1d --config " + d.string() + " --out " + out_dir("d")) == 0);
  rows = lines(slurp(kWork / "d" / "dirac1d.csv"));
  CHECK(rows[0] == "x,t,re_u,im_u,re_v,im_v,density");
  CHECK(rows.size() == 22);
}

TEST_CASE("tdse1d from a config writes snapshots and counts") {
  const auto cfg = write_cfg("t.cfg",
                             "sigma = 0.5\nq0 = 3\nx0 = -4\nw = 1\nmass = 1\nv0 = 4500\nsign = barrier\n"
                             "det_center = -6\ndet_dx = 0.2\nn_total = 1000\n"
                             "x_min = -40\nx_max = 3\nn_grid = 2000\ndt = 2e-3\nt = 4\nstride = 10\n");
  REQUIRE(wpd("tdse1d --config " + cfg.string() + " --out " + out_dir("t")) == 0);
  const auto snaps = lines(slurp(kWork / "t" / "tdse1d_snapshots.csv"));
  const auto counts = lines(slurp(kWork / "t" / "tdse1d_counts.csv"));
  CHECK(snaps[0] == "t,x,density");
  CHECK(counts[0] == "t,count");
  CHECK(counts.size() == 1 + 201);
  CHECK((snaps.size() - 1) % 2000 == 0);
}

TEST_CASE("sweep: sigma ladder, order, determinism and manifest replay") {
  const auto cfg = write_cfg("sweep.cfg", std::string(kNarrow) + "sweep_param = sigma\nsweep_values = 0.1 0.3 1 3 10\n");
  REQUIRE(wpd("sweep --config " + cfg.string() + " --jobs 1 --out " + out_dir("sw1")) == 0);
  REQUIRE(wpd("sweep --config " + cfg.string() + " --jobs 3 --out " + out_dir("sw3")) == 0);
  const auto a = slurp(kWork / "sw1" / "sweep.csv");
  CHECK(a == slurp(kWork / "sw3" / "sweep.csv"));
  const auto rows = lines(a);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "sigma,n_peaks,blurred_flag,error");
  int prev = 1 << 30;
  const char* expect[] = {"0.10000000000000001", "0.29999999999999999", "1", "3", "10"};
  for (int i = 1; i <= 5; ++i) {
    CHECK(rows[i].find(std::string(expect[i - 1]) + ",") == 0);
    const auto c1 = rows[i].find(',');
    const int n = std::stoi(rows[i].substr(c1 + 1));
    CHECK(n <= prev);
    prev = n;
  }
  REQUIRE(wpd("sweep --manifest " + (kWork / "sw1" / "sweep.manifest.json").string() + " --out " + out_dir("replay")) == 0);
  CHECK(slurp(kWork / "replay" / "sweep.csv") == a);
}

TEST_CASE("sweep rejects bad value lists") {
  const auto empty = write_cfg("empty.cfg", std::string(kNarrow) + "sweep_param = sigma\nsweep_values = \n");
  CHECK(wpd("sweep --config " + empty.string() + " --out " + out_dir("e")) == 3);
  const auto bad = write_cfg("badv.cfg", std::string(kNarrow) + "sweep_param = sigma\nsweep_values = 1 -2\n");
  CHECK(wpd("sweep --config " + bad.string() + " --out " + out_dir("e")) == 3);
  const auto param = write_cfg("badp.cfg", std::string(kNarrow) + "sweep_param = colour\nsweep_values = 1\n");
  CHECK(wpd("sweep --config " + param.string() + " --out " + out_dir("e")) == 3);
}

TEST_CASE("sweep records per-row failures and continues") {
  // q0 = 0 cannot be classified by the blur criterion; the other rows still run.
  const auto cfg = write_cfg("rowerr.cfg", std::string(kNarrow) + "sweep_param = q0\nsweep_values = 1 0\n");
  REQUIRE(wpd("sweep --config " + cfg.string() + " --out " + out_dir("rowerr")) == 0);
  const auto rows = lines(slurp(kWork / "rowerr" / "sweep.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].back() == ',');
  CHECK(rows[2].size() > 6);
  CHECK(rows[2].find("q0") != std::string::npos);
}

TEST_CASE("Dirac mass ladder loses its pattern toward small mass") {
  const auto cfg = write_cfg("mass.cfg",
                             "sigma = 2\nq0 = 1\nx0 = -20\nw = 1\nmass = 100\nv0 = 0.005\n"
                             "sweep_param = mass\nsweep_values = 100 10 1\nsweep_target = dirac1d\n");
  REQUIRE(wpd("sweep --config " + cfg.string() + " --out " + out_dir("mass")) == 0);
  const auto rows = lines(slurp(kWork / "mass" / "sweep.csv"));
  REQUIRE(rows.size() == 4);
  int prev = 1 << 30;
  for (int i = 1; i <= 3; ++i) {
    const int n = std::stoi(rows[i].substr(rows[i].find(',') + 1));
    CHECK(n <= prev);
    prev = n;
  }
  CHECK(std::stoi(rows[1].substr(rows[1].find(',') + 1)) >= 3);
}

TEST_CASE("validate exit status follows the checks") {
  CHECK(wpd("validate --only 1 6 --out " + out_dir("val")) == 0);
  CHECK(slurp(kWork / "log.txt").find("PASS  1") != std::string::npos);
  CHECK(wpd("validate --only 2b --out " + out_dir("val")) == 4);
}

}
