#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ipfcsim/outputs.hpp"
#include "ipfcsim/scenario.hpp"

using namespace ipfcsim;
namespace fs = std::filesystem;

namespace {

RunResult sample_run() {
  Scenario s;
  s.name = "unit-outputs";
  s.grid_text = builtin_grid8_text();
  s.mode = IpfcMode::off;
  s.fault = {FaultKind::three_phase, "5", 0.8, 0.0};
  s.t_fault = 0.2;
  s.t_end = 0.4;
  s.dt = 0.002;
  s.relay_branch = "5";
  s.config_text = "unit-outputs";
  return run_scenario(s);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("format_g12 is stable and sign-normalized") {
  CHECK(format_g12(0.0) == "0");
  CHECK(format_g12(-0.0) == "0");
  CHECK(format_g12(0.016) == "0.016");
  CHECK(format_g12(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("emit_outputs writes the full documented tree") {
  const RunResult r = sample_run();
  const fs::path dir = fs::temp_directory_path() / "ipfcsim_outputs_test";
  fs::remove_all(dir);
  const auto manifest = emit_outputs(r, dir.string(), true);

  REQUIRE(manifest.size() == 4);
  for (const char* name : {"trajectory.csv", "ipfc.csv", "summary.txt", "plot.svg",
                           "manifest.txt"}) {
    CHECK(fs::exists(dir / name));
  }
  // Manifest records every emitted file with its true byte size.
  for (const auto& e : manifest) {
    CHECK(fs::file_size(dir / e.name) == e.bytes);
  }

  const auto traj = split_lines(slurp(dir / "trajectory.csv"));
  REQUIRE(traj.size() >= 2);
  CHECK(traj[0].rfind("# provenance: config=", 0) == 0);
  CHECK(traj[1] == "t_s,v_re,v_im,i_re,i_im,z_r_pu,z_x_pu,in_zone1");
  // One row per simulation step.
  CHECK(traj.size() - 2 == static_cast<std::size_t>(std::floor(0.4 / 0.002 + 1e-9)));

  // Recompute z from the v and i columns and compare with the z columns.
  for (std::size_t k = 2; k < traj.size(); ++k) {
    std::istringstream row(traj[k]);
    std::string tok;
    std::vector<double> cols;
    while (std::getline(row, tok, ',')) cols.push_back(std::stod(tok));
    REQUIRE(cols.size() == 8);
    const Complex v{cols[1], cols[2]};
    const Complex i{cols[3], cols[4]};
    if (std::abs(i) == 0.0) continue;
    const Complex z = v / i;
    CHECK(std::abs(z.real() - cols[5]) < 1e-9);
    CHECK(std::abs(z.imag() - cols[6]) < 1e-9);
  }

  const auto ipfc = split_lines(slurp(dir / "ipfc.csv"));
  REQUIRE(ipfc.size() >= 2);
  CHECK(ipfc[1] ==
        "t_s,m1,alpha1_deg,m2,alpha2_deg,vdc_pu,pse1_pu,pse2_pu,pnet1_pu,qnet1_pu,pnet2_pu");

  // Re-emitting the same result is byte-identical.
  const fs::path dir2 = fs::temp_directory_path() / "ipfcsim_outputs_test2";
  fs::remove_all(dir2);
  emit_outputs(r, dir2.string(), true);
  for (const char* name : {"trajectory.csv", "ipfc.csv", "summary.txt", "plot.svg",
                           "manifest.txt"}) {
    CHECK(slurp(dir / name) == slurp(dir2 / name));
  }
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("hashing primitives") {
  CHECK(fnv1a64("") == 1469598103934665603ull);
  CHECK(fnv1a64("a") != fnv1a64("b"));
  CHECK(hex_u64(0) == "0000000000000000");
  CHECK(hex_u64(255) == "00000000000000ff");
}
