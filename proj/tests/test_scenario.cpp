#include <doctest.h>

#include <cmath>

#include "ipfcsim/config.hpp"
#include "ipfcsim/errors.hpp"
#include "ipfcsim/outputs.hpp"
#include "ipfcsim/scenario.hpp"

using namespace ipfcsim;

namespace {

Scenario off_scenario() {
  Scenario s;
  s.name = "unit-off";
  s.grid_text = builtin_grid8_text();
  s.mode = IpfcMode::off;
  s.fault = {FaultKind::three_phase, "5", 0.8, 0.0};
  s.t_fault = 0.5;
  s.t_end = 1.0;
  s.dt = 0.001;
  s.relay_branch = "5";
  s.config_text = "unit-off";
  return s;
}

// Natural (uncompensated) prefault flows on the two coupled lines, read off a
// short IPFC-off run.
struct NaturalFlows {
  double p1, q1, p2;
};

NaturalFlows natural_flows() {
  Scenario s = off_scenario();
  s.t_fault = 0.1;
  s.t_end = 0.2;
  const RunResult r = run_scenario(s);
  const IpfcLogRow& row = r.ipfc_log.front();
  return {row.pnet1, row.qnet1, row.pnet2};
}

}  // namespace

TEST_CASE("scenario parsing and validation") {
  const std::string text =
      "[scenario]\n"
      "name = demo\n"
      "ipfc_mode = preset_q_inject\n"
      "t_fault = 2\n"
      "t_end = 2.5\n"
      "dt = 0.001\n"
      "[fault]\n"
      "kind = single_line_ground\n"
      "branch = 3\n"
      "n = 0.4\n"
      "rf = 0.01\n"
      "[ipfc]\n"
      "preset_magnitude = 0.03\n"
      "[relay]\n"
      "zone1_fraction = 0.85\n";
  const Scenario s = load_scenario(Config::parse(text), "");
  CHECK(s.name == "demo");
  CHECK(s.mode == IpfcMode::preset_q_inject);
  CHECK(s.fault.kind == FaultKind::single_line_ground);
  CHECK(s.fault.branch_id == "3");
  CHECK(s.fault.n == doctest::Approx(0.4));
  CHECK(s.fault.rf == doctest::Approx(0.01));
  CHECK(s.ipfc.preset_magnitude == doctest::Approx(0.03));
  CHECK(s.zone1_fraction == doctest::Approx(0.85));
  CHECK(s.relay_branch == "3");  // defaults to the faulted branch
  CHECK(s.step_count() == 2500);

  Scenario bad = s;
  bad.t_fault = 3.0;  // past t_end
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = s;
  bad.dt = 0.1;  // fewer than 50 post-fault samples
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(ipfc_mode_from_string("bogus"), ConfigError);
}

TEST_CASE("off-mode run settles on the fault section impedance") {
  const Scenario s = off_scenario();
  const RunResult r = run_scenario(s);
  CHECK(r.trace.samples.size() == static_cast<std::size_t>(s.step_count()));
  for (std::size_t k = 1; k < r.trace.samples.size(); ++k) {
    CHECK(r.trace.samples[k].t > r.trace.samples[k - 1].t);
  }

  const auto& last = r.trace.samples.back();
  REQUIRE(last.m.measurable);
  CHECK(std::abs(Complex(last.m.z_apparent) - Complex{0.00176, 0.016}) < 1e-6);
  CHECK(last.in_zone1);

  // Prefault the loop sees the whole system: far outside zone 1.
  const auto& first = r.trace.samples.front();
  REQUIRE(first.m.measurable);
  CHECK_FALSE(first.in_zone1);

  // Determinism: a second identical run reproduces every sample bit-exactly.
  const RunResult r2 = run_scenario(s);
  REQUIRE(r2.trace.samples.size() == r.trace.samples.size());
  for (std::size_t k = 0; k < r.trace.samples.size(); ++k) {
    CHECK(r.trace.samples[k].m.z_apparent.re == r2.trace.samples[k].m.z_apparent.re);
    CHECK(r.trace.samples[k].m.z_apparent.im == r2.trace.samples[k].m.z_apparent.im);
  }
  CHECK(r.provenance == r2.provenance);
}

TEST_CASE("closed loop regulates the coupled lines and the dc link") {
  const NaturalFlows nat = natural_flows();

  Scenario s = off_scenario();
  s.name = "unit-closed";
  s.mode = IpfcMode::closed_loop;
  s.t_fault = 3.0;
  s.t_end = 3.2;
  s.setpoints.p_ref1 = nat.p1 + 0.05;
  s.setpoints.q_ref1 = nat.q1;
  s.setpoints.p_ref2 = nat.p2 - 0.04;
  s.setpoints.vdc_ref = 1.0;
  const RunResult r = run_scenario(s);

  // Examine the last prefault window (fault hits at 3.0 s).
  const int k_fault = static_cast<int>(s.t_fault / s.dt);
  const IpfcLogRow& settled = r.ipfc_log[k_fault - 1];
  CHECK(std::abs(settled.pnet1 - s.setpoints.p_ref1) < 0.01 * std::abs(s.setpoints.p_ref1));
  CHECK(std::abs(settled.pnet2 - s.setpoints.p_ref2) < 0.01 * std::abs(s.setpoints.p_ref2));
  CHECK(std::abs(settled.pse1 + settled.pse2) <= 1e-3);
  CHECK(std::abs(settled.vdc - s.setpoints.vdc_ref) <= 0.005 * s.setpoints.vdc_ref);
}

TEST_CASE("run_pair guards and verdicts") {
  const Scenario base = off_scenario();
  auto [rb, rv] = run_pair(base, base);
  REQUIRE(rv.verdict.has_value());
  CHECK(rv.verdict->classification == ReachClass::nominal);

  Scenario different = base;
  different.fault.n = 0.5;
  CHECK_THROWS_AS(run_pair(base, different), ConfigError);

  Scenario slower = base;
  slower.dt = 0.0005;
  CHECK_THROWS_AS(run_pair(base, slower), ConfigError);
}

TEST_CASE("preset pairs reproduce the reach directions") {
  Scenario base = off_scenario();
  base.t_fault = 1.0;
  base.t_end = 1.3;

  auto run_mode = [&](IpfcMode m) {
    Scenario v = base;
    v.mode = m;
    v.name = to_string(m);
    auto [rb, rv] = run_pair(base, v);
    return *rv.verdict;
  };

  const ReachVerdict qi = run_mode(IpfcMode::preset_q_inject);
  CHECK(qi.classification == ReachClass::over_reach_tendency);
  CHECK(qi.z_with_ipfc.im < qi.z_baseline.im);

  const ReachVerdict qa = run_mode(IpfcMode::preset_q_absorb);
  CHECK(qa.classification == ReachClass::under_reach_tendency);
  CHECK(qa.z_with_ipfc.im > qa.z_baseline.im);

  const ReachVerdict pi = run_mode(IpfcMode::preset_p_inject);
  CHECK(pi.classification == ReachClass::over_reach_tendency);
  CHECK(pi.z_with_ipfc.re < pi.z_baseline.re);

  const ReachVerdict pa = run_mode(IpfcMode::preset_p_absorb);
  CHECK(pa.classification == ReachClass::under_reach_tendency);
  CHECK(pa.z_with_ipfc.re > pa.z_baseline.re);
}

TEST_CASE("freeze-on-fault latches the injection commands") {
  Scenario s = off_scenario();
  s.mode = IpfcMode::preset_q_inject;
  s.t_fault = 1.0;
  s.t_end = 1.2;
  s.freeze_on_fault = true;
  const RunResult r = run_scenario(s);
  const int k_fault = static_cast<int>(s.t_fault / s.dt);
  // Commands latch at their last prefault values; every faulted row repeats
  // the first faulted row exactly.
  const IpfcLogRow& frozen = r.ipfc_log[k_fault];
  const IpfcLogRow& after = r.ipfc_log.back();
  CHECK(after.m1 == frozen.m1);
  CHECK(after.alpha1_deg == frozen.alpha1_deg);
  CHECK(after.m2 == frozen.m2);
  CHECK(after.alpha2_deg == frozen.alpha2_deg);
}
