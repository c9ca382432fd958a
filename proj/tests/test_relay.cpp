#include <doctest.h>

#include <random>

#include "ipfcsim/errors.hpp"
#include "ipfcsim/fault.hpp"
#include "ipfcsim/grid.hpp"
#include "ipfcsim/relay.hpp"

using namespace ipfcsim;

namespace {

RelaySettings line5_settings() {
  const GridModel g = default_grid8();
  RelaySettings s;
  s.protected_branch = "5";
  s.line_z1 = Phasor(g.branch("5").z1());
  s.line_z0 = Phasor(g.branch("5").z0());
  return s;
}

RelayTrace flat_trace(const Phasor& z, int n = 100) {
  RelayTrace t;
  for (int k = 0; k < n; ++k) {
    RelayTrace::Sample s;
    s.t = k * 0.001;
    s.m.z_apparent = z;
    s.m.measurable = true;
    t.samples.push_back(s);
  }
  return t;
}

}  // namespace

TEST_CASE("apparent impedance recovers a synthetic loop impedance") {
  const RelaySettings s = line5_settings();
  const Complex z{0.0015, 0.012};
  // Balanced positive-sequence pair: v = z * i in every loop.
  const SequenceSet i{{0.8, -0.3}, {0, 0}, {0, 0}};
  const SequenceSet v{Phasor(z * Complex(i.pos)), {0, 0}, {0, 0}};
  const RelayMeasurement m = apparent_impedance(v, i, s, FaultKind::three_phase);
  REQUIRE(m.measurable);
  CHECK(std::abs(Complex(m.z_apparent) - z) < 1e-12);

  // Zero numerator: close-in bolted fault reads the origin.
  const SequenceSet v0{{0, 0}, {0, 0}, {0, 0}};
  const RelayMeasurement m0 = apparent_impedance(v0, i, s, FaultKind::three_phase);
  CHECK(m0.z_apparent.magnitude() == 0.0);

  // Dead loop: below the current floor the sample is unmeasurable.
  const SequenceSet i0{{0, 0}, {0, 0}, {0, 0}};
  CHECK_FALSE(apparent_impedance(v, i0, s, FaultKind::three_phase).measurable);
}

TEST_CASE("ground loop applies zero-sequence compensation") {
  const GridModel g = default_grid8();
  const RelaySettings s = line5_settings();
  const FaultSpec spec{FaultKind::single_line_ground, "5", 0.6, 0.0};
  const FaultResult fr = apply_fault(g, spec, {});
  auto [v, i] = relay_point_quantities(fr.split_model, fr.solution, fr.split.seg_from,
                                       BranchEnd::from);
  const RelayMeasurement m = apparent_impedance(v, i, s, spec.kind);
  REQUIRE(m.measurable);
  const Complex expect = 0.6 * g.branch("5").z1();
  CHECK(std::abs(Complex(m.z_apparent) - expect) < 1e-8);
  CHECK(std::abs(Complex(m.i_relay) - (Complex(m.i_s) + s.k0() * Complex(m.i_0))) < 1e-12);
}

TEST_CASE("phase-pair loop reads the fault distance for unbalanced phase faults") {
  const GridModel g = default_grid8();
  const RelaySettings s = line5_settings();
  for (FaultKind k : {FaultKind::line_line, FaultKind::double_line_ground}) {
    const FaultSpec spec{k, "5", 0.35, 0.0};
    const FaultResult fr = apply_fault(g, spec, {});
    auto [v, i] = relay_point_quantities(fr.split_model, fr.solution, fr.split.seg_from,
                                         BranchEnd::from);
    const RelayMeasurement m = apparent_impedance(v, i, s, k);
    REQUIRE(m.measurable);
    CHECK(std::abs(Complex(m.z_apparent) - 0.35 * g.branch("5").z1()) < 1e-8);
  }
}

TEST_CASE("scale invariance of the measuring loop") {
  const RelaySettings s = line5_settings();
  const SequenceSet i{{0.8, -0.3}, {0.1, 0.05}, {0.02, -0.04}};
  const SequenceSet v{{0.5, 0.2}, {-0.03, 0.01}, {0.004, 0.009}};
  const Complex k{1.7, -2.3};
  auto scale = [&](const SequenceSet& x) {
    return SequenceSet{Phasor(k * Complex(x.pos)), Phasor(k * Complex(x.neg)),
                       Phasor(k * Complex(x.zero))};
  };
  for (FaultKind kind : {FaultKind::three_phase, FaultKind::single_line_ground,
                         FaultKind::line_line}) {
    const RelayMeasurement a = apparent_impedance(v, i, s, kind);
    const RelayMeasurement b = apparent_impedance(scale(v), scale(i), s, kind);
    REQUIRE(a.measurable);
    REQUIRE(b.measurable);
    CHECK(std::abs(Complex(a.z_apparent) - Complex(b.z_apparent)) < 1e-12);
    CHECK(zone1_check(a.z_apparent, s) == zone1_check(b.z_apparent, s));
  }
}

TEST_CASE("injected impedance decomposition") {
  const RelaySettings s = line5_settings();
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> d(-0.05, 0.05);
  std::uniform_real_distribution<double> nd(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Phasor z{d(rng), d(rng)};
    const double n = nd(rng);
    const Phasor zpq = injected_impedance(z, n, s.line_z1);
    const Complex back = n * Complex(s.line_z1) + Complex(zpq);
    CHECK(std::abs(back - Complex(z)) < 1e-12);
  }
  // Idle device: the whole measurement is the line section.
  const Phasor z = Phasor(0.8 * Complex(s.line_z1));
  const Phasor zpq = injected_impedance(z, 0.8, s.line_z1);
  CHECK(zpq.magnitude() < 1e-8);
}

TEST_CASE("zone-1 boundary") {
  const RelaySettings s = line5_settings();
  const Phasor boundary = Phasor(0.8 * Complex(s.line_z1));
  CHECK(zone1_check(boundary, s));
  CHECK(zone1_check({0.0, 0.0}, s));
  const Phasor outside = Phasor(1.01 * 0.8 * Complex(s.line_z1));
  CHECK_FALSE(zone1_check(outside, s));
}

TEST_CASE("reach classification") {
  const RelaySettings s = line5_settings();
  const Phasor z80 = Phasor(0.8 * Complex(s.line_z1));
  const RelayTrace base = flat_trace(z80);

  CHECK(classify_reach(base, base, s).classification == ReachClass::nominal);

  RelayTrace lower = flat_trace({z80.re, z80.im - 0.1 * z80.magnitude()});
  CHECK(classify_reach(base, lower, s).classification == ReachClass::over_reach_tendency);

  RelayTrace higher = flat_trace({z80.re, z80.im + 0.1 * z80.magnitude()});
  CHECK(classify_reach(base, higher, s).classification == ReachClass::under_reach_tendency);

  // R-dominant change classifies on the R axis even though |z| barely moves.
  RelayTrace rshift = flat_trace({z80.re - 0.1 * z80.magnitude(), z80.im});
  CHECK(classify_reach(base, rshift, s).classification == ReachClass::over_reach_tendency);

  // Inside the tolerance band nothing is flagged.
  RelayTrace tiny = flat_trace({z80.re, z80.im + 0.01 * z80.magnitude()});
  CHECK(classify_reach(base, tiny, s).classification == ReachClass::nominal);

  CHECK_THROWS_AS(classify_reach(flat_trace(z80, 10), base, s), ConfigError);
}
