#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "ipfcsim/phasor.hpp"

using namespace ipfcsim;

namespace {

double dist(const Phasor& a, const Phasor& b) {
  return std::abs(Complex(a) - Complex(b));
}

ThreePhaseSet random_set(std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  return {{d(rng), d(rng)}, {d(rng), d(rng)}, {d(rng), d(rng)}};
}

}  // namespace

TEST_CASE("phasor polar views") {
  const Phasor p = Phasor::from_polar_deg(2.0, 30.0);
  CHECK(p.magnitude() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.angle_deg() == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(Phasor(1.0, 0.0).angle_deg() == doctest::Approx(0.0));
  CHECK(Phasor(-1.0, 0.0).angle_deg() == doctest::Approx(180.0));
  CHECK(normalize_angle_deg(-180.0) == doctest::Approx(180.0));
  CHECK(normalize_angle_deg(540.0) == doctest::Approx(180.0));
  CHECK(normalize_angle_deg(-190.0) == doctest::Approx(170.0));
}

TEST_CASE("abc_to_012 on canonical sets") {
  const ThreePhaseSet balanced{Phasor::from_polar_deg(1.0, 0.0),
                               Phasor::from_polar_deg(1.0, -120.0),
                               Phasor::from_polar_deg(1.0, 120.0)};
  SequenceSet s = abc_to_012(balanced);
  CHECK(dist(s.pos, {1.0, 0.0}) < 1e-12);
  CHECK(s.neg.magnitude() < 1e-12);
  CHECK(s.zero.magnitude() < 1e-12);

  const ThreePhaseSet common{{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
  s = abc_to_012(common);
  CHECK(s.pos.magnitude() < 1e-12);
  CHECK(s.neg.magnitude() < 1e-12);
  CHECK(dist(s.zero, {1.0, 0.0}) < 1e-12);
}

TEST_CASE("seq_012_to_abc on canonical sets") {
  const ThreePhaseSet p = seq_012_to_abc({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
  CHECK(dist(p.a, Phasor::from_polar_deg(1.0, 0.0)) < 1e-12);
  CHECK(dist(p.b, Phasor::from_polar_deg(1.0, -120.0)) < 1e-12);
  CHECK(dist(p.c, Phasor::from_polar_deg(1.0, 120.0)) < 1e-12);

  const ThreePhaseSet z = seq_012_to_abc({{0, 0}, {0, 0}, {0, 0}});
  CHECK(z.a.magnitude() == 0.0);
  CHECK(z.b.magnitude() == 0.0);
  CHECK(z.c.magnitude() == 0.0);
}

TEST_CASE("fortescue round trip over 1000 random sets") {
  std::mt19937 rng(42);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const ThreePhaseSet in = random_set(rng);
    const ThreePhaseSet out = seq_012_to_abc(abc_to_012(in));
    worst = std::max({worst, dist(in.a, out.a), dist(in.b, out.b), dist(in.c, out.c)});
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("abc_to_012 matches the inverse-matrix oracle on random sets") {
  // Oracle: numerically invert the synthesis matrix [1 1 1; 1 a2 a; 1 a a2]
  // (columns zero/pos/neg) and apply it directly.
  const Complex a = fortescue_a();
  Eigen::Matrix3cd synth;
  synth << 1.0, 1.0, 1.0, 1.0, a * a, a, 1.0, a, a * a;
  const Eigen::Matrix3cd analysis = synth.inverse();

  std::mt19937 rng(7);
  for (int k = 0; k < 50; ++k) {
    const ThreePhaseSet in = random_set(rng);
    const Eigen::Vector3cd v(Complex(in.a), Complex(in.b), Complex(in.c));
    const Eigen::Vector3cd s012 = analysis * v;
    const SequenceSet got = abc_to_012(in);
    CHECK(std::abs(Complex(got.zero) - s012(0)) < 1e-12);
    CHECK(std::abs(Complex(got.pos) - s012(1)) < 1e-12);
    CHECK(std::abs(Complex(got.neg) - s012(2)) < 1e-12);
  }
}

TEST_CASE("abc_to_012 is linear") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    const ThreePhaseSet x = random_set(rng);
    const ThreePhaseSet y = random_set(rng);
    const Complex scale{d(rng), d(rng)};
    const ThreePhaseSet sum{Phasor(Complex(x.a) + Complex(y.a)),
                            Phasor(Complex(x.b) + Complex(y.b)),
                            Phasor(Complex(x.c) + Complex(y.c))};
    const SequenceSet ts = abc_to_012(sum);
    const SequenceSet tx = abc_to_012(x);
    const SequenceSet ty = abc_to_012(y);
    CHECK(std::abs(Complex(ts.pos) - Complex(tx.pos) - Complex(ty.pos)) < 1e-12);
    CHECK(std::abs(Complex(ts.neg) - Complex(tx.neg) - Complex(ty.neg)) < 1e-12);
    CHECK(std::abs(Complex(ts.zero) - Complex(tx.zero) - Complex(ty.zero)) < 1e-12);

    const ThreePhaseSet kx{Phasor(scale * Complex(x.a)), Phasor(scale * Complex(x.b)),
                           Phasor(scale * Complex(x.c))};
    const SequenceSet tk = abc_to_012(kx);
    CHECK(std::abs(Complex(tk.pos) - scale * Complex(tx.pos)) < 1e-12);
    CHECK(std::abs(Complex(tk.neg) - scale * Complex(tx.neg)) < 1e-12);
    CHECK(std::abs(Complex(tk.zero) - scale * Complex(tx.zero)) < 1e-12);
  }
}

TEST_CASE("rect_to_polar") {
  auto [m1, a1] = rect_to_polar(0.03, 0.04);
  CHECK(m1 == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(a1 == doctest::Approx(53.1301023542).epsilon(1e-9));

  auto [m2, a2] = rect_to_polar(1.0, 0.0);
  CHECK(m2 == doctest::Approx(1.0));
  CHECK(a2 == doctest::Approx(0.0));

  auto [m3, a3] = rect_to_polar(-1.0, 0.0);
  CHECK(m3 == doctest::Approx(1.0));
  CHECK(a3 == doctest::Approx(180.0));

  auto [m0, a0] = rect_to_polar(0.0, 0.0);
  CHECK(m0 == 0.0);
  CHECK(a0 == 0.0);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> mag(0.01, 3.0);
  std::uniform_real_distribution<double> ang(-179.999, 180.0);
  for (int k = 0; k < 100; ++k) {
    const double m = mag(rng);
    const double th = ang(rng);
    const double rad = th * M_PI / 180.0;
    auto [mm, aa] = rect_to_polar(m * std::cos(rad), m * std::sin(rad));
    CHECK(mm == doctest::Approx(m).epsilon(1e-9));
    CHECK(aa == doctest::Approx(th).epsilon(1e-9));
  }
}
