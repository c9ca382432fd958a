#include "ipfcsim/phasor.hpp"

#include <cmath>
#include <numbers>

#include "ipfcsim/errors.hpp"

namespace ipfcsim {

namespace {
constexpr double kDegPerRad = 180.0 / std::numbers::pi;

void require_finite(const Phasor& p, const char* what) {
  if (!p.is_finite()) {
    throw ConfigError(std::string("non-finite phasor component in ") + what);
  }
}
}  // namespace

double Phasor::magnitude() const { return std::hypot(re, im); }

double Phasor::angle_deg() const {
  if (re == 0.0 && im == 0.0) return 0.0;
  return normalize_angle_deg(std::atan2(im, re) * kDegPerRad);
}

bool Phasor::is_finite() const { return std::isfinite(re) && std::isfinite(im); }

Phasor Phasor::from_polar_deg(double magnitude, double angle_deg) {
  const double rad = angle_deg / kDegPerRad;
  return {magnitude * std::cos(rad), magnitude * std::sin(rad)};
}

double normalize_angle_deg(double deg) {
  deg = std::fmod(deg, 360.0);
  if (deg <= -180.0) deg += 360.0;
  if (deg > 180.0) deg -= 360.0;
  return deg;
}

Complex fortescue_a() { return Phasor::from_polar_deg(1.0, 120.0); }

SequenceSet abc_to_012(const ThreePhaseSet& p) {
  require_finite(p.a, "abc_to_012");
  require_finite(p.b, "abc_to_012");
  require_finite(p.c, "abc_to_012");
  const Complex a = fortescue_a();
  const Complex a2 = a * a;
  const Complex va = p.a, vb = p.b, vc = p.c;
  SequenceSet s;
  s.pos = (va + a * vb + a2 * vc) / 3.0;
  s.neg = (va + a2 * vb + a * vc) / 3.0;
  s.zero = (va + vb + vc) / 3.0;
  return s;
}

ThreePhaseSet seq_012_to_abc(const SequenceSet& s) {
  require_finite(s.pos, "seq_012_to_abc");
  require_finite(s.neg, "seq_012_to_abc");
  require_finite(s.zero, "seq_012_to_abc");
  const Complex a = fortescue_a();
  const Complex a2 = a * a;
  const Complex v1 = s.pos, v2 = s.neg, v0 = s.zero;
  ThreePhaseSet p;
  p.a = v0 + v1 + v2;
  p.b = v0 + a2 * v1 + a * v2;
  p.c = v0 + a * v1 + a2 * v2;
  return p;
}

std::pair<double, double> rect_to_polar(double d, double q) {
  if (!std::isfinite(d) || !std::isfinite(q)) {
    throw ConfigError("non-finite input to rect_to_polar");
  }
  const Phasor p{d, q};
  return {p.magnitude(), p.angle_deg()};
}

}  // namespace ipfcsim
