#pragma once

#include <complex>
#include <utility>

namespace ipfcsim {

using Complex = std::complex<double>;

/// Fundamental-frequency phasor in per-unit.  Thin value wrapper around a
/// rectangular complex number with polar views in degrees.  API angles are
/// degrees, normalized to (-180, 180]; internal math is radians.
struct Phasor {
  double re = 0.0;
  double im = 0.0;

  constexpr Phasor() = default;
  constexpr Phasor(double r, double i) : re(r), im(i) {}
  Phasor(const Complex& c) : re(c.real()), im(c.imag()) {}
  operator Complex() const { return {re, im}; }

  double magnitude() const;
  double angle_deg() const;
  bool is_finite() const;

  static Phasor from_polar_deg(double magnitude, double angle_deg);
};

/// Phase-domain a/b/c triple.  Unbalanced sets are legal.
struct ThreePhaseSet {
  Phasor a, b, c;
};

/// Symmetrical components: positive (1), negative (2), zero (0).
struct SequenceSet {
  Phasor pos, neg, zero;
};

// Fortescue transform, power-variant 1/3 scaling:
//   V1 = (Va + a*Vb + a^2*Vc)/3,  V2 = (Va + a^2*Vb + a*Vc)/3,
//   V0 = (Va + Vb + Vc)/3,  with a = 1 /_ 120 deg.
SequenceSet abc_to_012(const ThreePhaseSet& p);
ThreePhaseSet seq_012_to_abc(const SequenceSet& s);

/// (magnitude, angle in degrees); (0,0) maps to (0, 0 deg).
std::pair<double, double> rect_to_polar(double d, double q);

/// Normalize an angle in degrees to (-180, 180].
double normalize_angle_deg(double deg);

/// The rotation operator a = 1 /_ 120 deg.
Complex fortescue_a();

}  // namespace ipfcsim
