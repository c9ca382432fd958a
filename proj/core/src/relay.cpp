#include "ipfcsim/relay.hpp"

#include <algorithm>
#include <cmath>

#include "ipfcsim/errors.hpp"

namespace ipfcsim {

std::string to_string(ReachClass c) {
  switch (c) {
    case ReachClass::nominal: return "nominal";
    case ReachClass::over_reach_tendency: return "over_reach_tendency";
    case ReachClass::under_reach_tendency: return "under_reach_tendency";
  }
  return "?";
}

RelayMeasurement apparent_impedance(const SequenceSet& v, const SequenceSet& i,
                                    const RelaySettings& settings, FaultKind kind) {
  const ThreePhaseSet vp = seq_012_to_abc(v);
  const ThreePhaseSet ip = seq_012_to_abc(i);

  RelayMeasurement m;
  m.i_0 = i.zero;
  if (kind == FaultKind::single_line_ground) {
    // Ground loop: Z = Va / (Ia + k0*I0).
    m.v_s = vp.a;
    m.i_s = ip.a;
    m.i_relay = Phasor(Complex(ip.a) + settings.k0() * Complex(i.zero));
  } else {
    // Phase loop over the faulted pair (b-c); equals v1/i1 when balanced.
    m.v_s = Phasor(Complex(vp.b) - Complex(vp.c));
    m.i_s = Phasor(Complex(ip.b) - Complex(ip.c));
    m.i_relay = m.i_s;
  }
  if (m.i_relay.magnitude() <= settings.current_floor) {
    m.measurable = false;
    m.z_apparent = {0.0, 0.0};
    return m;
  }
  m.z_apparent = Phasor(Complex(m.v_s) / Complex(m.i_relay));
  return m;
}

Phasor injected_impedance(const Phasor& z_apparent, double n, const Phasor& line_z1) {
  return Phasor(Complex(z_apparent) - n * Complex(line_z1));
}

bool zone1_check(const Phasor& z, const RelaySettings& settings) {
  return z.magnitude() <= settings.zone1_fraction * settings.line_z1.magnitude();
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Phasor window_median_z(const RelayTrace& trace, double window_frac) {
  const size_t n = trace.samples.size();
  const size_t w = static_cast<size_t>(std::floor(n * window_frac));
  if (w < 5) {
    throw ConfigError("relay trace too short for a settled window (need >= 25 samples)");
  }
  std::vector<double> rs, xs;
  for (size_t k = n - w; k < n; ++k) {
    const auto& s = trace.samples[k];
    if (!s.m.measurable) continue;
    rs.push_back(s.m.z_apparent.re);
    xs.push_back(s.m.z_apparent.im);
  }
  if (rs.size() < 5) throw ConfigError("settled window has too few measurable samples");
  return {median(rs), median(xs)};
}

}  // namespace

ReachVerdict classify_reach(const RelayTrace& baseline, const RelayTrace& with_ipfc,
                            const RelaySettings& settings, double tolerance,
                            double window_frac) {
  ReachVerdict v;
  v.z_baseline = window_median_z(baseline, window_frac);
  v.z_with_ipfc = window_median_z(with_ipfc, window_frac);
  v.zone_decision_baseline = zone1_check(v.z_baseline, settings);
  v.zone_decision_ipfc = zone1_check(v.z_with_ipfc, settings);

  const double scale = v.z_baseline.magnitude();
  if (scale == 0.0) throw NumericError("baseline settled impedance is zero");
  const double dr = (v.z_with_ipfc.re - v.z_baseline.re) / scale;
  const double dx = (v.z_with_ipfc.im - v.z_baseline.im) / scale;
  const double dominant = std::abs(dx) >= std::abs(dr) ? dx : dr;
  if (std::abs(dominant) <= tolerance) {
    v.classification = ReachClass::nominal;
  } else if (dominant < 0.0) {
    v.classification = ReachClass::over_reach_tendency;
  } else {
    v.classification = ReachClass::under_reach_tendency;
  }
  return v;
}

}  // namespace ipfcsim
