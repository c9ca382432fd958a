#pragma once

#include <string>
#include <vector>

#include "ipfcsim/fault.hpp"
#include "ipfcsim/phasor.hpp"

namespace ipfcsim {

/// Plain impedance-circle distance element, Zone 1 only.
struct RelaySettings {
  std::string protected_branch;
  Phasor line_z1;  // full protected-line positive-sequence impedance
  Phasor line_z0;
  double zone1_fraction = 0.8;
  double current_floor = 1e-6;  // below this the fault loop is unmeasurable

  Complex k0() const {  // zero-sequence compensation factor (Z0 - Z1)/Z1
    return (Complex(line_z0) - Complex(line_z1)) / Complex(line_z1);
  }
};

struct RelayMeasurement {
  Phasor v_s;       // measuring-loop voltage
  Phasor i_s;       // measuring-loop phase (or phase-pair) current
  Phasor i_0;       // zero-sequence current
  Phasor i_relay;   // compensated relaying current
  Phasor z_apparent;
  bool measurable = true;
};

struct RelayTrace {
  struct Sample {
    double t = 0.0;
    RelayMeasurement m;
    bool in_zone1 = false;
  };
  std::vector<Sample> samples;
  double t_fault = -1.0;  // < 0 when no fault occurs in the trace
};

enum class ReachClass { nominal, over_reach_tendency, under_reach_tendency };

std::string to_string(ReachClass c);

struct ReachVerdict {
  ReachClass classification = ReachClass::nominal;
  Phasor z_baseline;   // settled-window median impedance, componentwise
  Phasor z_with_ipfc;
  bool zone_decision_baseline = false;
  bool zone_decision_ipfc = false;
};

/// Apparent impedance of the measuring loop selected by the fault kind:
/// ground loop (phase a with k0 compensation) for single-line-ground, the
/// faulted phase pair (b-c) for every other kind.  For balanced conditions
/// the pair loop reduces to v_pos/i_pos.
RelayMeasurement apparent_impedance(const SequenceSet& v, const SequenceSet& i,
                                    const RelaySettings& settings, FaultKind kind);

/// Z_pq = z_apparent - n*Z1: the series-device contribution (analysis use,
/// the ground-truth n comes from the harness).
Phasor injected_impedance(const Phasor& z_apparent, double n, const Phasor& line_z1);

/// Inside-or-on the Zone-1 circle (boundary inclusive).
bool zone1_check(const Phasor& z, const RelaySettings& settings);

/// Compare settled post-fault windows (median R and X over the last
/// `window_frac` of samples) and classify the reach tendency; the verdict
/// follows the dominant component change, normalized by |z_baseline|.
ReachVerdict classify_reach(const RelayTrace& baseline, const RelayTrace& with_ipfc,
                            const RelaySettings& settings, double tolerance = 0.02,
                            double window_frac = 0.2);

}  // namespace ipfcsim
