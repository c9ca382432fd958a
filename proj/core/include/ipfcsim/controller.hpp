#pragma once

#include <utility>

#include "ipfcsim/phasor.hpp"

namespace ipfcsim {

/// PI regulator with clamped output and back-calculation anti-windup: the
/// integrator is rewound whenever the output saturates, so one step after the
/// error changes sign the output leaves the limit.
struct PiState {
  double kp = 0.0;
  double ki = 0.0;        // 1/s
  double integrator = 0.0;
  double lo = -1e30;
  double hi = 1e30;

  double step(double error, double dt);
  /// Output the regulator would produce for zero error (its settled value).
  double held_output() const { return ki * integrator; }
};

struct IpfcSetpoints {
  double p_ref1 = 0.0;
  double q_ref1 = 0.0;
  double p_ref2 = 0.0;
  double vdc_ref = 1.0;
};

/// Power flow and current at the line a VSC compensates, measured at the
/// converter bus with current oriented into the line.
struct LineMeasurement {
  double p_net = 0.0;
  double q_net = 0.0;
  Phasor i_line;
  Phasor v_line;
};

/// Discrete-time state of the two-converter controller.
///
/// Commands (vd, vq) live in a frame aligned with the local line-current
/// phasor: vd is the in-phase component (real-power exchange with the line),
/// vq the 90-degrees-leading component (reactive exchange).  pse1/pse2 are
/// the real powers each VSC delivers to its line (positive = injecting).
struct IpfcState {
  PiState master_pi_p;    // P_net1 error -> vq1
  PiState master_pi_q;    // Q_net1 error -> vd1
  PiState slave_pi_vdc;   // DC-link error -> vd2
  PiState slave_pi_p;     // P_net2 error -> vq2

  double vdc = 1.0;
  double vd1 = 0.0, vq1 = 0.0;
  double vd2 = 0.0, vq2 = 0.0;
  double m1 = 0.0, alpha1 = 0.0;  // polar view of (vd1, vq1), degrees
  double m2 = 0.0, alpha2 = 0.0;
  double pse1 = 0.0, pse2 = 0.0;

  double m_max = 0.15;
  double c_eq = 0.2;      // DC energy-storage constant, p.u.-seconds
  double vdc_floor = 0.2;
  bool vdc_floored = false;
};

IpfcState master_step(IpfcState state, const IpfcSetpoints& sp, const LineMeasurement& meas1,
                      double dt);
IpfcState slave_step(IpfcState state, const IpfcSetpoints& sp, const LineMeasurement& meas2,
                     double dt);

/// DC-link energy balance: d(vdc^2)/dt = -2*(pse1+pse2)/c_eq (delivering real
/// power to the lines discharges the link).  Clamps at vdc_floor and sets
/// `vdc_floored`.
IpfcState dc_link_step(IpfcState state, double dt);

/// (p_se, q_se) = v_inject * conj(i_line); positive p_se means the VSC
/// delivers real power to the AC line.
std::pair<double, double> vsc_terminal_power(const Phasor& v_inject, const Phasor& i_line);

/// Components of v_inject along and 90 degrees ahead of i_line's direction.
/// Throws NumericError when |i_line| == 0.
std::pair<double, double> decompose_injection(const Phasor& v_inject, const Phasor& i_line);

/// Inverse of decompose_injection: v_p*u + v_q*(j*u) with u = i_line/|i_line|.
Phasor compose_injection(double v_p, double v_q, const Phasor& i_line);

}  // namespace ipfcsim
