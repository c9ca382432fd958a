#include "ipfcsim/controller.hpp"

#include <algorithm>
#include <cmath>

#include "ipfcsim/errors.hpp"

namespace ipfcsim {

double PiState::step(double error, double dt) {
  integrator += error * dt;
  double u = kp * error + ki * integrator;
  if (u > hi) {
    u = hi;
    if (ki > 0.0) integrator = (u - kp * error) / ki;
  } else if (u < lo) {
    u = lo;
    if (ki > 0.0) integrator = (u - kp * error) / ki;
  }
  return u;
}

namespace {

// Keep the command magnitude within the converter ceiling; scales both axes.
void clamp_vector(double m_max, double& vd, double& vq) {
  const double m = std::hypot(vd, vq);
  if (m > m_max && m > 0.0) {
    const double s = m_max / m;
    vd *= s;
    vq *= s;
  }
}

}  // namespace

IpfcState master_step(IpfcState state, const IpfcSetpoints& sp, const LineMeasurement& meas1,
                      double dt) {
  if (!(dt > 0.0)) throw ConfigError("controller step requires dt > 0");
  // Quadrature voltage steers line active power, in-phase voltage steers
  // line reactive power (series-compensation coupling).
  state.vq1 = state.master_pi_p.step(sp.p_ref1 - meas1.p_net, dt);
  state.vd1 = state.master_pi_q.step(sp.q_ref1 - meas1.q_net, dt);
  clamp_vector(state.m_max, state.vd1, state.vq1);
  std::tie(state.m1, state.alpha1) = rect_to_polar(state.vd1, state.vq1);
  return state;
}

IpfcState slave_step(IpfcState state, const IpfcSetpoints& sp, const LineMeasurement& meas2,
                     double dt) {
  if (!(dt > 0.0)) throw ConfigError("controller step requires dt > 0");
  // A low DC link must drive real-power absorption from line 2, so the
  // d-axis command follows the negated DC-voltage error.
  state.vd2 = state.slave_pi_vdc.step(state.vdc - sp.vdc_ref, dt);
  state.vq2 = state.slave_pi_p.step(sp.p_ref2 - meas2.p_net, dt);
  clamp_vector(state.m_max, state.vd2, state.vq2);
  std::tie(state.m2, state.alpha2) = rect_to_polar(state.vd2, state.vq2);
  return state;
}

IpfcState dc_link_step(IpfcState state, double dt) {
  if (!(state.vdc > 0.0)) throw NumericError("dc_link_step requires vdc > 0");
  const double p_into_link = -(state.pse1 + state.pse2);
  double e = state.vdc * state.vdc + 2.0 * p_into_link * dt / state.c_eq;
  const double floor2 = state.vdc_floor * state.vdc_floor;
  if (e < floor2) {
    e = floor2;
    state.vdc_floored = true;
  }
  state.vdc = std::sqrt(e);
  return state;
}

std::pair<double, double> vsc_terminal_power(const Phasor& v_inject, const Phasor& i_line) {
  if (!v_inject.is_finite() || !i_line.is_finite()) {
    throw ConfigError("non-finite input to vsc_terminal_power");
  }
  const Complex s = Complex(v_inject) * std::conj(Complex(i_line));
  return {s.real(), s.imag()};
}

std::pair<double, double> decompose_injection(const Phasor& v_inject, const Phasor& i_line) {
  const double mag = i_line.magnitude();
  if (mag == 0.0) {
    throw NumericError("decompose_injection undefined for zero line current");
  }
  const Complex u = Complex(i_line) / mag;
  const Complex w = Complex(v_inject) * std::conj(u);
  return {w.real(), w.imag()};
}

Phasor compose_injection(double v_p, double v_q, const Phasor& i_line) {
  const double mag = i_line.magnitude();
  if (mag == 0.0) {
    throw NumericError("compose_injection undefined for zero line current");
  }
  const Complex u = Complex(i_line) / mag;
  return Phasor(Complex{v_p, v_q} * u);
}

}  // namespace ipfcsim
