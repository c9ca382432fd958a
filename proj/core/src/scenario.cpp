#include "ipfcsim/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "ipfcsim/config.hpp"
#include "ipfcsim/errors.hpp"
#include "ipfcsim/outputs.hpp"
#include "ipfcsim/version.hpp"

namespace ipfcsim {

IpfcMode ipfc_mode_from_string(const std::string& s) {
  if (s == "off") return IpfcMode::off;
  if (s == "closed_loop") return IpfcMode::closed_loop;
  if (s == "preset_q_inject") return IpfcMode::preset_q_inject;
  if (s == "preset_q_absorb") return IpfcMode::preset_q_absorb;
  if (s == "preset_p_inject") return IpfcMode::preset_p_inject;
  if (s == "preset_p_absorb") return IpfcMode::preset_p_absorb;
  if (s == "freeze_on_fault") return IpfcMode::closed_loop;  // alias, flag set by caller
  throw ConfigError("unknown ipfc_mode '" + s + "'");
}

std::string to_string(IpfcMode m) {
  switch (m) {
    case IpfcMode::off: return "off";
    case IpfcMode::closed_loop: return "closed_loop";
    case IpfcMode::preset_q_inject: return "preset_q_inject";
    case IpfcMode::preset_q_absorb: return "preset_q_absorb";
    case IpfcMode::preset_p_inject: return "preset_p_inject";
    case IpfcMode::preset_p_absorb: return "preset_p_absorb";
  }
  return "?";
}

void Scenario::validate() const {
  if (!(dt > 0.0)) throw ConfigError("scenario: dt must be > 0");
  if (!(t_fault > 0.0 && t_fault < t_end)) {
    throw ConfigError("scenario: need 0 < t_fault < t_end");
  }
  if (dt > (t_end - t_fault) / 50.0) {
    throw ConfigError("scenario: dt too coarse, need >= 50 post-fault samples");
  }
  if (!(fault.n >= 0.0 && fault.n <= 1.0)) throw ConfigError("fault: n must be in [0,1]");
  if (fault.rf < 0.0) throw ConfigError("fault: rf must be >= 0");
  if (grid_text.empty()) throw ConfigError("scenario: no grid configured");
}

int Scenario::step_count() const { return static_cast<int>(std::floor(t_end / dt + 1e-9)); }

Scenario load_scenario(const Config& cfg, const std::string& base_dir) {
  Scenario s;
  s.config_text = cfg.text();
  s.name = cfg.get_string("scenario", "name", "scenario");
  s.grid_ref = cfg.get_string("scenario", "grid_file", "builtin:grid8");
  if (s.grid_ref == "builtin:grid8") {
    s.grid_text = builtin_grid8_text();
  } else {
    std::filesystem::path p(s.grid_ref);
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    s.grid_text = Config::parse_file(p.string()).text();
  }
  const std::string mode = cfg.get_string("scenario", "ipfc_mode", "off");
  s.mode = ipfc_mode_from_string(mode);
  s.freeze_on_fault = mode == "freeze_on_fault";
  s.t_fault = cfg.get_double("scenario", "t_fault", 3.0);
  s.t_end = cfg.get_double("scenario", "t_end", 3.5);
  s.dt = cfg.get_double("scenario", "dt", 0.001);
  s.seed = static_cast<std::uint64_t>(cfg.get_double("scenario", "seed", 0.0));

  s.fault.kind = fault_kind_from_string(cfg.get_string("fault", "kind", "three_phase"));
  s.fault.branch_id = cfg.get_string("fault", "branch", "5");
  s.fault.n = cfg.get_double("fault", "n", 0.8);
  s.fault.rf = cfg.get_double("fault", "rf", 0.0);

  auto& p = s.ipfc;
  p.master_branch = cfg.get_string("ipfc", "master_branch", p.master_branch);
  p.slave_branch = cfg.get_string("ipfc", "slave_branch", p.slave_branch);
  p.x_leakage = cfg.get_double("ipfc", "x_leakage", p.x_leakage);
  p.m_max = cfg.get_double("ipfc", "m_max", p.m_max);
  p.c_eq = cfg.get_double("ipfc", "c_eq", p.c_eq);
  p.vdc_floor = cfg.get_double("ipfc", "vdc_floor", p.vdc_floor);
  p.kp_p = cfg.get_double("ipfc", "kp_p", p.kp_p);
  p.ki_p = cfg.get_double("ipfc", "ki_p", p.ki_p);
  p.kp_q = cfg.get_double("ipfc", "kp_q", p.kp_q);
  p.ki_q = cfg.get_double("ipfc", "ki_q", p.ki_q);
  p.kp_vdc = cfg.get_double("ipfc", "kp_vdc", p.kp_vdc);
  p.ki_vdc = cfg.get_double("ipfc", "ki_vdc", p.ki_vdc);
  p.kp_p2 = cfg.get_double("ipfc", "kp_p2", p.kp_p2);
  p.ki_p2 = cfg.get_double("ipfc", "ki_p2", p.ki_p2);
  p.preset_magnitude = cfg.get_double("ipfc", "preset_magnitude", p.preset_magnitude);
  if (cfg.get_bool("ipfc", "freeze_on_fault", false)) s.freeze_on_fault = true;

  s.setpoints.p_ref1 = cfg.get_double("ipfc", "p_ref1", 0.0);
  s.setpoints.q_ref1 = cfg.get_double("ipfc", "q_ref1", 0.0);
  s.setpoints.p_ref2 = cfg.get_double("ipfc", "p_ref2", 0.0);
  s.setpoints.vdc_ref = cfg.get_double("ipfc", "vdc_ref", 1.0);

  s.relay_branch = cfg.get_string("relay", "branch", s.fault.branch_id);
  s.zone1_fraction = cfg.get_double("relay", "zone1_fraction", 0.8);

  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  const Config cfg = Config::parse_file(path);
  return load_scenario(cfg, std::filesystem::path(path).parent_path().string());
}

namespace {

struct LineProbe {
  double p = 0.0, q = 0.0;
  Phasor i_pos, v_pos;
};

LineProbe probe_line(const GridModel& m, const NetworkSolution& sol,
                     const std::string& branch_id) {
  auto [v, i] = relay_point_quantities(m, sol, branch_id, BranchEnd::from);
  LineProbe lp;
  const Complex s = Complex(v.pos) * std::conj(Complex(i.pos)) +
                    Complex(v.neg) * std::conj(Complex(i.neg)) +
                    Complex(v.zero) * std::conj(Complex(i.zero));
  lp.p = s.real();
  lp.q = s.imag();
  lp.i_pos = i.pos;
  lp.v_pos = v.pos;
  return lp;
}

PiState make_pi(double kp, double ki, double limit) {
  PiState pi;
  pi.kp = kp;
  pi.ki = ki;
  pi.lo = -limit;
  pi.hi = limit;
  return pi;
}

std::string make_provenance(const Scenario& s) {
  const std::uint64_t h = fnv1a64(s.config_text + "\n---grid---\n" + s.grid_text);
  std::ostringstream os;
  os << "config=" << hex_u64(h) << " version=" << kVersion << " seed=" << s.seed;
  return os.str();
}

}  // namespace

RunResult run_scenario(const Scenario& s) {
  s.validate();
  const GridModel base = load_grid_text(s.grid_text, s.grid_ref);

  RelaySettings relay;
  relay.protected_branch = s.relay_branch;
  relay.line_z1 = Phasor(base.branch(s.relay_branch).z1());
  relay.line_z0 = Phasor(base.branch(s.relay_branch).z0());
  relay.zone1_fraction = s.zone1_fraction;

  SplitInfo split;
  GridModel model = split_branch(base, s.fault.branch_id, s.fault.n, &split);

  const bool active = s.mode != IpfcMode::off;
  std::string master_seg = s.ipfc.master_branch;
  std::string slave_seg = s.ipfc.slave_branch;
  if (master_seg == s.fault.branch_id) master_seg = split.seg_from;
  if (slave_seg == s.fault.branch_id) slave_seg = split.seg_from;
  if (active) {
    if (master_seg == slave_seg) throw ConfigError("ipfc: master and slave on the same branch");
    model.branch(master_seg).x_device = s.ipfc.x_leakage;
    model.branch(slave_seg).x_device = s.ipfc.x_leakage;
  }
  const std::string relay_seg =
      s.relay_branch == s.fault.branch_id ? split.seg_from : s.relay_branch;

  NetworkSolver solver(std::move(model));
  const GridModel& net = solver.model();

  IpfcState st;
  st.master_pi_p = make_pi(s.ipfc.kp_p, s.ipfc.ki_p, s.ipfc.m_max);
  st.master_pi_q = make_pi(s.ipfc.kp_q, s.ipfc.ki_q, s.ipfc.m_max);
  st.slave_pi_vdc = make_pi(s.ipfc.kp_vdc, s.ipfc.ki_vdc, s.ipfc.m_max);
  st.slave_pi_p = make_pi(s.ipfc.kp_p2, s.ipfc.ki_p2, s.ipfc.m_max);
  st.m_max = s.ipfc.m_max;
  st.c_eq = s.ipfc.c_eq;
  st.vdc_floor = s.ipfc.vdc_floor;
  st.vdc = s.setpoints.vdc_ref;

  Complex v1_abs = 0.0, v2_abs = 0.0;  // active injection commands
  Complex u1{1.0, 0.0}, u2{1.0, 0.0};  // line-current direction memory
  constexpr double kCurrentFloor = 1e-9;
  // The command frame tracks the line current through a first-order filter.
  // An instantaneous frame plus the one-step actuation delay is an unstable
  // feedback once the series voltage rivals the loop drop: the injection
  // rotates the very current the next command aligns to.
  constexpr double kFrameBlend = 0.1;
  auto track = [kFrameBlend](Complex u, const Phasor& i, double floor_) {
    const double mag = Phasor(i).magnitude();
    if (mag <= floor_) return u;
    const Complex mix = u + kFrameBlend * (Complex(i) / mag - u);
    const double m = std::abs(mix);
    return m > 1e-12 ? mix / m : u;
  };

  RunResult out;
  out.scenario_name = s.name;
  out.relay = relay;
  out.provenance = make_provenance(s);
  out.trace.t_fault = s.t_fault;

  const int n_steps = s.step_count();
  for (int k = 0; k < n_steps; ++k) {
    const double t = k * s.dt;
    const bool faulted = t >= s.t_fault - 1e-12;

    std::vector<SeriesInjection> inj;
    if (active) {
      inj.push_back({master_seg, Phasor(v1_abs)});
      inj.push_back({slave_seg, Phasor(v2_abs)});
    }

    NetworkSolution sol;
    try {
      sol = faulted ? solver.solve_fault(s.fault.kind, split.aux_bus, s.fault.rf, inj)
                    : solver.solve_prefault(inj);
    } catch (const NumericError& e) {
      throw NumericError("step " + std::to_string(k) + " (t=" + format_g12(t) +
                         " s): " + e.what());
    }

    const LineProbe l1 = probe_line(net, sol, master_seg);
    const LineProbe l2 = probe_line(net, sol, slave_seg);

    auto [rv, ri] = relay_point_quantities(net, sol, relay_seg, BranchEnd::from);
    RelayTrace::Sample sample;
    sample.t = t;
    sample.m = apparent_impedance(rv, ri, relay, s.fault.kind);
    sample.in_zone1 = sample.m.measurable && zone1_check(sample.m.z_apparent, relay);
    out.trace.samples.push_back(sample);

    IpfcLogRow row;
    row.t = t;
    row.m1 = st.m1;
    row.alpha1_deg = st.alpha1;
    row.m2 = st.m2;
    row.alpha2_deg = st.alpha2;
    row.vdc = st.vdc;
    row.pse1 = st.pse1;
    row.pse2 = st.pse2;
    row.pnet1 = l1.p;
    row.qnet1 = l1.q;
    row.pnet2 = l2.p;
    out.ipfc_log.push_back(row);

    if (!active) continue;

    u1 = track(u1, l1.i_pos, kCurrentFloor);
    u2 = track(u2, l2.i_pos, kCurrentFloor);
    st.pse1 = (Complex(v1_abs) * std::conj(Complex(l1.i_pos))).real();
    st.pse2 = (Complex(v2_abs) * std::conj(Complex(l2.i_pos))).real();

    if (s.freeze_on_fault && faulted) continue;  // commands latched at prefault values

    const LineMeasurement meas1{l1.p, l1.q, l1.i_pos, l1.v_pos};
    const LineMeasurement meas2{l2.p, l2.q, l2.i_pos, l2.v_pos};

    switch (s.mode) {
      case IpfcMode::closed_loop:
        st = master_step(st, s.setpoints, meas1, s.dt);
        break;
      case IpfcMode::preset_q_inject:
        st.vd1 = 0.0;
        st.vq1 = s.ipfc.preset_magnitude;
        break;
      case IpfcMode::preset_q_absorb:
        st.vd1 = 0.0;
        st.vq1 = -s.ipfc.preset_magnitude;
        break;
      case IpfcMode::preset_p_inject:
        st.vd1 = s.ipfc.preset_magnitude;
        st.vq1 = 0.0;
        break;
      case IpfcMode::preset_p_absorb:
        st.vd1 = -s.ipfc.preset_magnitude;
        st.vq1 = 0.0;
        break;
      case IpfcMode::off:
        break;
    }
    if (s.mode != IpfcMode::closed_loop) {
      std::tie(st.m1, st.alpha1) = rect_to_polar(st.vd1, st.vq1);
    }
    // In the pure-injection study modes the slave's only job is holding the
    // DC link; track the line's own P so that loop stays quiet.
    IpfcSetpoints sp_slave = s.setpoints;
    if (s.mode != IpfcMode::closed_loop) sp_slave.p_ref2 = l2.p;
    st = slave_step(st, sp_slave, meas2, s.dt);
    st = dc_link_step(st, s.dt);
    if (st.vdc_floored) {
      throw NumericError("DC link collapsed below floor at step " + std::to_string(k) +
                         " (t=" + format_g12(t) + " s)");
    }

    v1_abs = Complex{st.vd1, st.vq1} * u1;
    v2_abs = Complex{st.vd2, st.vq2} * u2;
  }
  return out;
}

std::pair<RunResult, RunResult> run_pair(const Scenario& baseline, const Scenario& variant) {
  if (baseline.grid_text != variant.grid_text) {
    throw ConfigError("run_pair: scenarios use different grids");
  }
  const auto& f1 = baseline.fault;
  const auto& f2 = variant.fault;
  if (f1.kind != f2.kind || f1.branch_id != f2.branch_id || f1.n != f2.n || f1.rf != f2.rf) {
    throw ConfigError("run_pair: fault specifications differ");
  }
  if (baseline.t_fault != variant.t_fault || baseline.t_end != variant.t_end ||
      baseline.dt != variant.dt) {
    throw ConfigError("run_pair: timing differs");
  }
  if (baseline.relay_branch != variant.relay_branch ||
      baseline.zone1_fraction != variant.zone1_fraction) {
    throw ConfigError("run_pair: relay settings differ");
  }
  RunResult rb = run_scenario(baseline);
  RunResult rv = run_scenario(variant);
  rv.verdict = classify_reach(rb.trace, rv.trace, rv.relay);
  return {std::move(rb), std::move(rv)};
}

std::vector<Scenario> reproduce_paper_scenarios() {
  // Pure-mode presets around the paper's study case: bolted three-phase
  // fault at 80% of line 5, relay r12 at the line-5 sending end.
  std::vector<Scenario> out;
  const IpfcMode modes[] = {IpfcMode::off, IpfcMode::preset_q_inject, IpfcMode::preset_q_absorb,
                            IpfcMode::preset_p_inject, IpfcMode::preset_p_absorb};
  for (IpfcMode m : modes) {
    Scenario s;
    s.name = to_string(m);
    s.grid_ref = "builtin:grid8";
    s.grid_text = builtin_grid8_text();
    s.mode = m;
    s.fault = {FaultKind::three_phase, "5", 0.8, 0.0};
    s.t_fault = 3.0;
    s.t_end = 3.5;
    s.dt = 0.001;
    s.relay_branch = "5";
    s.config_text = "reproduce-paper:" + s.name;
    out.push_back(std::move(s));
  }
  return out;
}

ReproReport reproduce_paper(const std::string& out_dir, bool plot) {
  const std::vector<Scenario> scenarios = reproduce_paper_scenarios();
  const Scenario& baseline = scenarios.front();

  ReproReport rep;
  std::ostringstream os;
  os << "reproduction suite: bolted three-phase fault at n=0.8 on line 5\n";
  RunResult base_run = run_scenario(baseline);
  {
    ReachVerdict self = classify_reach(base_run.trace, base_run.trace, base_run.relay);
    ReproEntry e{IpfcMode::off, self, 0.0, 0.0, self.classification == ReachClass::nominal};
    rep.entries.push_back(e);
    emit_outputs(base_run, out_dir + "/off", plot);
    os << "  off              -> " << to_string(self.classification)
       << (e.as_expected ? "  [ok]" : "  [UNEXPECTED]") << "\n";
  }
  struct Expect {
    IpfcMode mode;
    ReachClass cls;
    bool x_axis;  // true: delta must show on X, false: on R
    double sign;  // required sign of the delta
  };
  const Expect expectations[] = {
      {IpfcMode::preset_q_inject, ReachClass::over_reach_tendency, true, -1.0},
      {IpfcMode::preset_q_absorb, ReachClass::under_reach_tendency, true, +1.0},
      {IpfcMode::preset_p_inject, ReachClass::over_reach_tendency, false, -1.0},
      {IpfcMode::preset_p_absorb, ReachClass::under_reach_tendency, false, +1.0},
  };
  for (const auto& ex : expectations) {
    const Scenario* sc = nullptr;
    for (const auto& s : scenarios) {
      if (s.mode == ex.mode) sc = &s;
    }
    RunResult run = run_scenario(*sc);
    run.verdict = classify_reach(base_run.trace, run.trace, run.relay);
    const ReachVerdict& v = *run.verdict;
    ReproEntry e;
    e.mode = ex.mode;
    e.verdict = v;
    e.d_r = v.z_with_ipfc.re - v.z_baseline.re;
    e.d_x = v.z_with_ipfc.im - v.z_baseline.im;
    const double delta = ex.x_axis ? e.d_x : e.d_r;
    e.as_expected = v.classification == ex.cls && delta * ex.sign > 0.0;
    rep.entries.push_back(e);
    emit_outputs(run, out_dir + "/" + to_string(ex.mode), plot);
    os << "  " << to_string(ex.mode) << (to_string(ex.mode).size() < 16 ? std::string(16 - to_string(ex.mode).size(), ' ') : " ")
       << " -> " << to_string(v.classification) << "  dR=" << format_g12(e.d_r)
       << " dX=" << format_g12(e.d_x) << (e.as_expected ? "  [ok]" : "  [UNEXPECTED]") << "\n";
  }
  rep.all_ok = true;
  for (const auto& e : rep.entries) rep.all_ok = rep.all_ok && e.as_expected;
  os << (rep.all_ok ? "direction matrix matches the expected pattern\n"
                    : "direction matrix DOES NOT match\n");
  rep.text = os.str();
  write_text_file(out_dir + "/report.txt", rep.text);
  return rep;
}

}  // namespace ipfcsim
