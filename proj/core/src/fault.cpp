#include "ipfcsim/fault.hpp"

#include <cmath>

#include "ipfcsim/errors.hpp"

namespace ipfcsim {

FaultKind fault_kind_from_string(const std::string& s) {
  if (s == "three_phase") return FaultKind::three_phase;
  if (s == "single_line_ground") return FaultKind::single_line_ground;
  if (s == "line_line") return FaultKind::line_line;
  if (s == "double_line_ground") return FaultKind::double_line_ground;
  throw ConfigError("unknown fault kind '" + s + "'");
}

std::string to_string(FaultKind k) {
  switch (k) {
    case FaultKind::three_phase: return "three_phase";
    case FaultKind::single_line_ground: return "single_line_ground";
    case FaultKind::line_line: return "line_line";
    case FaultKind::double_line_ground: return "double_line_ground";
  }
  return "?";
}

NetworkSolver::NetworkSolver(GridModel model)
    : model_(std::move(model)), adm_(build_sequence_admittance(model_)) {
  Eigen::FullPivLU<Eigen::MatrixXcd> check_pos(adm_.y_pos);
  if (!check_pos.isInvertible()) {
    throw NumericError("positive-sequence admittance matrix is singular (no ground reference)");
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> check_zero(adm_.y_zero);
  if (!check_zero.isInvertible()) {
    throw NumericError("zero-sequence admittance matrix is singular");
  }
  lu_pos_.compute(adm_.y_pos);
  lu_zero_.compute(adm_.y_zero);
  j_src_ = source_current_vector(model_);
}

Eigen::VectorXcd NetworkSolver::rhs_injections(
    const std::vector<SeriesInjection>& injections) const {
  Eigen::VectorXcd j = Eigen::VectorXcd::Zero(model_.buses.size());
  for (const auto& inj : injections) {
    const Branch& b = model_.branch(inj.branch_id);
    const Complex y = branch_y_pos(b);
    const Complex v = inj.v_pos;
    j(model_.bus_index(b.from_bus)) -= y * v;
    j(model_.bus_index(b.to_bus)) += y * v;
  }
  return j;
}

Complex NetworkSolver::thevenin_pos(int bus) const {
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(model_.buses.size());
  e(bus) = 1.0;
  return lu_pos_.solve(e)(bus);
}

Complex NetworkSolver::thevenin_zero(int bus) const {
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(model_.buses.size());
  e(bus) = 1.0;
  return lu_zero_.solve(e)(bus);
}

NetworkSolution NetworkSolver::package(const Eigen::VectorXcd& v1, const Eigen::VectorXcd& v2,
                                       const Eigen::VectorXcd& v0,
                                       const std::vector<SeriesInjection>& injections) const {
  NetworkSolution sol;
  const int n = static_cast<int>(model_.buses.size());
  sol.bus_v.resize(n);
  for (int i = 0; i < n; ++i) {
    sol.bus_v[i] = {Phasor(v1(i)), Phasor(v2(i)), Phasor(v0(i))};
  }
  sol.branch_i.resize(model_.branches.size());
  for (size_t k = 0; k < model_.branches.size(); ++k) {
    const Branch& b = model_.branches[k];
    const int i = model_.bus_index(b.from_bus);
    const int j = model_.bus_index(b.to_bus);
    Complex vinj = 0.0;
    for (const auto& inj : injections) {
      if (inj.branch_id == b.id) vinj += Complex(inj.v_pos);
    }
    const Complex y1 = branch_y_pos(b);
    const Complex y0 = branch_y_zero(b);
    const Complex i1 = y1 * (v1(i) - v1(j)) + y1 * vinj;
    const Complex i2 = y1 * (v2(i) - v2(j));
    const Complex i0 = y0 * (v0(i) - v0(j));
    sol.branch_i[k].from_i = {Phasor(i1), Phasor(i2), Phasor(i0)};
    sol.branch_i[k].to_i = {Phasor(-i1), Phasor(-i2), Phasor(-i0)};
  }
  sol.transformer_i.resize(model_.transformers.size());
  for (size_t k = 0; k < model_.transformers.size(); ++k) {
    const TransformerLink& t = model_.transformers[k];
    const int i = model_.bus_index(t.from_bus);
    const int j = model_.bus_index(t.to_bus);
    const Complex y = 1.0 / Complex{0.0, t.x_leakage};
    const Complex i1 = y * (v1(i) - v1(j));
    const Complex i2 = y * (v2(i) - v2(j));
    sol.transformer_i[k].from_i = {Phasor(i1), Phasor(i2), Phasor(0.0)};
    sol.transformer_i[k].to_i = {Phasor(-i1), Phasor(-i2), Phasor(0.0)};
  }
  return sol;
}

NetworkSolution NetworkSolver::solve_prefault(
    const std::vector<SeriesInjection>& injections) const {
  const Eigen::VectorXcd rhs = j_src_ + rhs_injections(injections);
  const Eigen::VectorXcd v1 = lu_pos_.solve(rhs);
  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(model_.buses.size());
  NetworkSolution sol = package(v1, zero, zero, injections);
  sol.kcl_residual = (adm_.y_pos * v1 - rhs).cwiseAbs().maxCoeff();
  return sol;
}

NetworkSolution NetworkSolver::solve_fault(FaultKind kind, const std::string& fault_bus,
                                           double rf,
                                           const std::vector<SeriesInjection>& injections) const {
  const int nb = static_cast<int>(model_.buses.size());
  const int f = model_.bus_index(fault_bus);
  const Eigen::VectorXcd rhs1 = j_src_ + rhs_injections(injections);
  const Eigen::VectorXcd v1_pref = lu_pos_.solve(rhs1);

  Eigen::VectorXcd ef = Eigen::VectorXcd::Zero(nb);
  ef(f) = 1.0;
  const Eigen::VectorXcd col1 = lu_pos_.solve(ef);  // y_neg == y_pos
  const Eigen::VectorXcd col0 = lu_zero_.solve(ef);
  const Complex z1 = col1(f);
  const Complex z0 = col0(f);
  const Complex vpre = v1_pref(f);

  // Standard sequence-network interconnections at the fault point.
  Complex i1f = 0.0, i2f = 0.0, i0f = 0.0;
  switch (kind) {
    case FaultKind::three_phase:
      i1f = vpre / (z1 + rf);
      break;
    case FaultKind::single_line_ground:
      i1f = vpre / (z1 + z1 + z0 + 3.0 * rf);
      i2f = i1f;
      i0f = i1f;
      break;
    case FaultKind::line_line:
      i1f = vpre / (z1 + z1 + rf);
      i2f = -i1f;
      break;
    case FaultKind::double_line_ground: {
      const Complex a = z1 + rf;  // negative-sequence branch
      const Complex b = z0 + rf;  // zero-sequence branch
      i1f = vpre / (z1 + rf + a * b / (a + b));
      i2f = -i1f * b / (a + b);
      i0f = -i1f * a / (a + b);
      break;
    }
  }

  const Eigen::VectorXcd v1 = v1_pref - i1f * col1;
  const Eigen::VectorXcd v2 = (-i2f) * col1;
  const Eigen::VectorXcd v0 = (-i0f) * col0;

  NetworkSolution sol = package(v1, v2, v0, injections);
  sol.fault_bus = f;
  sol.fault_i = {Phasor(i1f), Phasor(i2f), Phasor(i0f)};
  sol.fault_v = sol.bus_v[f];

  Eigen::VectorXcd r1 = adm_.y_pos * v1 - (rhs1 - i1f * ef);
  Eigen::VectorXcd r2 = adm_.y_pos * v2 - (-i2f * ef);
  Eigen::VectorXcd r0 = adm_.y_zero * v0 - (-i0f * ef);
  sol.kcl_residual = std::max({r1.cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff(),
                               r0.cwiseAbs().maxCoeff()});
  return sol;
}

NetworkSolution solve_prefault(const GridModel& model,
                               const std::vector<SeriesInjection>& injections) {
  return NetworkSolver(model).solve_prefault(injections);
}

FaultResult apply_fault(const GridModel& model, const FaultSpec& fault,
                        const std::vector<SeriesInjection>& injections) {
  if (!(fault.n >= 0.0 && fault.n <= 1.0)) {
    throw ConfigError("fault distance n must be in [0,1]");
  }
  if (fault.rf < 0.0) throw ConfigError("fault resistance must be >= 0");
  FaultResult out;
  out.split_model = split_branch(model, fault.branch_id, fault.n, &out.split);
  std::vector<SeriesInjection> inj = injections;
  for (auto& i : inj) {
    if (i.branch_id == fault.branch_id) i.branch_id = out.split.seg_from;
  }
  NetworkSolver solver(out.split_model);
  out.solution = solver.solve_fault(fault.kind, out.split.aux_bus, fault.rf, inj);
  return out;
}

std::pair<SequenceSet, SequenceSet> relay_point_quantities(const GridModel& model,
                                                           const NetworkSolution& sol,
                                                           const std::string& branch_id,
                                                           BranchEnd end) {
  const int bi = model.branch_index(branch_id);
  const Branch& b = model.branches[bi];
  const int bus = model.bus_index(end == BranchEnd::from ? b.from_bus : b.to_bus);
  const SequenceSet v = sol.bus_v[bus];
  const SequenceSet i = end == BranchEnd::from ? sol.branch_i[bi].from_i : sol.branch_i[bi].to_i;
  return {v, i};
}

FaultLoopResiduals fault_loop_residuals(const GridModel& split_model, const SplitInfo& split,
                                        const FaultSpec& fault, const NetworkSolution& sol,
                                        const std::vector<SeriesInjection>& injections) {
  const Branch& seg = split_model.branch(split.seg_from);
  const int bi = split_model.branch_index(split.seg_from);
  const int relay_bus = split_model.bus_index(seg.from_bus);

  Complex vinj = 0.0;
  for (const auto& inj : injections) {
    if (inj.branch_id == split.seg_from) vinj += Complex(inj.v_pos);
  }
  const Complex xdev{0.0, seg.x_device};

  const Complex i1 = sol.branch_i[bi].from_i.pos;
  const Complex i2 = sol.branch_i[bi].from_i.neg;
  const Complex i0 = sol.branch_i[bi].from_i.zero;
  const Complex v1 = sol.bus_v[relay_bus].pos;
  const Complex v2 = sol.bus_v[relay_bus].neg;
  const Complex v0 = sol.bus_v[relay_bus].zero;

  // Device drop per sequence (series source only injects positive sequence).
  const Complex d1 = xdev * i1 - vinj;
  const Complex d2 = xdev * i2;
  const Complex d0 = xdev * i0;

  FaultLoopResiduals r;
  r.seq[0] = std::abs(v1 - d1 - seg.z1() * i1 - Complex(sol.fault_v.pos));
  r.seq[1] = std::abs(v2 - d2 - seg.z1() * i2 - Complex(sol.fault_v.neg));
  r.seq[2] = std::abs(v0 - d0 - seg.z0() * i0 - Complex(sol.fault_v.zero));

  if (fault.kind == FaultKind::three_phase || fault.kind == FaultKind::single_line_ground) {
    const Complex vs = v1 + v2 + v0;
    const Complex vpq = d1 + d2 + d0;
    const Complex is = i1 + i2 + i0;
    const Complex iff = Complex(sol.fault_i.pos) + Complex(sol.fault_i.neg) +
                        Complex(sol.fault_i.zero);
    const Complex drop = seg.z1() * is + (seg.z0() - seg.z1()) * i0;
    r.aggregate = std::abs(vs - vpq - drop - fault.rf * iff);
  }
  return r;
}

}  // namespace ipfcsim
