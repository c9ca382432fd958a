#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ipfcsim/admittance.hpp"
#include "ipfcsim/grid.hpp"
#include "ipfcsim/phasor.hpp"

namespace ipfcsim {

enum class FaultKind { three_phase, single_line_ground, line_line, double_line_ground };

FaultKind fault_kind_from_string(const std::string& s);
std::string to_string(FaultKind k);

struct FaultSpec {
  FaultKind kind = FaultKind::three_phase;
  std::string branch_id;
  double n = 0.5;   // per-unit distance from the relay (from) end
  double rf = 0.0;  // per-unit fault resistance per faulted phase
};

/// Ideal fundamental-frequency series voltage source on a branch, inserted at
/// the from-end behind the branch's device leakage reactance.  `v_pos` is the
/// positive-sequence voltage rise in the from->to direction, so the power the
/// device delivers to the line is v_pos * conj(i_line).  Injections are
/// balanced: negative- and zero-sequence injected voltages are zero.
struct SeriesInjection {
  std::string branch_id;
  Phasor v_pos;
};

struct BranchFlow {
  SequenceSet from_i;  // current entering the branch at the from end
  SequenceSet to_i;    // current entering at the to end (= -from_i, series only)
};

struct NetworkSolution {
  std::vector<SequenceSet> bus_v;      // by model bus order
  std::vector<BranchFlow> branch_i;    // by model branch order
  std::vector<BranchFlow> transformer_i;
  double timestamp = 0.0;
  double kcl_residual = 0.0;           // max |Y V - J| over buses and sequences

  // Fault bookkeeping; fault_bus < 0 for prefault solutions.
  int fault_bus = -1;
  SequenceSet fault_i;  // sequence currents flowing into the fault
  SequenceSet fault_v;  // sequence voltages at the fault bus
};

/// Holds the factorized sequence matrices for one topology so that repeated
/// solves (time stepping, Thevenin lookups) are back-substitutions only.
class NetworkSolver {
 public:
  explicit NetworkSolver(GridModel model);

  const GridModel& model() const { return model_; }
  const SequenceAdmittance& admittance() const { return adm_; }

  NetworkSolution solve_prefault(const std::vector<SeriesInjection>& injections) const;
  NetworkSolution solve_fault(FaultKind kind, const std::string& fault_bus, double rf,
                              const std::vector<SeriesInjection>& injections) const;

  /// Positive-sequence Thevenin impedance seen at a bus.
  Complex thevenin_pos(int bus) const;
  Complex thevenin_zero(int bus) const;

 private:
  Eigen::VectorXcd rhs_injections(const std::vector<SeriesInjection>& injections) const;
  NetworkSolution package(const Eigen::VectorXcd& v1, const Eigen::VectorXcd& v2,
                          const Eigen::VectorXcd& v0,
                          const std::vector<SeriesInjection>& injections) const;

  GridModel model_;
  SequenceAdmittance adm_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_pos_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_zero_;
  Eigen::VectorXcd j_src_;
};

struct FaultResult {
  GridModel split_model;
  SplitInfo split;
  NetworkSolution solution;
};

/// Balanced prefault operating point (positive sequence only).
NetworkSolution solve_prefault(const GridModel& model,
                               const std::vector<SeriesInjection>& injections);

/// Split the faulted branch at n, move any injection on it to the relay-side
/// segment, and solve the during-fault phasor state.
FaultResult apply_fault(const GridModel& model, const FaultSpec& fault,
                        const std::vector<SeriesInjection>& injections);

enum class BranchEnd { from, to };

/// Relay-point sequence voltage and current, current oriented into the line.
std::pair<SequenceSet, SequenceSet> relay_point_quantities(const GridModel& model,
                                                           const NetworkSolution& sol,
                                                           const std::string& branch_id,
                                                           BranchEnd end);

/// KVL residuals along the relay-side segment of the faulted line: per
/// sequence, |V_relay - V_device_drop - Z_seg*I - V_faultpoint|; `aggregate`
/// additionally closes the loop through Rf for fault kinds where the
/// phase-a relation V = V_pq + n*Z1*I + n*(Z0-Z1)*I0 + Rf*If is exact
/// (three-phase and single-line-ground).
struct FaultLoopResiduals {
  double seq[3] = {0.0, 0.0, 0.0};  // index 0:pos 1:neg 2:zero
  std::optional<double> aggregate;
};

FaultLoopResiduals fault_loop_residuals(const GridModel& split_model, const SplitInfo& split,
                                        const FaultSpec& fault, const NetworkSolution& sol,
                                        const std::vector<SeriesInjection>& injections);

}  // namespace ipfcsim
