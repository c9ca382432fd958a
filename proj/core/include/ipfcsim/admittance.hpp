#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ipfcsim/grid.hpp"

namespace ipfcsim {

/// Nodal admittance matrices for the three sequence networks, bus-ordered as
/// in the GridModel.  Sources are stamped voltage-behind-reactance (Norton
/// admittance here, current injection in the RHS); constant-impedance loads
/// are shunts in positive and negative sequence only.
///
/// Buses with no zero-sequence connection at all get an identity row patch so
/// the zero-sequence system stays solvable with V0 = 0 there; `zero_patched`
/// records which.
struct SequenceAdmittance {
  Eigen::MatrixXcd y_pos;
  Eigen::MatrixXcd y_neg;
  Eigen::MatrixXcd y_zero;
  std::vector<char> zero_patched;
  std::vector<char> has_shunt_pos;  // source/load admittance on the diagonal
};

SequenceAdmittance build_sequence_admittance(const GridModel& model);

/// Series admittance of a branch in a given sequence (device leakage
/// included).  Zero-impedance segments (split at n exactly 0 or 1) are
/// stamped as a 1e12 S tie.
Complex branch_y_pos(const Branch& b);
Complex branch_y_zero(const Branch& b);

/// Positive-sequence Norton current injections for the sources.
Eigen::VectorXcd source_current_vector(const GridModel& model);

}  // namespace ipfcsim
