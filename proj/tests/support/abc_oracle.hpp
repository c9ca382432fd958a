#pragma once

// Brute-force phase-domain oracle: solves the full a/b/c nodal network
// (three nodes per bus, faults as explicit augmented branches) without going
// through the sequence-domain solver.  Test-only reference path.

#include <string>
#include <vector>

#include "ipfcsim/fault.hpp"
#include "ipfcsim/grid.hpp"

namespace oracle {

std::vector<ipfcsim::ThreePhaseSet> solve_abc(const ipfcsim::GridModel& model,
                                              const std::string& fault_bus,
                                              ipfcsim::FaultKind kind, double rf);

/// Prefault (no fault attached) phase-domain solve.
std::vector<ipfcsim::ThreePhaseSet> solve_abc_prefault(const ipfcsim::GridModel& model);

}  // namespace oracle
