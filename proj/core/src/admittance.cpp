#include "ipfcsim/admittance.hpp"

#include <cmath>

#include "ipfcsim/errors.hpp"

namespace ipfcsim {

namespace {
constexpr double kTieAdmittance = 1e12;  // zero-impedance segment stand-in

Complex series_admittance(const Complex& z) {
  if (std::abs(z) == 0.0) return {kTieAdmittance, 0.0};
  return 1.0 / z;
}

void stamp_series(Eigen::MatrixXcd& y, int i, int j, const Complex& adm) {
  y(i, i) += adm;
  y(j, j) += adm;
  y(i, j) -= adm;
  y(j, i) -= adm;
}
}  // namespace

Complex branch_y_pos(const Branch& b) { return series_admittance(b.z1_total()); }
Complex branch_y_zero(const Branch& b) { return series_admittance(b.z0_total()); }

SequenceAdmittance build_sequence_admittance(const GridModel& model) {
  const int n = static_cast<int>(model.buses.size());
  SequenceAdmittance adm;
  adm.y_pos = Eigen::MatrixXcd::Zero(n, n);
  adm.y_zero = Eigen::MatrixXcd::Zero(n, n);
  adm.zero_patched.assign(n, 0);
  adm.has_shunt_pos.assign(n, 0);

  for (const auto& b : model.branches) {
    const int i = model.bus_index(b.from_bus);
    const int j = model.bus_index(b.to_bus);
    stamp_series(adm.y_pos, i, j, branch_y_pos(b));
    stamp_series(adm.y_zero, i, j, branch_y_zero(b));
  }
  for (const auto& t : model.transformers) {
    const int i = model.bus_index(t.from_bus);
    const int j = model.bus_index(t.to_bus);
    const Complex y = 1.0 / Complex{0.0, t.x_leakage};
    stamp_series(adm.y_pos, i, j, y);
    if (t.zero_path == ZeroSeqPath::grounded_through) {
      adm.y_zero(j, j) += y;  // grounded star on the to-side winding
    }
  }
  for (const auto& s : model.sources) {
    const int i = model.bus_index(s.bus);
    adm.y_pos(i, i) += 1.0 / Complex{0.0, s.x_internal};
    adm.has_shunt_pos[i] = 1;
  }
  for (const auto& l : model.loads) {
    const int i = model.bus_index(l.bus);
    adm.y_pos(i, i) += l.shunt_admittance();
    adm.has_shunt_pos[i] = 1;
  }

  adm.y_neg = adm.y_pos;  // no rotating-machine asymmetry modeled

  // Ground the common mode at buses with no zero-sequence connection.
  for (int i = 0; i < n; ++i) {
    bool empty = true;
    for (int j = 0; j < n && empty; ++j) {
      if (adm.y_zero(i, j) != Complex{0.0, 0.0}) empty = false;
    }
    if (empty) {
      adm.y_zero(i, i) = 1.0;
      adm.zero_patched[i] = 1;
    }
  }
  return adm;
}

Eigen::VectorXcd source_current_vector(const GridModel& model) {
  Eigen::VectorXcd j = Eigen::VectorXcd::Zero(model.buses.size());
  for (const auto& s : model.sources) {
    j(model.bus_index(s.bus)) += s.emf() / Complex{0.0, s.x_internal};
  }
  return j;
}

}  // namespace ipfcsim
