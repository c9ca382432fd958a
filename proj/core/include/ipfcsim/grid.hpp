#pragma once

#include <string>
#include <vector>

#include "ipfcsim/phasor.hpp"

namespace ipfcsim {

class Config;

struct Bus {
  std::string id;
  std::string name;
};

/// Series transmission-line segment.  Lumped series R/X per sequence, no
/// shunt charging.  `x_device` is the leakage reactance of a series
/// converter transformer inserted at the from-end, zero when no device is
/// attached; it adds to the series reactance in every sequence but is not
/// part of the line impedance proper.
struct Branch {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  double r1 = 0.0;
  double x1 = 0.0;
  double r0 = 0.0;
  double x0 = 0.0;
  double rating_kv = 0.0;
  double x_device = 0.0;

  Complex z1() const { return {r1, x1}; }
  Complex z0() const { return {r0, x0}; }
  // Total series impedance as stamped, device leakage included.
  Complex z1_total() const { return {r1, x1 + x_device}; }
  Complex z0_total() const { return {r0, x0 + x_device}; }
};

enum class ZeroSeqPath {
  blocked,          // no zero-sequence stamp at all
  grounded_through  // to-side winding grounded star: leakage to ground at to_bus
};

struct TransformerLink {
  std::string id;
  std::string from_bus;  // generator side
  std::string to_bus;    // grid side
  double x_leakage = 0.0;
  ZeroSeqPath zero_path = ZeroSeqPath::grounded_through;
};

/// Voltage behind subtransient reactance.
struct Source {
  std::string bus;
  double x_internal = 0.0;
  double voltage_setpoint = 1.0;
  double angle_deg = 0.0;
  double rating_kv = 0.0;

  Complex emf() const { return Phasor::from_polar_deg(voltage_setpoint, angle_deg); }
};

/// Constant-impedance load, converted from P/Q at nominal voltage.
struct Load {
  std::string bus;
  double p = 0.0;
  double q = 0.0;

  Complex shunt_admittance() const { return {p, -q}; }
};

struct GridModel {
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<TransformerLink> transformers;
  std::vector<Source> sources;
  std::vector<Load> loads;
  double base_mva = 100.0;
  double base_kv = 150.0;
  double frequency_hz = 50.0;

  int bus_index(const std::string& id) const;        // throws ConfigError
  int branch_index(const std::string& id) const;     // throws ConfigError
  const Branch& branch(const std::string& id) const;
  Branch& branch(const std::string& id);

  void validate() const;  // full invariant check used after config load
  void check_connected() const;
};

GridModel load_grid(const Config& cfg);
GridModel load_grid_text(const std::string& text, const std::string& origin = "<string>");
GridModel load_grid_file(const std::string& path);

/// Shipped 8-bus default (embedded copy of data/grid8.conf).
const std::string& builtin_grid8_text();
GridModel default_grid8();

struct SplitInfo {
  std::string aux_bus;
  std::string seg_from;  // from_bus -> aux, impedance n*Z (relay side)
  std::string seg_to;    // aux -> to_bus, impedance (1-n)*Z
};

/// Replace a branch by two series segments joined at a new auxiliary bus at
/// fractional distance n from the from-end.  Electrically a no-op until
/// something attaches at the new bus.
GridModel split_branch(const GridModel& model, const std::string& branch_id, double n,
                       SplitInfo* info = nullptr);

}  // namespace ipfcsim
