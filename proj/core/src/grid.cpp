#include "ipfcsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ipfcsim/config.hpp"
#include "ipfcsim/errors.hpp"

namespace ipfcsim {

int GridModel::bus_index(const std::string& id) const {
  for (size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == id) return static_cast<int>(i);
  }
  throw ConfigError("unknown bus id '" + id + "'");
}

int GridModel::branch_index(const std::string& id) const {
  for (size_t i = 0; i < branches.size(); ++i) {
    if (branches[i].id == id) return static_cast<int>(i);
  }
  throw ConfigError("unknown branch id '" + id + "'");
}

const Branch& GridModel::branch(const std::string& id) const {
  return branches[branch_index(id)];
}

Branch& GridModel::branch(const std::string& id) {
  return branches[branch_index(id)];
}

void GridModel::check_connected() const {
  if (buses.empty()) throw ConfigError("grid has no buses");
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& b : branches) {
    adj[b.from_bus].push_back(b.to_bus);
    adj[b.to_bus].push_back(b.from_bus);
  }
  for (const auto& t : transformers) {
    adj[t.from_bus].push_back(t.to_bus);
    adj[t.to_bus].push_back(t.from_bus);
  }
  std::set<std::string> seen;
  std::vector<std::string> stack{buses.front().id};
  while (!stack.empty()) {
    std::string b = stack.back();
    stack.pop_back();
    if (!seen.insert(b).second) continue;
    for (const auto& nb : adj[b]) stack.push_back(nb);
  }
  for (const auto& b : buses) {
    if (!seen.count(b.id)) {
      throw ConfigError("grid graph is disconnected: bus '" + b.id + "' unreachable");
    }
  }
}

void GridModel::validate() const {
  std::set<std::string> bus_ids;
  for (const auto& b : buses) {
    if (!bus_ids.insert(b.id).second) throw ConfigError("duplicate bus id '" + b.id + "'");
  }
  std::set<std::string> branch_ids;
  for (const auto& br : branches) {
    if (!branch_ids.insert(br.id).second) {
      throw ConfigError("duplicate branch id '" + br.id + "'");
    }
    bus_index(br.from_bus);
    bus_index(br.to_bus);
    if (!(br.x1 > 0.0)) {
      throw ConfigError("branch '" + br.id + "': positive-sequence reactance must be > 0");
    }
    if (br.r1 < 0.0) {
      throw ConfigError("branch '" + br.id + "': negative resistance");
    }
    if (std::abs(br.z0()) < std::abs(br.z1())) {
      throw ConfigError("branch '" + br.id + "': |Z0| must not be smaller than |Z1|");
    }
  }
  std::set<std::string> xf_ids;
  for (const auto& t : transformers) {
    if (!xf_ids.insert(t.id).second) {
      throw ConfigError("duplicate transformer id '" + t.id + "'");
    }
    bus_index(t.from_bus);
    bus_index(t.to_bus);
    if (!(t.x_leakage > 0.0)) {
      throw ConfigError("transformer '" + t.id + "': leakage reactance must be > 0");
    }
  }
  for (const auto& s : sources) {
    bus_index(s.bus);
    if (!(s.x_internal > 0.0)) {
      throw ConfigError("source at bus '" + s.bus + "': internal reactance must be > 0");
    }
    if (!(s.voltage_setpoint > 0.0)) {
      throw ConfigError("source at bus '" + s.bus + "': voltage setpoint must be > 0");
    }
  }
  for (const auto& l : loads) {
    bus_index(l.bus);
    if (l.p < 0.0) throw ConfigError("load at bus '" + l.bus + "': negative active power");
  }
  check_connected();
}

namespace {

void expect_cols(const std::vector<std::string>& row, size_t n, const std::string& what) {
  if (row.size() != n) {
    throw ConfigError("[" + what + "] row needs " + std::to_string(n) + " columns, got " +
                      std::to_string(row.size()));
  }
}

}  // namespace

GridModel load_grid(const Config& cfg) {
  GridModel m;
  m.base_mva = cfg.get_double("system", "base_mva");
  m.base_kv = cfg.get_double("system", "base_kv");
  m.frequency_hz = cfg.get_double("system", "frequency_hz", 50.0);

  for (const auto& row : cfg.section("bus").rows) {
    if (row.size() < 1 || row.size() > 2) throw ConfigError("[bus] row needs 1-2 columns");
    m.buses.push_back({row[0], row.size() > 1 ? row[1] : row[0]});
  }
  for (const auto& row : cfg.section("branch").rows) {
    expect_cols(row, 8, "branch");
    Branch b;
    b.id = row[0];
    b.from_bus = row[1];
    b.to_bus = row[2];
    b.r1 = parse_double(row[3], "branch r1");
    b.x1 = parse_double(row[4], "branch x1");
    b.r0 = parse_double(row[5], "branch r0");
    b.x0 = parse_double(row[6], "branch x0");
    b.rating_kv = parse_double(row[7], "branch kv");
    m.branches.push_back(b);
  }
  if (const auto* sec = cfg.find_section("transformer")) {
    for (const auto& row : sec->rows) {
      expect_cols(row, 5, "transformer");
      TransformerLink t;
      t.id = row[0];
      t.from_bus = row[1];
      t.to_bus = row[2];
      t.x_leakage = parse_double(row[3], "transformer x");
      if (row[4] == "grounded_through") {
        t.zero_path = ZeroSeqPath::grounded_through;
      } else if (row[4] == "blocked") {
        t.zero_path = ZeroSeqPath::blocked;
      } else {
        throw ConfigError("transformer '" + t.id + "': unknown zero_path '" + row[4] + "'");
      }
      m.transformers.push_back(t);
    }
  }
  for (const auto& row : cfg.section("source").rows) {
    expect_cols(row, 5, "source");
    Source s;
    s.bus = row[0];
    s.x_internal = parse_double(row[1], "source x");
    s.voltage_setpoint = parse_double(row[2], "source v_setpoint");
    s.angle_deg = parse_double(row[3], "source angle_deg");
    s.rating_kv = parse_double(row[4], "source kv");
    m.sources.push_back(s);
  }
  if (const auto* sec = cfg.find_section("load")) {
    for (const auto& row : sec->rows) {
      expect_cols(row, 3, "load");
      Load l;
      l.bus = row[0];
      l.p = parse_double(row[1], "load p");
      l.q = parse_double(row[2], "load q");
      m.loads.push_back(l);
    }
  }
  m.validate();
  return m;
}

GridModel load_grid_text(const std::string& text, const std::string& origin) {
  return load_grid(Config::parse(text, origin));
}

GridModel load_grid_file(const std::string& path) {
  return load_grid(Config::parse_file(path));
}

GridModel default_grid8() { return load_grid_text(builtin_grid8_text(), "builtin:grid8"); }

GridModel split_branch(const GridModel& model, const std::string& branch_id, double n,
                       SplitInfo* info) {
  if (!(n >= 0.0 && n <= 1.0)) {
    throw ConfigError("split fraction n must be in [0,1], got " + std::to_string(n));
  }
  GridModel out = model;
  const int bi = out.branch_index(branch_id);
  const Branch orig = out.branches[bi];

  SplitInfo si;
  si.aux_bus = "f@" + orig.id;
  si.seg_from = orig.id + ".a";
  si.seg_to = orig.id + ".b";
  out.buses.push_back({si.aux_bus, "fault-point on branch " + orig.id});

  Branch a = orig;
  a.id = si.seg_from;
  a.to_bus = si.aux_bus;
  a.r1 = orig.r1 * n;
  a.x1 = orig.x1 * n;
  a.r0 = orig.r0 * n;
  a.x0 = orig.x0 * n;

  Branch b = orig;
  b.id = si.seg_to;
  b.from_bus = si.aux_bus;
  b.r1 = orig.r1 * (1.0 - n);
  b.x1 = orig.x1 * (1.0 - n);
  b.r0 = orig.r0 * (1.0 - n);
  b.x0 = orig.x0 * (1.0 - n);
  b.x_device = 0.0;  // any series device stays on the relay-side segment

  out.branches[bi] = a;
  out.branches.insert(out.branches.begin() + bi + 1, b);
  if (info) *info = si;
  return out;
}

}  // namespace ipfcsim
