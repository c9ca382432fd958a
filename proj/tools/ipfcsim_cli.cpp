// Command-line front end: run scenarios, paired comparisons, parameter
// sweeps, and the built-in reproduction suite.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 I/O failure.

#include <CLI11.hpp>
#include <cstdio>
#include <future>
#include <iostream>
#include <vector>

#include "ipfcsim/errors.hpp"
#include "ipfcsim/outputs.hpp"
#include "ipfcsim/scenario.hpp"
#include "ipfcsim/version.hpp"

namespace {

using namespace ipfcsim;

struct CommonOpts {
  std::string out_dir = "out";
  bool plot = false;
  bool freeze_on_fault = false;
  long long seed = -1;
};

void apply_overrides(Scenario& s, const CommonOpts& o) {
  if (o.freeze_on_fault) s.freeze_on_fault = true;
  if (o.seed >= 0) s.seed = static_cast<std::uint64_t>(o.seed);
}

void apply_field(Scenario& s, const std::string& field, double value) {
  if (field == "fault.n") s.fault.n = value;
  else if (field == "fault.rf") s.fault.rf = value;
  else if (field == "scenario.dt") s.dt = value;
  else if (field == "scenario.t_fault") s.t_fault = value;
  else if (field == "ipfc.preset_magnitude") s.ipfc.preset_magnitude = value;
  else if (field == "ipfc.p_ref1") s.setpoints.p_ref1 = value;
  else if (field == "ipfc.q_ref1") s.setpoints.q_ref1 = value;
  else if (field == "ipfc.p_ref2") s.setpoints.p_ref2 = value;
  else if (field == "relay.zone1_fraction") s.zone1_fraction = value;
  else throw ConfigError("sweep: unsupported field '" + field + "'");
  s.config_text += "\n# sweep-override " + field + " = " + format_g12(value) + "\n";
}

int cmd_run(const std::string& path, const CommonOpts& o) {
  Scenario s = load_scenario_file(path);
  apply_overrides(s, o);
  RunResult r = run_scenario(s);
  emit_outputs(r, o.out_dir, o.plot);
  std::cout << "wrote " << o.out_dir << " (" << r.trace.samples.size() << " samples)\n";
  return 0;
}

int cmd_pair(const std::string& base_path, const std::string& var_path, const CommonOpts& o) {
  Scenario base = load_scenario_file(base_path);
  Scenario var = load_scenario_file(var_path);
  apply_overrides(var, o);
  auto [rb, rv] = run_pair(base, var);
  emit_outputs(rb, o.out_dir + "/baseline", o.plot);
  emit_outputs(rv, o.out_dir + "/variant", o.plot);
  std::cout << "verdict: " << to_string(rv.verdict->classification) << "\n";
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& vary, int jobs, const CommonOpts& o) {
  const auto eq = vary.find('=');
  if (eq == std::string::npos) throw ConfigError("--vary needs field=start:stop:step");
  const std::string field = vary.substr(0, eq);
  const std::string range = vary.substr(eq + 1);
  double start, stop, step;
  if (std::sscanf(range.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 || step <= 0.0) {
    throw ConfigError("--vary range must be start:stop:step with step > 0");
  }
  std::vector<double> values;
  for (double v = start; v <= stop + 1e-12; v += step) values.push_back(v);

  Scenario tmpl = load_scenario_file(path);
  apply_overrides(tmpl, o);

  // Runs are independent; fan them across a small worker pool.
  std::vector<std::future<std::string>> futs;
  std::size_t next = 0;
  auto launch = [&](double v) {
    return std::async(std::launch::async, [&, v]() {
      Scenario s = tmpl;
      apply_field(s, field, v);
      RunResult r = run_scenario(s);
      const std::string dir = o.out_dir + "/" + field + "=" + format_g12(v);
      emit_outputs(r, dir, o.plot);
      return dir;
    });
  };
  const std::size_t pool = std::max(1, jobs);
  while (next < values.size() || !futs.empty()) {
    while (next < values.size() && futs.size() < pool) futs.push_back(launch(values[next++]));
    std::cout << "wrote " << futs.front().get() << "\n";
    futs.erase(futs.begin());
  }
  return 0;
}

int cmd_reproduce(const CommonOpts& o) {
  ReproReport rep = reproduce_paper(o.out_dir, o.plot);
  std::cout << rep.text;
  return rep.all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phasor-domain IPFC / distance-relay interaction simulator"};
  app.set_version_flag("--version", std::string("ipfcsim ") + ipfcsim::kVersion);
  app.require_subcommand(1);

  CommonOpts opts;
  std::string scenario_path, baseline_path, variant_path, vary;
  int jobs = 4;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--out", opts.out_dir, "Output directory");
    c->add_flag("--plot", opts.plot, "Also write an R-X plane SVG plot");
    c->add_flag("--freeze-on-fault", opts.freeze_on_fault,
                "Latch converter commands at their prefault values when the fault hits");
    c->add_option("--seed", opts.seed, "Seed recorded in provenance");
  };

  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("scenario", scenario_path, "Scenario config file")->required();
  add_common(run);

  auto* pair = app.add_subcommand("pair", "Run baseline and variant, classify reach change");
  pair->add_option("baseline", baseline_path, "Baseline scenario config")->required();
  pair->add_option("variant", variant_path, "Variant scenario config")->required();
  add_common(pair);

  auto* sweep = app.add_subcommand("sweep", "Run a template scenario over a parameter range");
  sweep->add_option("template", scenario_path, "Template scenario config")->required();
  sweep->add_option("--vary", vary, "field=start:stop:step (e.g. fault.n=0.1:0.9:0.1)")
      ->required();
  sweep->add_option("--jobs", jobs, "Parallel workers");
  add_common(sweep);

  auto* repro = app.add_subcommand("reproduce-paper",
                                   "Built-in five-mode suite: off and the four pure "
                                   "injection/absorption presets, classified against baseline");
  add_common(repro);

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(scenario_path, opts);
    if (pair->parsed()) return cmd_pair(baseline_path, variant_path, opts);
    if (sweep->parsed()) return cmd_sweep(scenario_path, vary, jobs, opts);
    if (repro->parsed()) return cmd_reproduce(opts);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ipfcsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ipfcsim::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const ipfcsim::IoError& e) {
    std::cerr << "i/o failure: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
