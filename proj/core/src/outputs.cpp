#include "ipfcsim/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ipfcsim/errors.hpp"

namespace ipfcsim {

namespace fs = std::filesystem;

std::string format_g12(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex_u64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  fs::path p(path);
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

namespace {

std::string trajectory_csv(const RunResult& r) {
  std::ostringstream os;
  os << "# provenance: " << r.provenance << "\n";
  os << "t_s,v_re,v_im,i_re,i_im,z_r_pu,z_x_pu,in_zone1\n";
  for (const auto& s : r.trace.samples) {
    os << format_g12(s.t) << ',' << format_g12(s.m.v_s.re) << ',' << format_g12(s.m.v_s.im)
       << ',' << format_g12(s.m.i_relay.re) << ',' << format_g12(s.m.i_relay.im) << ','
       << format_g12(s.m.z_apparent.re) << ',' << format_g12(s.m.z_apparent.im) << ','
       << (s.in_zone1 ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string ipfc_csv(const RunResult& r) {
  std::ostringstream os;
  os << "# provenance: " << r.provenance << "\n";
  os << "t_s,m1,alpha1_deg,m2,alpha2_deg,vdc_pu,pse1_pu,pse2_pu,pnet1_pu,qnet1_pu,pnet2_pu\n";
  for (const auto& w : r.ipfc_log) {
    os << format_g12(w.t) << ',' << format_g12(w.m1) << ',' << format_g12(w.alpha1_deg) << ','
       << format_g12(w.m2) << ',' << format_g12(w.alpha2_deg) << ',' << format_g12(w.vdc)
       << ',' << format_g12(w.pse1) << ',' << format_g12(w.pse2) << ',' << format_g12(w.pnet1)
       << ',' << format_g12(w.qnet1) << ',' << format_g12(w.pnet2) << "\n";
  }
  return os.str();
}

std::string summary_text(const RunResult& r) {
  std::ostringstream os;
  os << "scenario: " << r.scenario_name << "\n";
  os << "provenance: " << r.provenance << "\n";
  os << "samples: " << r.trace.samples.size() << "\n";
  os << "relay: branch " << r.relay.protected_branch << ", Z1 = " << format_g12(r.relay.line_z1.re)
     << " + j" << format_g12(r.relay.line_z1.im) << " pu, zone1 = "
     << format_g12(r.relay.zone1_fraction) << " of |Z1|\n";
  if (!r.trace.samples.empty()) {
    const auto& last = r.trace.samples.back();
    os << "final z_apparent: " << format_g12(last.m.z_apparent.re) << " + j"
       << format_g12(last.m.z_apparent.im) << " pu, in_zone1=" << (last.in_zone1 ? 1 : 0)
       << "\n";
  }
  if (r.verdict) {
    const auto& v = *r.verdict;
    os << "verdict: " << to_string(v.classification) << "\n";
    os << "  z_baseline  = " << format_g12(v.z_baseline.re) << " + j"
       << format_g12(v.z_baseline.im) << " pu (zone1=" << (v.zone_decision_baseline ? 1 : 0)
       << ")\n";
    os << "  z_with_ipfc = " << format_g12(v.z_with_ipfc.re) << " + j"
       << format_g12(v.z_with_ipfc.im) << " pu (zone1=" << (v.zone_decision_ipfc ? 1 : 0)
       << ")\n";
  }
  return os.str();
}

// Minimal static R-X plane view: Zone-1 circle plus the impedance trajectory.
std::string plot_svg(const RunResult& r) {
  const double reach = r.relay.zone1_fraction * r.relay.line_z1.magnitude();
  double lo = -reach, hi = reach;
  for (const auto& s : r.trace.samples) {
    if (!s.m.measurable) continue;
    lo = std::min({lo, s.m.z_apparent.re, s.m.z_apparent.im});
    hi = std::max({hi, s.m.z_apparent.re, s.m.z_apparent.im});
  }
  const double span = std::max(hi - lo, 1e-9);
  const double w = 600.0, margin = 50.0;
  auto sx = [&](double v) { return margin + (v - lo) / span * (w - 2 * margin); };
  auto sy = [&](double v) { return w - margin - (v - lo) / span * (w - 2 * margin); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" "
        "viewBox=\"0 0 600 600\">\n";
  os << "<!-- provenance: " << r.provenance << " -->\n";
  os << "<rect width=\"600\" height=\"600\" fill=\"white\"/>\n";
  os << "<line x1=\"" << format_g12(sx(lo)) << "\" y1=\"" << format_g12(sy(0)) << "\" x2=\""
     << format_g12(sx(lo + span)) << "\" y2=\"" << format_g12(sy(0))
     << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"" << format_g12(sx(0)) << "\" y1=\"" << format_g12(sy(lo)) << "\" x2=\""
     << format_g12(sx(0)) << "\" y2=\"" << format_g12(sy(lo + span))
     << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  os << "<circle cx=\"" << format_g12(sx(0)) << "\" cy=\"" << format_g12(sy(0)) << "\" r=\""
     << format_g12(reach / span * (w - 2 * margin)) << "\" fill=\"none\" stroke=\"#1f77b4\" "
        "stroke-width=\"1.5\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
  for (const auto& s : r.trace.samples) {
    if (!s.m.measurable) continue;
    os << format_g12(sx(s.m.z_apparent.re)) << ',' << format_g12(sy(s.m.z_apparent.im)) << ' ';
  }
  os << "\"/>\n";
  os << "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << r.scenario_name
     << " (R-X plane, p.u.)</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::vector<ManifestEntry> emit_outputs(const RunResult& r, const std::string& out_dir,
                                        bool plot) {
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("trajectory.csv", trajectory_csv(r));
  files.emplace_back("ipfc.csv", ipfc_csv(r));
  files.emplace_back("summary.txt", summary_text(r));
  if (plot) files.emplace_back("plot.svg", plot_svg(r));

  std::vector<ManifestEntry> manifest;
  for (const auto& [name, content] : files) {
    write_text_file(out_dir + "/" + name, content);
    manifest.push_back({name, content.size()});
  }
  std::ostringstream mf;
  mf << "# provenance: " << r.provenance << "\n";
  for (const auto& e : manifest) mf << e.bytes << ' ' << e.name << "\n";
  write_text_file(out_dir + "/manifest.txt", mf.str());
  return manifest;
}

}  // namespace ipfcsim
