#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipfcsim/scenario.hpp"

namespace ipfcsim {

struct ManifestEntry {
  std::string name;
  std::uint64_t bytes = 0;
};

/// Write trajectory.csv, ipfc.csv, summary.txt, optionally plot.svg, and a
/// manifest.txt listing every emitted file with its byte size.  All numbers
/// are printed with 12 significant digits so identical runs produce
/// byte-identical files.
std::vector<ManifestEntry> emit_outputs(const RunResult& r, const std::string& out_dir,
                                        bool plot);

std::string format_g12(double v);
std::uint64_t fnv1a64(const std::string& data);
std::string hex_u64(std::uint64_t v);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ipfcsim
