/*
 * Copyright 2026 The gwcd Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GWCD_REPORTING_HPP
#define GWCD_REPORTING_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "gwcd/sigma.hpp"

// CSV and JSON emission. Every output file starts with a comment line
// carrying the JSON-encoded run configuration, so a result file is
// self-describing and a run is reproducible from its own header.

namespace gwcd {

/// Fixed-format float that round-trips doubles exactly; used for every
/// numeric CSV cell so identical runs give byte-identical files.
inline std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Assembles a CSV document: one `# {config}` header line, one column
/// line, then the rows.
class CsvDocument {
 public:
  CsvDocument(nlohmann::json config, std::vector<std::string> columns)
      : config_(std::move(config)), columns_(std::move(columns)) {}

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
      throw DimensionError("CsvDocument: row width != column count");
    rows_.push_back(std::move(cells));
  }

  std::string str() const {
    std::string out = "# " + config_.dump() + "\n";
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (c) out += ',';
      out += columns_[c];
    }
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        out += row[c];
      }
      out += '\n';
    }
    return out;
  }

 private:
  nlohmann::json config_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes via a temp file in the target directory plus rename, so a
/// reader never observes a half-written file.
inline void write_file_atomic(const std::filesystem::path& target,
                              const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = target.has_parent_path() ? target.parent_path()
                                                : fs::path(".");
  fs::create_directories(dir);
  const fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out << content;
    if (!out) throw IoError("short write on " + tmp.string());
  }
  fs::rename(tmp, target);
}

inline nlohmann::json sigma_report_json(const SigmaReport& rep) {
  nlohmann::json j = {
      {"state", rep.state},
      {"omega_ha", rep.omega},
      {"omega_ev", rep.omega * kHartreeToEv},
      {"sigma_x_ha", rep.sigma_x},
      {"sigma_x_ev", rep.sigma_x * kHartreeToEv},
      {"sigma_c_ha", rep.sigma_c},
      {"sigma_c_ev", rep.sigma_c * kHartreeToEv},
      {"scheme", scheme_name(rep.scheme)},
      {"rank", rep.rank},
      {"quad_points", rep.quad_points},
      {"shift_ha", rep.shift},
      {"residue_count", rep.residue_count},
  };
  if (rep.bounds) {
    j["bounds_ha"] = {{"e1", rep.bounds->e1},
                      {"e2", rep.bounds->e2},
                      {"e3", rep.bounds->e3},
                      {"e3_valid", rep.bounds->e3_valid}};
  }
  if (rep.oracle_value) {
    j["oracle_value_ha"] = *rep.oracle_value;
    j["oracle_abs_gap_ha"] = *rep.oracle_gap();
  }
  return j;
}

}  // namespace gwcd

#endif  // GWCD_REPORTING_HPP
