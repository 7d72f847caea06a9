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

#ifndef GWCD_KSD_IO_HPP
#define GWCD_KSD_IO_HPP

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "gwcd/ks_system.hpp"

// KSD bundle layout: a directory holding manifest.json plus raw
// little-endian IEEE-754 float64 blobs
//   eigenvalues.f64   n values
//   orbitals.f64      n_grid * n values, column-major
//   coulomb.f64       n_grid * n_grid values, column-major
//   vxc.f64           n values, present iff has_vxc
// Blob byte counts must match the manifest exactly.

namespace gwcd {

static_assert(std::endian::native == std::endian::little,
              "KSD blobs are little-endian; byte swapping is not implemented");

namespace detail {

inline std::vector<double> read_f64_blob(const std::filesystem::path& file,
                                         std::size_t expected_count) {
  std::error_code ec;
  auto size = std::filesystem::file_size(file, ec);
  if (ec) throw IoError("cannot stat " + file.string() + ": " + ec.message());
  if (size != expected_count * sizeof(double)) {
    std::ostringstream os;
    os << file.filename().string() << ": expected "
       << expected_count * sizeof(double) << " bytes, found " << size;
    throw DimensionError(os.str());
  }
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open " + file.string());
  std::vector<double> data(expected_count);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(size));
  if (!in) throw IoError("short read on " + file.string());
  return data;
}

inline void write_f64_blob(const std::filesystem::path& file,
                           const double* data, std::size_t count) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + file.string());
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(count * sizeof(double)));
  if (!out) throw IoError("short write on " + file.string());
}

}  // namespace detail

inline KsSystem load_ksd(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path))
    throw IoError("missing manifest: " + manifest_path.string());

  nlohmann::json manifest;
  {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open " + manifest_path.string());
    try {
      in >> manifest;
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed manifest.json: " + std::string(e.what()));
    }
  }

  if (manifest.value("format_version", 0) != 1)
    throw IoError("unsupported KSD format_version");
  if (manifest.value("units", "") != std::string("hartree"))
    throw IoError("KSD units must be \"hartree\"");

  KsSystem sys;
  sys.n_grid = manifest.at("n_grid").get<Index>();
  sys.n = manifest.at("n").get<Index>();
  sys.n_v = manifest.at("n_v").get<Index>();
  const bool has_vxc = manifest.at("has_vxc").get<bool>();
  if (sys.n_grid < 1 || sys.n < 1 || sys.n > sys.n_grid)
    throw DimensionError("manifest dimensions invalid (need 1 <= n <= n_grid)");

  auto ev = detail::read_f64_blob(dir / "eigenvalues.f64",
                                  static_cast<std::size_t>(sys.n));
  sys.eigenvalues = Eigen::Map<const Vec>(ev.data(), sys.n);

  auto orb = detail::read_f64_blob(
      dir / "orbitals.f64", static_cast<std::size_t>(sys.n_grid * sys.n));
  sys.orbitals = Eigen::Map<const Mat>(orb.data(), sys.n_grid, sys.n);

  auto vc = detail::read_f64_blob(
      dir / "coulomb.f64", static_cast<std::size_t>(sys.n_grid * sys.n_grid));
  sys.coulomb = Eigen::Map<const Mat>(vc.data(), sys.n_grid, sys.n_grid);

  if (has_vxc) {
    auto vxc = detail::read_f64_blob(dir / "vxc.f64",
                                     static_cast<std::size_t>(sys.n));
    sys.vxc_element = Eigen::Map<const Vec>(vxc.data(), sys.n);
  }

  validate_ks_system(sys);
  return sys;
}

inline void save_ksd(const KsSystem& sys, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  nlohmann::json manifest = {
      {"format_version", 1},
      {"n_grid", sys.n_grid},
      {"n", sys.n},
      {"n_v", sys.n_v},
      {"has_vxc", sys.vxc_element.has_value()},
      {"units", "hartree"},
  };
  {
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    if (!out) throw IoError("cannot create manifest in " + dir.string());
    out << manifest.dump(2) << "\n";
  }

  detail::write_f64_blob(dir / "eigenvalues.f64", sys.eigenvalues.data(),
                         static_cast<std::size_t>(sys.n));
  detail::write_f64_blob(dir / "orbitals.f64", sys.orbitals.data(),
                         static_cast<std::size_t>(sys.n_grid * sys.n));
  detail::write_f64_blob(dir / "coulomb.f64", sys.coulomb.data(),
                         static_cast<std::size_t>(sys.n_grid * sys.n_grid));
  if (sys.vxc_element)
    detail::write_f64_blob(dir / "vxc.f64", sys.vxc_element->data(),
                           static_cast<std::size_t>(sys.n));
}

}  // namespace gwcd

#endif  // GWCD_KSD_IO_HPP
