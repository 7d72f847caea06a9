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

#ifndef GWCD_CORE_HPP
#define GWCD_CORE_HPP

#include <atomic>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>

namespace gwcd {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Hartree -> eV, applied at report emission only. All internal math is
/// in Hartree atomic units.
inline constexpr double kHartreeToEv = 27.211386245988;

/// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A stored or constructed system failed one of its consistency checks;
/// the message names the failing check.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested too close to (or on top of) a pole, or an
/// integration path runs through one.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A shifted or reduced operator is numerically singular.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// HOMO-LUMO degeneracy: the contour machinery requires a strictly
/// positive gap.
class GapError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

inline double relative_diff(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Runs f(i) for i in [0, count) on up to `threads` workers. Each index
/// writes only its own slot, so results are identical for any thread
/// count; callers do any reduction afterwards in fixed index order.
inline void parallel_for_indexed(Index count, int threads,
                                 const std::function<void(Index)>& f) {
  if (threads <= 1 || count <= 1) {
    for (Index i = 0; i < count; ++i) f(i);
    return;
  }
  int n_workers = std::min<int>(threads, static_cast<int>(count));
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  std::atomic<Index> next{0};
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        Index i = next.fetch_add(1);
        if (i >= count) break;
        f(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gwcd

#endif  // GWCD_CORE_HPP
