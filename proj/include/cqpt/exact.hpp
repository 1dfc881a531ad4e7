// Copyright 2026 The cqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CQPT_EXACT_HPP
#define CQPT_EXACT_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cqpt/models.hpp"
#include "cqpt/split.hpp"

namespace cqpt {

enum class Subspace { full, cond, norm };
enum class SolverKind { dense, lanczos, symmetric_reduced };
enum class SolverChoice { automatic, dense, lanczos };

std::string_view to_string(Subspace s);
std::string_view to_string(SolverKind s);
Subspace subspace_from_string(std::string_view name);

// Subspaces below this dimension are diagonalized densely.
inline constexpr std::uint64_t kDenseThreshold = 1024;
// Largest subspace the dense solver accepts when forced.
inline constexpr std::uint64_t kDenseCap = 4096;
// Largest subspace the Lanczos solver accepts.
inline constexpr std::uint64_t kLanczosCap = std::uint64_t{1} << 24;

struct SpectrumResult {
  double e0 = 0.0;
  std::optional<double> e1;
  std::optional<double> gap;
  std::uint64_t dim = 0;  // dimension of the matrix actually diagonalized
  SolverKind solver = SolverKind::dense;
  int iterations = 0;
};

// y = A x for a real symmetric operator.
using MatVec = std::function<void(std::span<const double> x, std::span<double> y)>;

struct LanczosOptions {
  int max_iterations = 500;
  // Converged when the Ritz residual drops below tolerance * max(|e0|, 1).
  double tolerance = 1e-12;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

struct LanczosResult {
  double value = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;
};

// Lowest eigenpair of A restricted to the orthogonal complement of
// `deflate` (orthonormal vectors). Full reorthogonalization.
LanczosResult lanczos_lowest(const MatVec& apply, std::size_t dim,
                             std::span<const Eigen::VectorXd> deflate = {},
                             const LanczosOptions& options = {});

// P H P for the basis states selected by a split, stored row-compressed.
class RestrictedHamiltonian {
 public:
  RestrictedHamiltonian(const ModelSpec& model, const SpaceSplit& split, Subspace subspace);

  std::size_t dim() const { return basis_.size(); }
  const std::vector<Configuration>& basis() const { return basis_; }
  void apply(std::span<const double> x, std::span<double> y) const;
  Eigen::MatrixXd to_dense() const;

 private:
  std::vector<Configuration> basis_;
  std::vector<double> diagonal_;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> columns_;
  std::vector<double> values_;
};

// Ground (and optionally first excited) energy of H restricted to the
// selected subspace. Cross-block couplings are dropped.
SpectrumResult ground_state(const ModelSpec& model, const SpaceSplit& split, Subspace subspace,
                            bool want_excited, SolverChoice choice = SolverChoice::automatic,
                            const LanczosOptions& options = {});
SpectrumResult ground_state(const ModelSpec& model, Subspace subspace, bool want_excited,
                            SolverChoice choice = SolverChoice::automatic);

// Grover model through its permutation-symmetric block of dimension N + 1.
// Levels outside the symmetric block enter as -(N - 2), the lowest level
// of every other irreducible sector (N - 1 copies).
SpectrumResult grover_symmetric_ground(int n_sites, double g, Subspace subspace);

struct GapOptions {
  SolverChoice choice = SolverChoice::automatic;
  bool grover_symmetric = false;  // use the reduced block for the grover family
  bool want_gap = true;
};

struct GapReport {
  double e = 0.0;
  double e_cond = 0.0;
  double e_norm = 0.0;
  std::optional<double> e_excited;
  std::optional<double> delta;  // E' - E
  double delta0 = 0.0;          // |E_cond - E_norm|
  double delta1 = 0.0;          // |E_cond - E|
  SolverKind e_solver = SolverKind::dense;
  SolverKind cond_solver = SolverKind::dense;
  SolverKind norm_solver = SolverKind::dense;
};

// Throws EmptySubspaceError when F_norm is empty (M_cond = M).
GapReport gap_report(const ModelSpec& model, const SpaceSplit& split, double g,
                     const GapOptions& options = {});

}  // namespace cqpt

#endif  // CQPT_EXACT_HPP
