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

#ifndef CQPT_QMC_HPP
#define CQPT_QMC_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cqpt/basis.hpp"
#include "cqpt/exact.hpp"
#include "cqpt/models.hpp"
#include "cqpt/split.hpp"

namespace cqpt {

// Continuous-time projector Monte Carlo with population reconfiguration.
//
// Each walker follows the hopping graph of K: from c it waits an
// exponential time of rate kappa(c), the number of allowed neighbours, and
// jumps to one of them uniformly. A sojourn of length tau multiplies its
// weight by exp[(kappa(c) - D(c) + E_ref) tau], D the diagonal of H. After
// every block of length dt the population is resampled systematically in
// proportion to the weights.
struct McConfig {
  std::uint64_t walkers = std::uint64_t{1} << 16;
  double dt = 16.0;
  int blocks = 128;
  double burn_in_fraction = 0.2;
  std::optional<double> reference_energy;  // defaults to E_cond
  std::uint64_t seed = 1;
  Subspace restriction = Subspace::full;
  int workers = 0;  // 0: one per hardware thread
};

// Kept blocks are grouped into at most this many bins for the jackknife.
inline constexpr int kJackknifeBins = 16;

// Throws ConfigError on invalid parameters.
void validate(const McConfig& config);

// Blocks kept after burn-in: floor(R (1 - burn_in_fraction)).
int blocks_used(const McConfig& config);

struct Walker {
  Configuration config;
  double log_weight = 0.0;  // weight = exp(log_weight) > 0
};

struct BlockRecord {
  int index = 0;
  double log_mean_weight = 0.0;  // log of the population-mean weight
  std::uint64_t jumps = 0;       // jumps of all walkers in the block
  double weighted_jump_rate = 0.0;
  double energy = 0.0;  // E_ref - log_mean_weight / dt
};

struct McEstimate {
  double energy = 0.0;
  double std_error = 0.0;  // jackknife over binned blocks
  int n_blocks_used = 0;
  double mean_jumps_per_unit_time = 0.0;
  double reference_energy = 0.0;
  // Walkers found outside the restriction at block ends (always 0).
  std::uint64_t restriction_violations = 0;
  std::vector<BlockRecord> trace;
  std::vector<Walker> final_walkers;
  std::vector<std::string> warnings;
  McConfig config;
};

// Throws SignProblemError for non-stoquastic models, CapabilityError for
// hop amplitudes of magnitude other than 1, EmptySubspaceError when the
// restriction leaves no configuration.
McEstimate run_projector_mc(const ModelSpec& model, const SpaceSplit& split,
                            const McConfig& config);

// Weighted jumps per unit imaginary time per walker over the kept blocks.
// At g = 0 it converges to |E^(0)|.
double mean_jump_rate(const McEstimate& estimate);

// A message when dt * |E^(0)| < 1: trajectories then hardly move.
std::optional<std::string> feasibility_warning(const ModelSpec& model, const McConfig& config);

struct TableDefaults {
  McConfig config;
  int table = 0;  // 1: impurity families, 2: interacting families
  int row_n = 0;
  int row_np = 0;
  std::vector<std::string> warnings;
};

// Published (dt, R) pairs by family and size; unlisted sizes take the
// nearest row, spin families the impurity table, both with a warning.
TableDefaults table_defaults(Family family, int n_sites);

// Reference energy used when the configuration leaves it unset.
double default_reference_energy(const ModelSpec& model, const SpaceSplit& split);

void write_trace_csv(std::ostream& out, const McEstimate& estimate);

}  // namespace cqpt

#endif  // CQPT_QMC_HPP
