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

#ifndef CQPT_MODELS_HPP
#define CQPT_MODELS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqpt/basis.hpp"

namespace cqpt {

// Every Hamiltonian here has the form H = K + gV with V diagonal in the
// occupation / sigma^z basis.
enum class Family {
  grover,                      // -sum sx - gN |down..down><down..down|
  grover_modified,             // -sum sx - gN |up><up|_1
  fermion_impurity,            // free chain, -g n_i on the first N_imp sites
  fermion_impurity_extensive,  // free chain, -g N_p n_1
  fermion_attractive,          // free chain, -g sum n_i n_{i+1}
  hardcore_boson_attractive,   // same with bosonic hops
  ising_transverse,            // -sum sx - g sum sz sz
  counter_example,             // -N |+x><+x|_1 - gN |up><up|_1
};

enum class Boundary { open, periodic };

std::string_view to_string(Family f);
std::string_view to_string(Boundary b);
Family family_from_string(std::string_view name);
Boundary boundary_from_string(std::string_view name);

bool is_spin_family(Family f);
bool is_impurity_family(Family f);
bool is_attractive_family(Family f);

struct ModelSpec {
  Family family = Family::grover;
  int n_sites = 1;
  int n_particles = 0;   // ignored for spin families (N_p = N)
  int n_impurities = 0;  // fermion_impurity only
  Boundary boundary = Boundary::open;
  double g = 0.0;

  ModelSpec with_g(double coupling) const {
    ModelSpec m = *this;
    m.g = coupling;
    return m;
  }
};

// Throws ConfigError on any invariant violation.
void validate(const ModelSpec& model);
// The same checks without the basis size limit, for solvers that never
// enumerate configurations.
void validate_parameters(const ModelSpec& model);

// N_p as used for per-particle energies (N for spin families).
int particle_count(const ModelSpec& model);

SectorSpec sector_of(const ModelSpec& model);

// Nearest-neighbour bonds as 0-based (i, j) pairs. The wrap bond is added
// for periodic chains with at least three sites.
std::vector<std::pair<int, int>> chain_bonds(int n_sites, Boundary boundary);

struct Neighbor {
  Configuration config;
  double amplitude = 0.0;  // <m|H|c>, m != c
};

struct MatrixRow {
  double diagonal = 0.0;
  std::vector<Neighbor> neighbors;
};

// <c|H|c> and every nonzero off-diagonal element <m|H|c>.
MatrixRow matrix_row(const ModelSpec& model, Configuration c);
// Same, reusing the storage of `out`.
void matrix_row(const ModelSpec& model, Configuration c, MatrixRow& out);

// V(c) with unit coupling. Integer valued for every family.
double unit_potential(const ModelSpec& model, Configuration c);

// g * V(c), the potential part of the diagonal.
double potential_value(const ModelSpec& model, Configuration c);

// Diagonal of K (nonzero only for the counter-example's x-projector).
double kinetic_diagonal(const ModelSpec& model);

struct StoquasticVerdict {
  bool stoquastic = true;
  // A pair (c, m) with <m|H|c> > 0 when not stoquastic.
  std::optional<std::pair<Configuration, Configuration>> witness;
  double witness_amplitude = 0.0;
};

StoquasticVerdict stoquastic_check(const ModelSpec& model);

}  // namespace cqpt

#endif  // CQPT_MODELS_HPP
