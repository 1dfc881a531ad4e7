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

#ifndef CQPT_QUADRATIC_HPP
#define CQPT_QUADRATIC_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cqpt/models.hpp"

namespace cqpt {

// Single-particle problem of a free chain with a field on its first sites.
//   A(i, i+1) = A(i+1, i) = -1, A(i, i) = -g for i < n_imp,
// plus the wrap entries A(0, N-1) = A(N-1, 0) = corner for periodic
// chains with N >= 3. corner = -1 is the fermion ring; hard-core bosons
// map to a ring twisted by (-1)^N_p.
struct SingleParticleSpectrum {
  Eigen::MatrixXd matrix_a;
  std::vector<double> levels;  // ascending
};

SingleParticleSpectrum impurity_spectrum(int n_sites, int n_imp, double g, Boundary bc,
                                         double corner = -1.0);

struct FillingResult {
  double energy = 0.0;       // sum of the lowest N_p levels
  std::optional<double> gap;  // e_{N_p+1} - e_{N_p}, when 1 <= N_p < N
};

FillingResult fill_levels(const SingleParticleSpectrum& spectrum, int n_particles);

// Particle-hole gap at fixed particle number. Throws CapabilityError when
// N_p = N (or N_p = 0): no excitation exists inside the sector.
double many_body_gap_quadratic(const SingleParticleSpectrum& spectrum, int n_particles);

// Ground energy E^(0)(N, N_p) of N_p free fermions on an open N-site chain.
double free_chain_energy(int n_sites, int n_particles);

// E_cond / N_p for the impurity chain (impurities on the first N_imp sites).
double e_cond_impurity(int n_sites, int n_particles, int n_imp, double g);

// Per-particle restricted energies of the chain with the extensive field
// -g N_p n_1. The g > 0 branch is used at g = 0 as well.
struct ModifiedImpurityEnergies {
  double e_cond_per_particle = 0.0;
  double e_norm_per_particle = 0.0;
};
ModifiedImpurityEnergies modified_impurity_energies(int n_sites, int n_particles, double g);

// Ground energy per site of the transverse-field Ising chain in the
// thermodynamic limit (unit field, coupling g).
double pfeuty_epsilon(double g);

// Many-body ground state (and particle-hole gap) of the impurity families.
FillingResult quadratic_ground(const ModelSpec& model);

// Ground energy of the model at g = 0, E^(0). Spin families give -N.
double free_ground_energy(const ModelSpec& model);

// Restricted ground energies E_cond and E_norm at finite size where a
// closed form exists; nullopt otherwise.
std::optional<double> closed_form_e_cond(const ModelSpec& model);
std::optional<double> closed_form_e_norm(const ModelSpec& model);

}  // namespace cqpt

#endif  // CQPT_QUADRATIC_HPP
