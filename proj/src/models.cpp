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

#include "cqpt/models.hpp"

#include <array>
#include <bit>
#include <cmath>

#include "cqpt/errors.hpp"

namespace cqpt {

namespace {

struct FamilyName {
  Family family;
  std::string_view name;
};

constexpr std::array<FamilyName, 8> kFamilyNames{{
    {Family::grover, "grover"},
    {Family::grover_modified, "grover-modified"},
    {Family::fermion_impurity, "fermion-impurity"},
    {Family::fermion_impurity_extensive, "fermion-impurity-extensive"},
    {Family::fermion_attractive, "fermion-attractive"},
    {Family::hardcore_boson_attractive, "hardcore-boson-attractive"},
    {Family::ising_transverse, "ising-transverse"},
    {Family::counter_example, "counter-example"},
}};

std::uint64_t low_mask(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

// Occupied sites strictly between a and b (a < b).
int occupied_between(std::uint64_t bits, int a, int b) {
  const std::uint64_t mask = low_mask(b) & ~low_mask(a + 1);
  return std::popcount(bits & mask);
}

int aligned_minus_antialigned(const ModelSpec& m, std::uint64_t bits) {
  int sum = 0;
  for (auto [i, j] : chain_bonds(m.n_sites, m.boundary)) {
    sum += (((bits >> i) ^ (bits >> j)) & 1U) ? -1 : 1;
  }
  return sum;
}

int occupied_bonds(const ModelSpec& m, std::uint64_t bits) {
  int n = 0;
  for (auto [i, j] : chain_bonds(m.n_sites, m.boundary)) {
    n += static_cast<int>((bits >> i) & (bits >> j) & 1U);
  }
  return n;
}

}  // namespace

std::string_view to_string(Family f) {
  for (const auto& e : kFamilyNames) {
    if (e.family == f) return e.name;
  }
  return "unknown";
}

std::string_view to_string(Boundary b) { return b == Boundary::open ? "obc" : "pbc"; }

Family family_from_string(std::string_view name) {
  for (const auto& e : kFamilyNames) {
    if (e.name == name) return e.family;
  }
  throw ConfigError("unknown model family '" + std::string(name) + "'");
}

Boundary boundary_from_string(std::string_view name) {
  if (name == "obc" || name == "open") return Boundary::open;
  if (name == "pbc" || name == "periodic") return Boundary::periodic;
  throw ConfigError("unknown boundary '" + std::string(name) + "' (expected obc or pbc)");
}

bool is_spin_family(Family f) {
  return f == Family::grover || f == Family::grover_modified || f == Family::ising_transverse ||
         f == Family::counter_example;
}

bool is_impurity_family(Family f) {
  return f == Family::fermion_impurity || f == Family::fermion_impurity_extensive;
}

bool is_attractive_family(Family f) {
  return f == Family::fermion_attractive || f == Family::hardcore_boson_attractive;
}

void validate(const ModelSpec& m) {
  if (m.n_sites > kMaxSites) {
    throw ConfigError("n_sites must be <= 64 for basis enumeration, got " + std::to_string(m.n_sites));
  }
  validate_parameters(m);
}

void validate_parameters(const ModelSpec& m) {
  if (m.n_sites < 1) throw ConfigError("n_sites must be >= 1, got " + std::to_string(m.n_sites));
  if (!std::isfinite(m.g)) throw ConfigError("coupling g must be finite");
  if (is_spin_family(m.family)) return;
  if (m.n_particles < 0 || m.n_particles > m.n_sites) {
    throw ConfigError("n_particles must lie in [0, n_sites], got " + std::to_string(m.n_particles));
  }
  if (m.family == Family::fermion_impurity &&
      (m.n_impurities < 0 || m.n_impurities > m.n_particles)) {
    throw ConfigError("n_impurities must lie in [0, n_particles], got " +
                      std::to_string(m.n_impurities));
  }
  if (is_attractive_family(m.family) && m.g < 0.0) {
    throw ConfigError("attractive families require g >= 0");
  }
}

int particle_count(const ModelSpec& m) {
  return is_spin_family(m.family) ? m.n_sites : m.n_particles;
}

SectorSpec sector_of(const ModelSpec& m) {
  if (is_spin_family(m.family)) return {m.n_sites, std::nullopt, Statistics::spin};
  const Statistics s = m.family == Family::hardcore_boson_attractive ? Statistics::hardcore_boson
                                                                      : Statistics::fermion;
  return {m.n_sites, m.n_particles, s};
}

std::vector<std::pair<int, int>> chain_bonds(int n_sites, Boundary boundary) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < n_sites; ++i) bonds.emplace_back(i, i + 1);
  if (boundary == Boundary::periodic && n_sites >= 3) bonds.emplace_back(n_sites - 1, 0);
  return bonds;
}

double unit_potential(const ModelSpec& m, Configuration c) {
  const double n = m.n_sites;
  switch (m.family) {
    case Family::grover:
      return c.bits == 0 ? -n : 0.0;
    case Family::grover_modified:
    case Family::counter_example:
      return c.occupied(0) ? -n : 0.0;
    case Family::fermion_impurity:
      return -static_cast<double>(std::popcount(c.bits & low_mask(m.n_impurities)));
    case Family::fermion_impurity_extensive:
      return c.occupied(0) ? -static_cast<double>(m.n_particles) : 0.0;
    case Family::fermion_attractive:
    case Family::hardcore_boson_attractive:
      return -static_cast<double>(occupied_bonds(m, c.bits));
    case Family::ising_transverse:
      return -static_cast<double>(aligned_minus_antialigned(m, c.bits));
  }
  return 0.0;
}

double potential_value(const ModelSpec& m, Configuration c) { return m.g * unit_potential(m, c); }

double kinetic_diagonal(const ModelSpec& m) {
  // -N |+x><+x| = -N/2 (1 + sx)
  return m.family == Family::counter_example ? -0.5 * m.n_sites : 0.0;
}

void matrix_row(const ModelSpec& m, Configuration c, MatrixRow& out) {
  out.neighbors.clear();
  out.diagonal = kinetic_diagonal(m) + potential_value(m, c);
  const int n = m.n_sites;
  switch (m.family) {
    case Family::grover:
    case Family::grover_modified:
    case Family::ising_transverse:
      for (int i = 0; i < n; ++i) {
        out.neighbors.push_back({Configuration{c.bits ^ (std::uint64_t{1} << i), n}, -1.0});
      }
      return;
    case Family::counter_example:
      out.neighbors.push_back({Configuration{c.bits ^ 1U, n}, -0.5 * n});
      return;
    case Family::fermion_impurity:
    case Family::fermion_impurity_extensive:
    case Family::fermion_attractive:
    case Family::hardcore_boson_attractive: {
      const bool fermion = m.family != Family::hardcore_boson_attractive;
      for (auto [i, j] : chain_bonds(n, m.boundary)) {
        if (c.occupied(i) == c.occupied(j)) continue;
        const std::uint64_t moved = c.bits ^ (std::uint64_t{1} << i) ^ (std::uint64_t{1} << j);
        double amp = -1.0;
        if (fermion) {
          const int between = occupied_between(c.bits, std::min(i, j), std::max(i, j));
          if (between % 2 == 1) amp = 1.0;
        }
        out.neighbors.push_back({Configuration{moved, n}, amp});
      }
      return;
    }
  }
}

MatrixRow matrix_row(const ModelSpec& m, Configuration c) {
  const Sector sector(sector_of(m));
  if (!sector.contains(c)) {
    throw ConfigError("configuration " + c.to_string() + " is outside the model's sector");
  }
  MatrixRow row;
  matrix_row(m, c, row);
  return row;
}

StoquasticVerdict stoquastic_check(const ModelSpec& m) {
  validate(m);
  const Sector sector(sector_of(m));
  StoquasticVerdict verdict;
  if (sector.size() <= (std::uint64_t{1} << 20)) {
    MatrixRow row;
    sector.for_each([&](Configuration c) {
      if (!verdict.stoquastic) return;
      matrix_row(m, c, row);
      for (const auto& nb : row.neighbors) {
        if (nb.amplitude > 0.0) {
          verdict.stoquastic = false;
          verdict.witness = std::make_pair(c, nb.config);
          verdict.witness_amplitude = nb.amplitude;
          return;
        }
      }
    });
    return verdict;
  }
  // Family rule: only the fermionic wrap hop can carry a positive sign,
  // and it does so when it passes an odd number N_p - 1 of particles.
  const bool fermion = !is_spin_family(m.family) && m.family != Family::hardcore_boson_attractive;
  const int n = m.n_sites;
  const int np = m.n_particles;
  if (fermion && m.boundary == Boundary::periodic && n >= 3 && np >= 2 && np < n && np % 2 == 0) {
    // Particle on the last site, the rest on sites 1..np-1, site 0 empty.
    std::uint64_t bits = std::uint64_t{1} << (n - 1);
    for (int i = 1; i < np; ++i) bits |= std::uint64_t{1} << i;
    const Configuration c{bits, n};
    const Configuration moved{bits ^ (std::uint64_t{1} << (n - 1)) ^ 1U, n};
    verdict.stoquastic = false;
    verdict.witness = std::make_pair(c, moved);
    verdict.witness_amplitude = 1.0;
  }
  return verdict;
}

}  // namespace cqpt
