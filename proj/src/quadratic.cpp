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

#include "cqpt/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cqpt/errors.hpp"

namespace cqpt {

SingleParticleSpectrum impurity_spectrum(int n, int n_imp, double g, Boundary bc, double corner) {
  if (n < 1) throw ConfigError("impurity_spectrum: N must be >= 1");
  if (n_imp < 0 || n_imp > n) throw ConfigError("impurity_spectrum: N_imp must lie in [0, N]");
  SingleParticleSpectrum s;
  s.matrix_a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) s.matrix_a(i, i + 1) = s.matrix_a(i + 1, i) = -1.0;
  for (int i = 0; i < n_imp; ++i) s.matrix_a(i, i) = -g;
  const bool ring = bc == Boundary::periodic && n >= 3;
  if (ring) s.matrix_a(0, n - 1) = s.matrix_a(n - 1, 0) = corner;

  Eigen::VectorXd values;
  if (ring) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.matrix_a, Eigen::EigenvaluesOnly);
    values = es.eigenvalues();
  } else {
    Eigen::VectorXd diag = s.matrix_a.diagonal();
    Eigen::VectorXd sub = Eigen::VectorXd::Constant(std::max(n - 1, 0), -1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    values = es.eigenvalues();
  }
  s.levels.assign(values.data(), values.data() + values.size());
  return s;
}

FillingResult fill_levels(const SingleParticleSpectrum& s, int np) {
  const int n = static_cast<int>(s.levels.size());
  if (np < 0 || np > n) throw ConfigError("fill_levels: N_p must lie in [0, N]");
  FillingResult r;
  for (int l = 0; l < np; ++l) r.energy += s.levels[static_cast<std::size_t>(l)];
  if (np >= 1 && np < n) {
    r.gap = s.levels[static_cast<std::size_t>(np)] - s.levels[static_cast<std::size_t>(np - 1)];
  }
  return r;
}

double many_body_gap_quadratic(const SingleParticleSpectrum& s, int np) {
  const int n = static_cast<int>(s.levels.size());
  if (np < 1 || np >= n) {
    throw CapabilityError("no particle-hole excitation at N_p = " + std::to_string(np) +
                          ", N = " + std::to_string(n));
  }
  return *fill_levels(s, np).gap;
}

double free_chain_energy(int n, int np) {
  if (np < 0 || np > n) throw ConfigError("free_chain_energy: N_p must lie in [0, N]");
  double e = 0.0;
  for (int l = 1; l <= np; ++l) e -= 2.0 * std::cos(std::numbers::pi * l / (n + 1));
  return e;
}

double e_cond_impurity(int n, int np, int n_imp, double g) {
  if (np < 1) throw ConfigError("e_cond_impurity: N_p must be >= 1");
  if (n_imp < 0 || n_imp > np || np > n) {
    throw ConfigError("e_cond_impurity: need 0 <= N_imp <= N_p <= N");
  }
  return -g * n_imp / np + free_chain_energy(n - n_imp, np - n_imp) / np;
}

ModifiedImpurityEnergies modified_impurity_energies(int n, int np, double g) {
  if (np < 1 || np > n) throw ConfigError("modified_impurity_energies: need 1 <= N_p <= N");
  // Site 1 occupied: field energy -g per particle, the rest free on N-1 sites.
  const double occupied = -g + free_chain_energy(n - 1, np - 1) / np;
  // Site 1 empty. Undefined (no states) at N_p = N; report +inf there.
  const double empty = np < n ? free_chain_energy(n - 1, np) / np
                              : std::numeric_limits<double>::infinity();
  if (g < 0.0) return {empty, occupied};
  return {occupied, empty};
}

double pfeuty_epsilon(double g) {
  if (!std::isfinite(g) || g < 0.0) throw ConfigError("pfeuty_epsilon: g must be finite and >= 0");
  using boost::math::quadrature::gauss_kronrod;
  auto integrand = [g](double q) { return std::sqrt(1.0 + 2.0 * g * std::cos(q) + g * g); };
  double error = 0.0;
  // Even integrand: integrate [0, pi] and double. At g = 1 the only
  // nonsmooth point is the endpoint q = pi.
  const double half = gauss_kronrod<double, 61>::integrate(integrand, 0.0, std::numbers::pi, 20,
                                                           1e-15, &error);
  return -half / std::numbers::pi;
}

FillingResult quadratic_ground(const ModelSpec& m) {
  validate_parameters(m);
  SingleParticleSpectrum s;
  switch (m.family) {
    case Family::fermion_impurity:
      s = impurity_spectrum(m.n_sites, m.n_impurities, m.g, m.boundary);
      break;
    case Family::fermion_impurity_extensive:
      s = impurity_spectrum(m.n_sites, std::min(1, m.n_sites), m.g * m.n_particles, m.boundary);
      break;
    default:
      throw CapabilityError("quadratic solver applies to impurity families only, not " +
                            std::string(to_string(m.family)));
  }
  return fill_levels(s, m.n_particles);
}

double free_ground_energy(const ModelSpec& m) {
  validate_parameters(m);
  if (is_spin_family(m.family)) return -static_cast<double>(m.n_sites);
  const double corner = m.family == Family::hardcore_boson_attractive
                            ? (m.n_particles % 2 == 0 ? 1.0 : -1.0)
                            : -1.0;
  const auto s = impurity_spectrum(m.n_sites, 0, 0.0, m.boundary, corner);
  return fill_levels(s, m.n_particles).energy;
}

std::optional<double> closed_form_e_cond(const ModelSpec& m) {
  validate_parameters(m);
  const int n = m.n_sites;
  const int np = m.n_particles;
  const double g = m.g;
  const bool negative = g < 0.0;
  switch (m.family) {
    case Family::grover:
      if (negative) return std::nullopt;
      return -g * n;
    case Family::grover_modified:
      return negative ? -(n - 1.0) : -(n - 1.0) - g * n;
    case Family::counter_example:
      return negative ? -0.5 * n : -0.5 * n - g * n;
    case Family::fermion_impurity: {
      const int ni = m.n_impurities;
      if (ni == 0 || np == 0) return std::nullopt;
      if (!negative) return e_cond_impurity(n, np, ni, g) * np;
      // Impurity sites emptied; the rest is an open chain on both boundaries.
      if (np > n - ni) return std::nullopt;
      return free_chain_energy(n - ni, np);
    }
    case Family::fermion_impurity_extensive: {
      if (np == 0 || (negative && np == n)) return std::nullopt;
      return modified_impurity_energies(n, np, g).e_cond_per_particle * np;
    }
    case Family::fermion_attractive:
    case Family::hardcore_boson_attractive: {
      if (np <= 1) return std::nullopt;
      const bool ring = m.boundary == Boundary::periodic && n >= 3;
      if (np == n) return -g * static_cast<double>(chain_bonds(n, m.boundary).size());
      // A single hole on a ring hops between closest-packed states.
      if (ring && n - np == 1) return std::nullopt;
      return -g * (np - 1);
    }
    case Family::ising_transverse: {
      if (n == 1) return std::nullopt;
      const bool frustrated = m.boundary == Boundary::periodic && n >= 3 && n % 2 == 1;
      if (negative && frustrated) return std::nullopt;
      return -std::abs(g) * static_cast<double>(chain_bonds(n, m.boundary).size());
    }
  }
  return std::nullopt;
}

std::optional<double> closed_form_e_norm(const ModelSpec& m) {
  validate_parameters(m);
  const int n = m.n_sites;
  const int np = m.n_particles;
  const double g = m.g;
  const bool negative = g < 0.0;
  switch (m.family) {
    case Family::grover_modified:
      return negative ? -(n - 1.0) - g * n : -(n - 1.0);
    case Family::counter_example:
      return negative ? -0.5 * n - g * n : -0.5 * n;
    case Family::fermion_impurity_extensive: {
      if (np == 0 || np == n) return std::nullopt;
      return modified_impurity_energies(n, np, g).e_norm_per_particle * np;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace cqpt
