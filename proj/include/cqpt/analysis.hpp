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

#ifndef CQPT_ANALYSIS_HPP
#define CQPT_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cqpt/exact.hpp"
#include "cqpt/models.hpp"
#include "cqpt/qmc.hpp"
#include "cqpt/split.hpp"

namespace cqpt {

// How one of the three energies E, E_cond, E_norm is obtained.
enum class Method { ed, symmetric, quadratic, qmc, closed_form, none };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct SweepPlan {
  Method full = Method::ed;
  Method cond = Method::closed_form;  // falls back to ed without a closed form
  Method norm = Method::ed;
  bool want_gap = false;
  // Rows hold thermodynamic energies per particle; N and N_p are unset.
  bool thermodynamic = false;
  SolverChoice solver = SolverChoice::automatic;
  McConfig mc;
};

// Energies per particle; the gap diagnostics are absolute (not divided by
// N_p) for finite sizes and per particle for thermodynamic rows.
struct SweepRow {
  double g = 0.0;
  std::optional<int> n_sites;
  std::optional<int> n_particles;
  double e_over_np = 0.0;
  double e_cond_over_np = 0.0;
  std::optional<double> e_norm_over_np;
  std::optional<double> delta;
  std::optional<double> delta0;
  double delta1 = 0.0;
  std::string e_solver;
  std::string enorm_solver;
  std::optional<double> mc_stderr;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
};

// One row per g, in grid order. Throws CapabilityError when a requested
// method does not apply to the model. Deterministic runs assert
// E <= min(E_cond, E_norm); Monte Carlo violations become warnings.
// `before_row` is called with each g before its row is computed.
SweepResult sweep(const ModelSpec& model, std::span<const double> g_grid, const SweepPlan& plan,
                  const std::function<void(double)>& before_row = {});

// g_min, g_min + step, ... up to g_max (inclusive within half a step).
std::vector<double> make_grid(double g_min, double g_max, double step);

// Thermodynamic energies per particle; nullopt where no closed form.
struct ThermodynamicEnergies {
  double epsilon = 0.0;
  double epsilon_cond = 0.0;
  std::optional<double> epsilon_norm;
};
std::optional<ThermodynamicEnergies> thermodynamic_energies(Family family, double g);

enum class Diagnostic { delta0, delta1 };
enum class CriticalMethod { delta0_min, delta1_min, analytic_coexistence };

std::string_view to_string(Diagnostic d);
std::string_view to_string(CriticalMethod m);
Diagnostic diagnostic_from_string(std::string_view name);

struct CriticalEstimate {
  std::optional<double> g_c;  // nullopt: no crossing
  CriticalMethod method = CriticalMethod::delta0_min;
  double uncertainty = 0.0;
  // parabolic-minimum, zero, kink, boundary, monotone, analytic
  std::string detail;
};

// Locates g_c from the minimum of delta / N_p along the rows (sorted by g,
// at least 5). Interior minima are refined by a parabola through the
// minimum and its neighbours. A minimum at the upper end of a finite-size
// curve that falls steeply and then levels off is reported at the point
// of largest curvature; a minimum at the lower end, or a thermodynamic
// curve that never reaches zero, gives no crossing.
CriticalEstimate locate_critical(std::span<const SweepRow> rows, Diagnostic diagnostic);

// Solves eps_cond(g) = eps_norm(g) in closed form. Throws CapabilityError
// for families without closed-form thermodynamic energies.
CriticalEstimate coexistence_analytic(Family family, double density);

struct CouplingBound {
  double b_value = 0.0;  // -(largest singular value of the cross block of K)
  double beta_per_particle = 0.0;
  std::uint64_t m_cond = 0;
  std::uint64_t m_norm = 0;
  double frobenius_bound = 0.0;  // sqrt(M_cond) * largest row norm
  Eigen::VectorXd cond_vector;   // unit vectors realizing B
  Eigen::VectorXd norm_vector;
};

inline constexpr std::uint64_t kCouplingCap = std::uint64_t{1} << 14;

CouplingBound cross_block_coupling(const ModelSpec& model, const SpaceSplit& split);

struct MixingBound {
  double value = 0.0;
  double x = 0.0;  // weight on the condensed part at the minimum
};

// inf over x in [0, 1] of eps_cond x + eps_norm (1 - x) + 2 beta sqrt(x (1 - x)).
// Requires beta <= 0.
MixingBound mixing_lower_bound(double eps_cond, double eps_norm, double beta);

// Closed-form restricted energies per site for the split and for the split
// with K and V exchanged.
struct SpecularReport {
  BigInt m_total;
  BigInt m_cond;
  BigInt m_cond_primed;
  double e_cond = 0.0;
  double e_norm = 0.0;
  double e_cond_primed = 0.0;
  double e_norm_primed = 0.0;
  std::optional<double> e_exact;  // exact ground energy per site
};

SpecularReport specular_split(Family family, int n_sites, double g);

// CSV with the column set
// g,N,Np,E_over_Np,E_cond_over_Np,E_norm_over_Np,delta,delta0,delta1,E_solver,Enorm_solver,mc_stderr
std::string csv_header();
std::string csv_line(const SweepRow& row);
std::string to_csv(std::span<const SweepRow> rows);
// Throws ConfigError on malformed input.
std::vector<SweepRow> parse_csv(std::string_view text);

}  // namespace cqpt

#endif  // CQPT_ANALYSIS_HPP
