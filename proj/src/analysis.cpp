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

#include "cqpt/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <Eigen/Sparse>

#include "cqpt/errors.hpp"
#include "cqpt/quadratic.hpp"

namespace cqpt {

namespace {

struct NamedMethod {
  Method method;
  std::string_view name;
};

constexpr NamedMethod kMethodNames[] = {
    {Method::ed, "ed"},          {Method::symmetric, "symmetric"},
    {Method::quadratic, "quadratic"}, {Method::qmc, "qmc"},
    {Method::closed_form, "closed-form"}, {Method::none, "none"},
};

struct Energy {
  double value = 0.0;
  std::string solver;
  std::optional<double> gap;
  std::optional<double> stderr_mc;
};

class RowSolver {
 public:
  RowSolver(const ModelSpec& model, const SweepPlan& plan) : model_(model), plan_(plan) {}

  Energy full(const ModelSpec& m) {
    switch (plan_.full) {
      case Method::ed: {
        const auto r = ground_state(m, split(m), Subspace::full, plan_.want_gap, plan_.solver);
        return {r.e0, std::string(to_string(r.solver)), r.gap, std::nullopt};
      }
      case Method::symmetric: {
        require_grover(Method::symmetric);
        const auto r = grover_symmetric_ground(m.n_sites, m.g, Subspace::full);
        return {r.e0, "symmetric", plan_.want_gap ? r.gap : std::nullopt, std::nullopt};
      }
      case Method::quadratic: {
        const auto q = quadratic_ground(m);
        return {q.energy, "quadratic", plan_.want_gap ? q.gap : std::nullopt, std::nullopt};
      }
      case Method::qmc:
        return monte_carlo(m, Subspace::full);
      case Method::closed_form: {
        if (m.family != Family::counter_example) {
          throw CapabilityError("no closed-form ground energy for " +
                                std::string(to_string(m.family)) + " at finite N");
        }
        const double g = m.g;
        const double e = m.n_sites * (-0.5 * (1.0 + g) - 0.5 * std::sqrt(1.0 + g * g));
        const double gap = m.n_sites * std::sqrt(1.0 + g * g);
        return {e, "closed-form", plan_.want_gap ? std::optional<double>(gap) : std::nullopt,
                std::nullopt};
      }
      case Method::none:
        break;
    }
    throw ConfigError("the ground energy E needs a method other than none");
  }

  std::optional<Energy> restricted(const ModelSpec& m, Subspace sub, Method method) {
    switch (method) {
      case Method::none:
        if (sub == Subspace::cond) throw ConfigError("E_cond needs a method other than none");
        return std::nullopt;
      case Method::closed_form:
      case Method::quadratic: {
        const auto e = sub == Subspace::cond ? closed_form_e_cond(m) : closed_form_e_norm(m);
        if (e) return Energy{*e, "closed-form", std::nullopt, std::nullopt};
        if (method == Method::quadratic || sub == Subspace::norm) {
          throw CapabilityError(std::string("no closed form for E_") +
                                std::string(to_string(sub)) + " of " +
                                std::string(to_string(m.family)));
        }
        // E_cond falls back to a solver.
        if (m.family == Family::grover) return symmetric(m, sub);
        return exact(m, sub);
      }
      case Method::ed:
        return exact(m, sub);
      case Method::symmetric:
        require_grover(Method::symmetric);
        return symmetric(m, sub);
      case Method::qmc:
        return monte_carlo(m, sub);
    }
    return std::nullopt;
  }

 private:
  const SpaceSplit& split(const ModelSpec& m) {
    auto& slot = m.g < 0.0 ? negative_ : positive_;
    if (!slot) slot = split_space(m);
    return *slot;
  }

  void require_grover(Method method) const {
    if (model_.family != Family::grover) {
      throw CapabilityError("method " + std::string(to_string(method)) +
                            " applies to the grover family only");
    }
  }

  Energy exact(const ModelSpec& m, Subspace sub) {
    const auto r = ground_state(m, split(m), sub, false, plan_.solver);
    return {r.e0, std::string(to_string(r.solver)), std::nullopt, std::nullopt};
  }

  Energy symmetric(const ModelSpec& m, Subspace sub) {
    return {grover_symmetric_ground(m.n_sites, m.g, sub).e0, "symmetric", std::nullopt,
            std::nullopt};
  }

  Energy monte_carlo(const ModelSpec& m, Subspace sub) {
    McConfig c = plan_.mc;
    c.restriction = sub;
    const auto est = run_projector_mc(m, split(m), c);
    for (const auto& w : est.warnings) warnings.push_back("g=" + std::to_string(m.g) + ": " + w);
    return {est.energy, "qmc", std::nullopt, est.std_error};
  }

  ModelSpec model_;
  SweepPlan plan_;
  std::optional<SpaceSplit> positive_;
  std::optional<SpaceSplit> negative_;

 public:
  std::vector<std::string> warnings;
};

bool uses_basis(const SweepPlan& p) {
  for (Method m : {p.full, p.cond, p.norm}) {
    if (m == Method::ed || m == Method::qmc) return true;
  }
  return false;
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Method m) {
  for (const auto& e : kMethodNames) {
    if (e.method == m) return e.name;
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  for (const auto& e : kMethodNames) {
    if (e.name == name) return e.method;
  }
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (ed, symmetric, quadratic, qmc, closed-form, none)");
}

std::vector<double> make_grid(double g_min, double g_max, double step) {
  if (!std::isfinite(g_min) || !std::isfinite(g_max) || !(g_min < g_max)) {
    throw ConfigError("sweep: need finite g_min < g_max");
  }
  if (!(step > 0.0)) throw ConfigError("sweep: g_step must be positive");
  const auto count = static_cast<long>(std::floor((g_max - g_min) / step + 0.5));
  if (count > 1000000) throw ConfigError("sweep: more than 10^6 grid points");
  std::vector<double> grid;
  for (long i = 0; i <= count; ++i) grid.push_back(g_min + static_cast<double>(i) * step);
  return grid;
}

std::optional<ThermodynamicEnergies> thermodynamic_energies(Family family, double g) {
  switch (family) {
    case Family::grover:
      if (g < 0.0) return std::nullopt;
      return ThermodynamicEnergies{std::min(-1.0, -g), -g, -1.0};
    case Family::grover_modified:
      if (g < 0.0) return std::nullopt;
      return ThermodynamicEnergies{-1.0 - g, -1.0 - g, -1.0};
    case Family::counter_example:
      if (g < 0.0) return std::nullopt;
      return ThermodynamicEnergies{-0.5 * (1.0 + g) - 0.5 * std::sqrt(1.0 + g * g), -0.5 - g,
                                   -0.5};
    case Family::ising_transverse:
      return ThermodynamicEnergies{pfeuty_epsilon(std::abs(g)), -std::abs(g), std::nullopt};
    default:
      return std::nullopt;
  }
}

SweepResult sweep(const ModelSpec& model, std::span<const double> grid, const SweepPlan& plan,
                  const std::function<void(double)>& before_row) {
  SweepResult out;
  for (double g : grid) {
    if (!std::isfinite(g)) throw ConfigError("sweep: g values must be finite");
  }
  if (plan.thermodynamic) {
    for (double g : grid) {
      if (before_row) before_row(g);
      const auto te = thermodynamic_energies(model.family, g);
      if (!te) {
        throw CapabilityError("no thermodynamic closed form for " +
                              std::string(to_string(model.family)) + " at g = " + format_double(g));
      }
      SweepRow row;
      row.g = g;
      row.e_over_np = te->epsilon;
      row.e_cond_over_np = te->epsilon_cond;
      row.e_norm_over_np = te->epsilon_norm;
      if (te->epsilon_norm) row.delta0 = std::abs(te->epsilon_cond - *te->epsilon_norm);
      row.delta1 = std::abs(te->epsilon_cond - te->epsilon);
      row.e_solver = "closed-form";
      if (te->epsilon_norm) row.enorm_solver = "closed-form";
      out.rows.push_back(std::move(row));
    }
    return out;
  }

  // The symmetric reduction and closed forms reach beyond the 64-site basis.
  if (uses_basis(plan)) {
    validate(model);
  } else {
    validate_parameters(model);
  }
  RowSolver solver(model, plan);
  const int np = particle_count(model);
  if (np < 1) throw ConfigError("energies per particle need N_p >= 1");
  for (double g : grid) {
    if (before_row) before_row(g);
    const ModelSpec m = model.with_g(g);
    if (uses_basis(plan)) validate(m); else validate_parameters(m);
    const Energy e = solver.full(m);
    const Energy cond = *solver.restricted(m, Subspace::cond, plan.cond);
    const auto norm = solver.restricted(m, Subspace::norm, plan.norm);

    SweepRow row;
    row.g = g;
    row.n_sites = m.n_sites;
    row.n_particles = np;
    row.e_over_np = e.value / np;
    row.e_cond_over_np = cond.value / np;
    row.delta = e.gap;
    row.delta1 = std::abs(cond.value - e.value);
    row.e_solver = e.solver;
    row.mc_stderr = e.stderr_mc;
    double tolerance = 1e-9 * std::max(1.0, std::abs(e.value));
    double bound = cond.value;
    double mc_error = e.stderr_mc.value_or(0.0) + cond.stderr_mc.value_or(0.0);
    if (norm) {
      row.e_norm_over_np = norm->value / np;
      row.delta0 = std::abs(cond.value - norm->value);
      row.enorm_solver = norm->solver;
      bound = std::min(bound, norm->value);
      mc_error += norm->stderr_mc.value_or(0.0);
    }
    if (mc_error > 0.0) {
      if (e.value > bound + 3.0 * mc_error + tolerance) {
        out.warnings.push_back("g=" + format_double(g) +
                               ": Monte Carlo E exceeds min(E_cond, E_norm) by more than 3 sigma");
      }
    } else if (e.value > bound + tolerance) {
      throw std::logic_error("variational ordering E <= min(E_cond, E_norm) violated at g = " +
                             format_double(g));
    }
    out.rows.push_back(std::move(row));
  }
  out.warnings.insert(out.warnings.end(), solver.warnings.begin(), solver.warnings.end());
  return out;
}

std::string_view to_string(Diagnostic d) { return d == Diagnostic::delta0 ? "delta0" : "delta1"; }

std::string_view to_string(CriticalMethod m) {
  switch (m) {
    case CriticalMethod::delta0_min: return "delta0-min";
    case CriticalMethod::delta1_min: return "delta1-min";
    case CriticalMethod::analytic_coexistence: return "analytic-coexistence";
  }
  return "?";
}

Diagnostic diagnostic_from_string(std::string_view name) {
  if (name == "delta0") return Diagnostic::delta0;
  if (name == "delta1") return Diagnostic::delta1;
  throw ConfigError("unknown diagnostic '" + std::string(name) + "' (delta0, delta1)");
}

CriticalEstimate locate_critical(std::span<const SweepRow> rows, Diagnostic diagnostic) {
  if (rows.size() < 5) throw ConfigError("locate_critical needs at least 5 rows");
  CriticalEstimate est;
  est.method = diagnostic == Diagnostic::delta0 ? CriticalMethod::delta0_min
                                                : CriticalMethod::delta1_min;
  std::vector<double> x, y;
  bool thermodynamic = false;
  for (const auto& r : rows) {
    std::optional<double> v = diagnostic == Diagnostic::delta0 ? r.delta0 : r.delta1;
    if (!v) throw ConfigError("locate_critical: row at g = " + format_double(r.g) + " lacks " +
                              std::string(to_string(diagnostic)));
    if (!x.empty() && !(r.g > x.back())) {
      throw ConfigError("locate_critical: rows must be sorted by strictly increasing g");
    }
    thermodynamic = thermodynamic || !r.n_particles;
    x.push_back(r.g);
    y.push_back(r.n_particles ? *v / *r.n_particles : *v);
  }
  const std::size_t n = x.size();
  auto step_at = [&](std::size_t i) {
    const double left = i > 0 ? x[i] - x[i - 1] : 0.0;
    const double right = i + 1 < n ? x[i + 1] - x[i] : 0.0;
    return std::max(left, right);
  };

  // The two restricted energies meet on the grid.
  constexpr double kZero = 1e-9;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] > kZero) continue;
    if (i == 0) {
      est.detail = "boundary";
      return est;
    }
    est.g_c = x[i];
    est.uncertainty = 0.5 * step_at(i);
    est.detail = "zero";
    return est;
  }

  const std::size_t i = static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
  if (i > 0 && i + 1 < n) {
    const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
    const double denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    double vertex = a > 0.0 ? -b / (2.0 * a) : x1;
    est.g_c = std::clamp(vertex, x0, x2);
    est.uncertainty = 0.5 * step_at(i);
    est.detail = "parabolic-minimum";
    return est;
  }
  if (i == 0) {
    est.detail = "boundary";
    return est;
  }

  // Minimum at the upper end.
  bool monotone = true;
  for (std::size_t k = n - std::min<std::size_t>(n, 5) + 1; k < n; ++k) monotone &= y[k] <= y[k - 1];
  if (thermodynamic) {
    est.detail = monotone ? "monotone" : "boundary";
    return est;
  }
  std::size_t peak = 0;
  double best = 0.0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double curvature =
        2.0 * ((y[k + 1] - y[k]) / (x[k + 1] - x[k]) - (y[k] - y[k - 1]) / (x[k] - x[k - 1])) /
        (x[k + 1] - x[k - 1]);
    if (curvature > best) {
      best = curvature;
      peak = k;
    }
  }
  if (peak > 0) {
    const double before = (y[peak] - y[0]) / (x[peak] - x[0]);
    const double after = (y[n - 1] - y[peak]) / (x[n - 1] - x[peak]);
    if (before < 0.0 && std::abs(after) <= 0.5 * std::abs(before)) {
      est.g_c = x[peak];
      est.uncertainty = step_at(peak);
      est.detail = "kink";
      return est;
    }
  }
  est.detail = monotone ? "monotone" : "boundary";
  return est;
}

CriticalEstimate coexistence_analytic(Family family, double density) {
  CriticalEstimate est;
  est.method = CriticalMethod::analytic_coexistence;
  est.detail = "analytic";
  switch (family) {
    case Family::grover:
      // eps_cond = -g, eps_norm = -1.
      est.g_c = 1.0;
      return est;
    case Family::fermion_attractive:
    case Family::hardcore_boson_attractive:
      if (!(density > 0.0 && density < 1.0)) {
        throw ConfigError("attractive coexistence needs a filling strictly between 0 and 1");
      }
      // The equivalent XXZ chain reaches its ferromagnetic point at g = 2
      // for every magnetization.
      est.g_c = 2.0;
      return est;
    case Family::fermion_impurity_extensive:
      if (!(density > 0.0 && density < 1.0)) {
        throw ConfigError("coexistence needs a filling strictly between 0 and 1");
      }
      // eps_cond - eps_norm = -g: the branches meet at g = 0.
      est.g_c = 0.0;
      return est;
    case Family::grover_modified:
    case Family::counter_example:
      // eps_cond - eps_norm = -g < 0 for every g > 0.
      est.detail = "no solution for g > 0";
      return est;
    case Family::ising_transverse: {
      // eps(g) < -g throughout; eps + g -> -1/(4g) at large g.
      for (double g = 0.05; g <= 50.0; g += 0.05) {
        if (pfeuty_epsilon(g) >= -g) {
          est.g_c = g;
          return est;
        }
      }
      est.detail = "no solution for g > 0";
      return est;
    }
    case Family::fermion_impurity:
      break;
  }
  throw CapabilityError("no closed-form thermodynamic energies for " +
                        std::string(to_string(family)));
}

CouplingBound cross_block_coupling(const ModelSpec& model, const SpaceSplit& split) {
  validate(model);
  if (split.m_total > kCouplingCap) {
    throw CapabilityError("cross-block assembly limited to M <= " + std::to_string(kCouplingCap));
  }
  const Sector sector(sector_of(model));
  std::vector<Eigen::Index> local(sector.size());
  std::vector<Configuration> cond_states;
  Eigen::Index n_cond = 0, n_norm = 0;
  sector.for_each([&](Configuration c) {
    if (split.is_cond(c)) {
      local[sector.rank(c)] = n_cond++;
      cond_states.push_back(c);
    } else {
      local[sector.rank(c)] = n_norm++;
    }
  });
  CouplingBound out;
  out.m_cond = static_cast<std::uint64_t>(n_cond);
  out.m_norm = static_cast<std::uint64_t>(n_norm);
  const int np = particle_count(model);
  if (n_cond == 0 || n_norm == 0) return out;

  std::vector<Eigen::Triplet<double>> entries;
  std::vector<double> row_norm2(static_cast<std::size_t>(n_cond), 0.0);
  MatrixRow row;
  for (Eigen::Index r = 0; r < n_cond; ++r) {
    matrix_row(model, cond_states[static_cast<std::size_t>(r)], row);
    for (const auto& nb : row.neighbors) {
      if (split.is_cond(nb.config)) continue;
      entries.emplace_back(r, local[sector.rank(nb.config)], nb.amplitude);
      row_norm2[static_cast<std::size_t>(r)] += nb.amplitude * nb.amplitude;
    }
  }
  Eigen::SparseMatrix<double> c(n_cond, n_norm);
  c.setFromTriplets(entries.begin(), entries.end());
  out.frobenius_bound =
      std::sqrt(static_cast<double>(n_cond)) *
      std::sqrt(*std::max_element(row_norm2.begin(), row_norm2.end()));

  // Largest eigenpair of the smaller Gram matrix.
  const bool left = n_cond <= n_norm;
  const Eigen::SparseMatrix<double> gram =
      left ? Eigen::SparseMatrix<double>(c * c.transpose())
           : Eigen::SparseMatrix<double>(c.transpose() * c);
  const Eigen::Index d = gram.rows();
  double sigma2 = 0.0;
  Eigen::VectorXd vec;
  if (static_cast<std::uint64_t>(d) < kDenseThreshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(gram)};
    sigma2 = es.eigenvalues()(d - 1);
    vec = es.eigenvectors().col(d - 1);
  } else {
    const MatVec op = [&gram, d](std::span<const double> x, std::span<double> y) {
      Eigen::Map<Eigen::VectorXd>(y.data(), d) =
          -(gram * Eigen::Map<const Eigen::VectorXd>(x.data(), d));
    };
    const auto r = lanczos_lowest(op, static_cast<std::size_t>(d));
    sigma2 = -r.value;
    vec = r.vector;
  }
  const double sigma = std::sqrt(std::max(sigma2, 0.0));
  out.b_value = -sigma;
  out.beta_per_particle = out.b_value / np;
  if (sigma > 0.0) {
    // B = <u|C|v> = -sigma for u, v of opposite orientation.
    if (left) {
      out.cond_vector = vec;
      out.norm_vector = -(c.transpose() * vec) / sigma;
    } else {
      out.norm_vector = vec;
      out.cond_vector = -(c * vec) / sigma;
    }
  }
  if (sigma > out.frobenius_bound * (1.0 + 1e-12)) {
    throw std::logic_error("cross-block coupling exceeds its Frobenius bound");
  }
  return out;
}

MixingBound mixing_lower_bound(double a, double b, double beta) {
  if (!(beta <= 0.0)) throw ConfigError("mixing_lower_bound: beta must be <= 0");
  if (beta == 0.0) return a <= b ? MixingBound{a, 1.0} : MixingBound{b, 0.0};
  // With x = cos^2(t) the objective is (a+b)/2 + (a-b)/2 cos 2t + beta sin 2t,
  // t in [0, pi/2]; for beta <= 0 its global minimum lies in that range.
  const double half = 0.5 * (a - b);
  const double radius = std::hypot(half, beta);
  const double value = 0.5 * (a + b) - radius;
  const double x = 0.5 * (1.0 - half / radius);
  return {std::min({value, a, b}), x};
}

SpecularReport specular_split(Family family, int n, double g) {
  if (n < 1) throw ConfigError("specular_split: N must be >= 1");
  if (!(g >= 0.0)) throw ConfigError("specular_split: g must be >= 0");
  SpecularReport r;
  r.m_total = BigInt(1) << n;
  const double inv = 1.0 / n;
  switch (family) {
    case Family::grover_modified:
      r.m_cond = BigInt(1) << (n - 1);
      r.m_cond_primed = 1;
      r.e_cond = -1.0 - g + inv;
      r.e_norm = -1.0 + inv;
      r.e_cond_primed = -1.0 - 0.5 * g;
      r.e_norm_primed = -1.0 - g + 3.0 * inv;
      r.e_exact = -(n - 1.0) * inv - 0.5 * g - std::sqrt(0.25 * g * g + inv * inv);
      return r;
    case Family::counter_example:
      r.m_cond = BigInt(1) << (n - 1);
      r.m_cond_primed = BigInt(1) << (n - 1);
      r.e_cond = -0.5 - g;
      r.e_norm = -0.5;
      r.e_cond_primed = -1.0 - 0.5 * g;
      r.e_norm_primed = -0.5 * g;
      r.e_exact = -0.5 * (1.0 + g) - 0.5 * std::sqrt(1.0 + g * g);
      return r;
    default:
      break;
  }
  throw CapabilityError("specular split is available for grover-modified and counter-example only");
}

std::string csv_header() {
  return "g,N,Np,E_over_Np,E_cond_over_Np,E_norm_over_Np,delta,delta0,delta1,E_solver,"
         "Enorm_solver,mc_stderr";
}

std::string csv_line(const SweepRow& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  auto opt_int = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
  std::string s;
  s += format_double(r.g) + ',' + opt_int(r.n_sites) + ',' + opt_int(r.n_particles) + ',';
  s += format_double(r.e_over_np) + ',' + format_double(r.e_cond_over_np) + ',';
  s += opt(r.e_norm_over_np) + ',' + opt(r.delta) + ',' + opt(r.delta0) + ',';
  s += format_double(r.delta1) + ',' + r.e_solver + ',' + r.enorm_solver + ',' + opt(r.mc_stderr);
  return s;
}

std::string to_csv(std::span<const SweepRow> rows) {
  std::string s = csv_header() + '\n';
  for (const auto& r : rows) s += csv_line(r) + '\n';
  return s;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> f;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    f.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) return f;
    start = comma + 1;
  }
}

double parse_double(std::string_view s, int line, const char* column) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ConfigError("csv line " + std::to_string(line) + ": bad number in column " + column);
  }
  return v;
}

std::optional<double> parse_optional(std::string_view s, int line, const char* column) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, line, column);
}

std::optional<int> parse_optional_int(std::string_view s, int line, const char* column) {
  if (s.empty()) return std::nullopt;
  int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw ConfigError("csv line " + std::to_string(line) + ": bad integer in column " + column);
  }
  return v;
}

}  // namespace

std::vector<SweepRow> parse_csv(std::string_view text) {
  std::vector<SweepRow> rows;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != csv_header()) throw ConfigError("csv: unexpected header '" + std::string(line) + "'");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 12) {
      throw ConfigError("csv line " + std::to_string(line_no) + ": expected 12 fields, got " +
                        std::to_string(f.size()));
    }
    SweepRow r;
    r.g = parse_double(f[0], line_no, "g");
    r.n_sites = parse_optional_int(f[1], line_no, "N");
    r.n_particles = parse_optional_int(f[2], line_no, "Np");
    r.e_over_np = parse_double(f[3], line_no, "E_over_Np");
    r.e_cond_over_np = parse_double(f[4], line_no, "E_cond_over_Np");
    r.e_norm_over_np = parse_optional(f[5], line_no, "E_norm_over_Np");
    r.delta = parse_optional(f[6], line_no, "delta");
    r.delta0 = parse_optional(f[7], line_no, "delta0");
    r.delta1 = parse_double(f[8], line_no, "delta1");
    r.e_solver = std::string(f[9]);
    r.enorm_solver = std::string(f[10]);
    r.mc_stderr = parse_optional(f[11], line_no, "mc_stderr");
    rows.push_back(std::move(r));
  }
  if (line_no == 0) throw ConfigError("csv: empty input");
  return rows;
}

}  // namespace cqpt
