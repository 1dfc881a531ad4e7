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

#include "cqpt/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cqpt/errors.hpp"

namespace cqpt {

std::string_view to_string(Subspace s) {
  switch (s) {
    case Subspace::full: return "full";
    case Subspace::cond: return "cond";
    case Subspace::norm: return "norm";
  }
  return "?";
}

std::string_view to_string(SolverKind s) {
  switch (s) {
    case SolverKind::dense: return "dense";
    case SolverKind::lanczos: return "lanczos";
    case SolverKind::symmetric_reduced: return "symmetric";
  }
  return "?";
}

Subspace subspace_from_string(std::string_view name) {
  if (name == "full") return Subspace::full;
  if (name == "cond") return Subspace::cond;
  if (name == "norm") return Subspace::norm;
  throw ConfigError("unknown subspace '" + std::string(name) + "' (full, cond, norm)");
}

LanczosResult lanczos_lowest(const MatVec& apply, std::size_t dim,
                             std::span<const Eigen::VectorXd> deflate,
                             const LanczosOptions& options) {
  if (dim == 0 || deflate.size() >= dim) {
    throw EmptySubspaceError("lanczos: no vector left after deflation");
  }
  const std::size_t effective = dim - deflate.size();
  const auto n = static_cast<Eigen::Index>(dim);

  auto project_out = [&](Eigen::VectorXd& w) {
    for (const auto& d : deflate) w -= d.dot(w) * d;
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(rng);
  project_out(v);
  project_out(v);
  v.normalize();

  std::vector<Eigen::VectorXd> krylov;
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::VectorXd w(n);

  for (int j = 0; j < options.max_iterations; ++j) {
    krylov.push_back(v);
    apply(std::span<const double>(v.data(), dim), std::span<double>(w.data(), dim));
    const double a = v.dot(w);
    alpha.push_back(a);
    w -= a * v;
    if (j > 0) w -= beta.back() * krylov[static_cast<std::size_t>(j - 1)];
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : krylov) w -= q.dot(w) * q;
      project_out(w);
    }
    const double b = w.norm();
    const auto k = static_cast<std::size_t>(j + 1);
    const bool breakdown = b <= 1e-10 * std::max(1.0, std::abs(a));
    const bool last = j + 1 == options.max_iterations;
    if (k % 5 == 0 || breakdown || last || k >= effective) {
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(k));
      Eigen::VectorXd sub =
          Eigen::Map<Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(k - 1));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
      es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const double theta = es.eigenvalues()(0);
      const Eigen::VectorXd s = es.eigenvectors().col(0);
      const double residual = b * std::abs(s(static_cast<Eigen::Index>(k - 1)));
      if (residual < options.tolerance * std::max(std::abs(theta), 1.0) || breakdown ||
          k >= effective) {
        LanczosResult r;
        r.value = theta;
        r.iterations = j + 1;
        r.vector = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < k; ++i) r.vector += s(static_cast<Eigen::Index>(i)) * krylov[i];
        r.vector.normalize();
        return r;
      }
    }
    beta.push_back(b);
    v = w / b;
  }
  throw ConvergenceError("lanczos: no convergence after " +
                         std::to_string(options.max_iterations) + " iterations");
}

RestrictedHamiltonian::RestrictedHamiltonian(const ModelSpec& model, const SpaceSplit& split,
                                             Subspace subspace) {
  const Sector sector(sector_of(model));
  if (sector.size() > kLanczosCap) {
    throw CapabilityError("sector of dimension " + std::to_string(sector.size()) +
                          " exceeds the exact-diagonalization limit");
  }
  constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> local;
  const bool restricted = subspace != Subspace::full;
  if (restricted) local.assign(sector.size(), kAbsent);
  sector.for_each([&](Configuration c) {
    if (restricted) {
      if (split.is_cond(c) != (subspace == Subspace::cond)) return;
      local[sector.rank(c)] = static_cast<std::uint32_t>(basis_.size());
    }
    basis_.push_back(c);
  });

  diagonal_.reserve(basis_.size());
  row_start_.reserve(basis_.size() + 1);
  row_start_.push_back(0);
  MatrixRow row;
  for (const auto& c : basis_) {
    matrix_row(model, c, row);
    diagonal_.push_back(row.diagonal);
    for (const auto& nb : row.neighbors) {
      const std::uint64_t r = sector.rank(nb.config);
      const std::uint32_t col = restricted ? local[r] : static_cast<std::uint32_t>(r);
      if (col == kAbsent) continue;
      columns_.push_back(col);
      values_.push_back(nb.amplitude);
    }
    row_start_.push_back(columns_.size());
  }
}

void RestrictedHamiltonian::apply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    double acc = diagonal_[i] * x[i];
    for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) acc += values_[p] * x[columns_[p]];
    y[i] = acc;
  }
}

Eigen::MatrixXd RestrictedHamiltonian::to_dense() const {
  const auto n = static_cast<Eigen::Index>(basis_.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    h(ii, ii) = diagonal_[i];
    for (std::size_t p = row_start_[i]; p < row_start_[i + 1]; ++p) {
      h(ii, static_cast<Eigen::Index>(columns_[p])) = values_[p];
    }
  }
  return h;
}

namespace {

std::uint64_t subspace_dim(const SpaceSplit& split, Subspace subspace) {
  switch (subspace) {
    case Subspace::full: return split.m_total;
    case Subspace::cond: return split.m_cond;
    case Subspace::norm: return split.m_norm();
  }
  return 0;
}

void finish(SpectrumResult& r) {
  if (r.e1) r.gap = *r.e1 - r.e0;
}

}  // namespace

SpectrumResult ground_state(const ModelSpec& model, const SpaceSplit& split, Subspace subspace,
                            bool want_excited, SolverChoice choice,
                            const LanczosOptions& options) {
  validate(model);
  const std::uint64_t dim = subspace_dim(split, subspace);
  if (dim == 0) {
    throw EmptySubspaceError(std::string("the ") + std::string(to_string(subspace)) +
                             " subspace is empty");
  }
  if (dim > kLanczosCap) {
    throw CapabilityError("subspace of dimension " + std::to_string(dim) +
                          " exceeds the exact-diagonalization limit");
  }
  SolverKind kind = dim < kDenseThreshold ? SolverKind::dense : SolverKind::lanczos;
  if (choice == SolverChoice::dense) kind = SolverKind::dense;
  if (choice == SolverChoice::lanczos) kind = SolverKind::lanczos;
  if (kind == SolverKind::dense && dim > kDenseCap) {
    throw CapabilityError("dense solver limited to dimension " + std::to_string(kDenseCap));
  }

  const RestrictedHamiltonian h(model, split, subspace);
  SpectrumResult r;
  r.dim = h.dim();
  r.solver = kind;
  if (kind == SolverKind::dense) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.to_dense(), Eigen::EigenvaluesOnly);
    r.e0 = es.eigenvalues()(0);
    if (want_excited && h.dim() >= 2) r.e1 = es.eigenvalues()(1);
  } else {
    const MatVec op = [&h](std::span<const double> x, std::span<double> y) { h.apply(x, y); };
    const LanczosResult g0 = lanczos_lowest(op, h.dim(), {}, options);
    r.e0 = g0.value;
    r.iterations = g0.iterations;
    if (want_excited && h.dim() >= 2) {
      const Eigen::VectorXd deflate[] = {g0.vector};
      const LanczosResult g1 = lanczos_lowest(op, h.dim(), deflate, options);
      r.e1 = g1.value;
      r.iterations += g1.iterations;
    }
  }
  finish(r);
  return r;
}

SpectrumResult ground_state(const ModelSpec& model, Subspace subspace, bool want_excited,
                            SolverChoice choice) {
  return ground_state(model, split_space(model), subspace, want_excited, choice);
}

SpectrumResult grover_symmetric_ground(int n, double g, Subspace subspace) {
  if (n < 1) throw ConfigError("grover: N must be >= 1");
  SpectrumResult r;
  r.solver = SolverKind::symmetric_reduced;
  // The all-down state is F_cond for g >= 0 and F_norm for g < 0.
  const bool single = subspace != Subspace::full && ((subspace == Subspace::cond) == (g >= 0.0));
  if (single) {
    r.dim = 1;
    r.e0 = -g * n;
    return r;
  }
  // Dicke block |k>, k = number of up spins; <k-1|K|k> = -sqrt(k (N - k + 1)).
  const int first = subspace == Subspace::full ? 0 : 1;
  const int size = n + 1 - first;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(size);
  Eigen::VectorXd sub(std::max(size - 1, 0));
  if (first == 0) diag(0) = -g * n;
  for (int i = 0; i + 1 < size; ++i) {
    const double k = first + i + 1;
    sub(i) = -std::sqrt(k * (n - k + 1));
  }
  std::vector<double> levels;
  if (size == 1) {
    levels.push_back(diag(0));
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    levels.assign(es.eigenvalues().data(), es.eigenvalues().data() + size);
  }
  for (int c = 0; c < std::min(n - 1, 2); ++c) levels.push_back(-(n - 2.0));
  std::sort(levels.begin(), levels.end());
  r.dim = static_cast<std::uint64_t>(size);
  r.e0 = levels[0];
  if (levels.size() >= 2) r.e1 = levels[1];
  finish(r);
  return r;
}

GapReport gap_report(const ModelSpec& model, const SpaceSplit& split, double g,
                     const GapOptions& options) {
  const ModelSpec m = model.with_g(g);
  validate(m);
  GapReport rep;
  SpectrumResult full, cond, norm;
  if (options.grover_symmetric && m.family == Family::grover) {
    full = grover_symmetric_ground(m.n_sites, g, Subspace::full);
    cond = grover_symmetric_ground(m.n_sites, g, Subspace::cond);
    norm = grover_symmetric_ground(m.n_sites, g, Subspace::norm);
  } else {
    const bool flipped = (g < 0.0) != (split.orientation < 0);
    const SpaceSplit local = flipped ? split_space(m) : SpaceSplit{};
    const SpaceSplit& s = flipped ? local : split;
    if (s.m_norm() == 0) {
      throw EmptySubspaceError("F_norm is empty (M_cond = M = " + std::to_string(s.m_total) + ")");
    }
    full = ground_state(m, s, Subspace::full, options.want_gap, options.choice);
    cond = ground_state(m, s, Subspace::cond, false, options.choice);
    norm = ground_state(m, s, Subspace::norm, false, options.choice);
  }
  rep.e = full.e0;
  rep.e_cond = cond.e0;
  rep.e_norm = norm.e0;
  if (options.want_gap) {
    rep.e_excited = full.e1;
    rep.delta = full.gap;
  }
  rep.delta0 = std::abs(rep.e_cond - rep.e_norm);
  rep.delta1 = std::abs(rep.e_cond - rep.e);
  rep.e_solver = full.solver;
  rep.cond_solver = cond.solver;
  rep.norm_solver = norm.solver;
  return rep;
}

}  // namespace cqpt
