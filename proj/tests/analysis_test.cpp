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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "cqpt/errors.hpp"
#include "cqpt/quadratic.hpp"
#include "oracle.hpp"

namespace cqpt {
namespace {

ModelSpec make(Family f, int n, int np, Boundary bc, double g, int nimp = 0) {
  ModelSpec m;
  m.family = f;
  m.n_sites = n;
  m.n_particles = np;
  m.n_impurities = nimp;
  m.boundary = bc;
  m.g = g;
  return m;
}

// Golden-section minimum of f on [lo, hi].
template <class F>
double golden_min(F f, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  for (int i = 0; i < 200; ++i) {
    const double c = b - r * (b - a), d = a + r * (b - a);
    if (f(c) < f(d)) b = d; else a = c;
  }
  return f(0.5 * (a + b));
}

// Kinetic matrix on the full 2^N space from Kronecker products.
oracle::Mat kinetic(const ModelSpec& m) {
  const bool periodic = m.boundary == Boundary::periodic;
  switch (m.family) {
    case Family::fermion_impurity:
    case Family::fermion_impurity_extensive:
    case Family::fermion_attractive:
      return oracle::hopping(m.n_sites, periodic, true);
    case Family::hardcore_boson_attractive:
      return oracle::hopping(m.n_sites, periodic, false);
    default:
      return oracle::transverse(m.n_sites);
  }
}

double mixing_oracle(double a, double b, double beta, double x) {
  return x * a + (1.0 - x) * b + 2.0 * beta * std::sqrt(x * (1.0 - x));
}

TEST(Grid, InclusiveEndpoints) {
  const auto g = make_grid(0.5, 1.5, 0.25);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.back(), 1.5);
  EXPECT_THROW(make_grid(1.0, 0.0, 0.1), ConfigError);
  EXPECT_THROW(make_grid(0.0, 1.0, 0.0), ConfigError);
}

TEST(Sweep, GroverSymmetricMatchesExact) {
  const ModelSpec m = make(Family::grover, 8, 0, Boundary::open, 0.0);
  SweepPlan sym;
  sym.full = sym.cond = sym.norm = Method::symmetric;
  SweepPlan ed;
  ed.cond = Method::ed;
  const auto grid = make_grid(0.6, 1.4, 0.2);
  const auto a = sweep(m, grid, sym);
  const auto b = sweep(m, grid, ed);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(a.rows[i].e_over_np, b.rows[i].e_over_np, 1e-9);
    EXPECT_NEAR(a.rows[i].e_cond_over_np, b.rows[i].e_cond_over_np, 1e-9);
    EXPECT_NEAR(*a.rows[i].delta0, *b.rows[i].delta0, 1e-9);
    EXPECT_EQ(a.rows[i].n_particles, 8);
  }
}

TEST(Locate, GroverDelta0ApproachesOne) {
  SweepPlan plan;
  plan.full = plan.cond = plan.norm = Method::symmetric;
  const auto grid = make_grid(0.3, 1.7, 0.05);
  const auto r12 = sweep(make(Family::grover, 12, 0, Boundary::open, 0.0), grid, plan);
  const auto r6 = sweep(make(Family::grover, 6, 0, Boundary::open, 0.0), grid, plan);
  const auto c12 = locate_critical(r12.rows, Diagnostic::delta0);
  const auto c6 = locate_critical(r6.rows, Diagnostic::delta0);
  ASSERT_TRUE(c12.g_c && c6.g_c);
  EXPECT_NEAR(*c12.g_c, 1.0, 0.15);
  EXPECT_LT(std::abs(*c12.g_c - 1.0), std::abs(*c6.g_c - 1.0));
  EXPECT_GT(*c12.g_c, grid.front());
  EXPECT_LT(*c12.g_c, grid.back());
}

TEST(Locate, IsingThermodynamicHasNoCrossing) {
  SweepPlan plan;
  plan.thermodynamic = true;
  const auto grid = make_grid(0.1, 3.0, 0.1);
  const auto r = sweep(make(Family::ising_transverse, 8, 0, Boundary::open, 0.0), grid, plan);
  for (const auto& row : r.rows) {
    EXPECT_FALSE(row.n_sites.has_value());
    EXPECT_LT(row.e_over_np, row.e_cond_over_np);
  }
  const auto c = locate_critical(r.rows, Diagnostic::delta1);
  EXPECT_FALSE(c.g_c.has_value());
  EXPECT_THROW(locate_critical(r.rows, Diagnostic::delta0), ConfigError);
}

TEST(Locate, ZeroCrossingOnThermodynamicGrover) {
  SweepPlan plan;
  plan.thermodynamic = true;
  const auto grid = make_grid(0.5, 1.5, 0.1);
  const auto r = sweep(make(Family::grover, 4, 0, Boundary::open, 0.0), grid, plan);
  const auto c = locate_critical(r.rows, Diagnostic::delta1);
  ASSERT_TRUE(c.g_c);
  EXPECT_NEAR(*c.g_c, 1.0, 1e-9);
  EXPECT_EQ(c.detail, "zero");
}

TEST(Locate, RejectsShortOrUnsortedInput) {
  std::vector<SweepRow> rows(4);
  EXPECT_THROW(locate_critical(rows, Diagnostic::delta1), ConfigError);
  rows.resize(5);
  EXPECT_THROW(locate_critical(rows, Diagnostic::delta1), ConfigError);
}

TEST(Sweep, AttractiveCondClosedForm) {
  const ModelSpec m = make(Family::fermion_attractive, 12, 6, Boundary::open, 0.0);
  SweepPlan plan;
  plan.norm = Method::none;
  const double grid[] = {0.5, 1.0, 2.0};
  const auto r = sweep(m, grid, plan);
  for (const auto& row : r.rows) {
    EXPECT_NEAR(row.e_cond_over_np, -row.g * 5.0 / 6.0, 1e-12);
    EXPECT_EQ(row.enorm_solver, "");
    EXPECT_FALSE(row.delta0.has_value());
    EXPECT_LE(row.e_over_np, row.e_cond_over_np + 1e-12);
  }
}

TEST(Sweep, QuadraticMatchesExactForImpurity) {
  const ModelSpec m = make(Family::fermion_impurity, 10, 5, Boundary::open, 0.0, 2);
  SweepPlan q;
  q.full = Method::quadratic;
  q.norm = Method::none;
  q.want_gap = true;
  SweepPlan e;
  e.norm = Method::none;
  e.want_gap = true;
  const double grid[] = {0.5, 2.0, 4.0};
  const auto a = sweep(m, grid, q);
  const auto b = sweep(m, grid, e);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(a.rows[i].e_over_np, b.rows[i].e_over_np, 1e-9);
    EXPECT_NEAR(*a.rows[i].delta, *b.rows[i].delta, 1e-8);
  }
}

TEST(Sweep, MethodCapabilityChecks) {
  SweepPlan plan;
  plan.full = Method::symmetric;
  const double grid[] = {1.0};
  EXPECT_THROW(sweep(make(Family::ising_transverse, 4, 0, Boundary::open, 0.0), grid, plan),
               CapabilityError);
  plan.full = Method::none;
  EXPECT_THROW(sweep(make(Family::grover, 4, 0, Boundary::open, 0.0), grid, plan), ConfigError);
  EXPECT_THROW(method_from_string("bogus"), ConfigError);
  EXPECT_EQ(method_from_string("closed-form"), Method::closed_form);
}

TEST(Sweep, GroverSymmetricBeyondBasisLimit) {
  SweepPlan plan;
  plan.full = plan.cond = plan.norm = Method::symmetric;
  const double grid[] = {0.9, 1.1};
  const auto r = sweep(make(Family::grover, 200, 0, Boundary::open, 0.0), grid, plan);
  EXPECT_NEAR(r.rows[0].e_over_np, -1.0, 0.01);
  EXPECT_NEAR(r.rows[1].e_over_np, -1.1, 0.01);
}

TEST(Coexistence, AnalyticValues) {
  EXPECT_DOUBLE_EQ(*coexistence_analytic(Family::grover, 0.5).g_c, 1.0);
  EXPECT_DOUBLE_EQ(*coexistence_analytic(Family::fermion_attractive, 0.5).g_c, 2.0);
  EXPECT_DOUBLE_EQ(*coexistence_analytic(Family::fermion_impurity_extensive, 0.5).g_c, 0.0);
  EXPECT_FALSE(coexistence_analytic(Family::ising_transverse, 1.0).g_c.has_value());
  EXPECT_FALSE(coexistence_analytic(Family::grover_modified, 1.0).g_c.has_value());
  EXPECT_THROW(coexistence_analytic(Family::fermion_impurity, 0.5), CapabilityError);
  EXPECT_THROW(coexistence_analytic(Family::fermion_attractive, 1.0), ConfigError);
}

TEST(Mixing, ReferenceValues) {
  EXPECT_DOUBLE_EQ(mixing_lower_bound(-2.0, -1.0, 0.0).value, -2.0);
  const auto m = mixing_lower_bound(-1.0, -1.0, -0.5);
  EXPECT_NEAR(m.value, -1.5, 1e-12);
  EXPECT_NEAR(m.x, 0.5, 1e-12);
  const double v = mixing_lower_bound(-1.2, -1.0, -0.1).value;
  EXPECT_GE(v, -1.3);
  EXPECT_LE(v, -1.2);
  EXPECT_THROW(mixing_lower_bound(-1.0, -1.0, 0.1), ConfigError);
}

TEST(Mixing, MatchesNumericalMinimization) {
  const double cases[][3] = {{-1.2, -1.0, -0.1}, {-0.3, -2.0, -0.7}, {1.0, 0.5, -2.0},
                             {-1.0, -1.0, -0.5}, {0.0, 3.0, -1e-3}};
  for (const auto& c : cases) {
    const auto f = [&](double x) { return mixing_oracle(c[0], c[1], c[2], x); };
    double grid_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 100000; ++i) grid_min = std::min(grid_min, f(i / 100000.0));
    const double gs = golden_min(f, 0.0, 1.0);
    const auto r = mixing_lower_bound(c[0], c[1], c[2]);
    EXPECT_NEAR(r.value, gs, 1e-9);
    EXPECT_LE(r.value, grid_min + 1e-12);
    EXPECT_NEAR(f(r.x), r.value, 1e-9);
    EXPECT_LE(r.value, std::min(c[0], c[1]));
  }
}

TEST(Coupling, GroverTwoSites) {
  const ModelSpec m = make(Family::grover, 2, 0, Boundary::open, 1.0);
  const auto b = cross_block_coupling(m, split_space(m));
  EXPECT_NEAR(b.b_value, -std::sqrt(2.0), 1e-12);
  EXPECT_EQ(b.m_cond, 1u);
  EXPECT_EQ(b.m_norm, 3u);
}

TEST(Coupling, GroverScalesAsInverseRoot) {
  for (int n = 2; n <= 10; ++n) {
    const ModelSpec m = make(Family::grover, n, 0, Boundary::open, 1.0);
    const auto b = cross_block_coupling(m, split_space(m));
    EXPECT_NEAR(std::abs(b.b_value) / n, 1.0 / std::sqrt(n), 1e-12) << n;
    EXPECT_NEAR(b.beta_per_particle, b.b_value / n, 1e-15);
  }
}

TEST(Coupling, IsingDecreasesPerSite) {
  double last = std::numeric_limits<double>::infinity();
  for (int n : {4, 6, 8, 10}) {
    const ModelSpec m = make(Family::ising_transverse, n, 0, Boundary::open, 1.0);
    const auto b = cross_block_coupling(m, split_space(m));
    const double per = std::abs(b.b_value) / n;
    EXPECT_LT(per, last) << n;
    last = per;
  }
}

TEST(Coupling, MatchesDenseOracleAndIsBounded) {
  const ModelSpec cases[] = {
      make(Family::fermion_attractive, 8, 4, Boundary::periodic, 1.0),
      make(Family::hardcore_boson_attractive, 8, 3, Boundary::open, 1.0),
      make(Family::ising_transverse, 6, 0, Boundary::periodic, -1.0),
      make(Family::fermion_impurity, 8, 4, Boundary::open, 1.0, 2),
  };
  for (const auto& m : cases) {
    const auto split = split_space(m);
    const auto b = cross_block_coupling(m, split);
    // Kinetic matrix from the independent Kronecker-product construction.
    const oracle::Mat k = kinetic(m);
    const Sector sector(sector_of(m));
    std::vector<int> cond, norm, all;
    sector.for_each([&](Configuration c) {
      (split.is_cond(c) ? cond : norm).push_back(static_cast<int>(c.bits));
      all.push_back(static_cast<int>(c.bits));
    });
    oracle::Mat ks(all.size(), all.size());
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = 0; j < all.size(); ++j) ks(i, j) = k(all[i], all[j]);
    const auto ev = oracle::spectrum(ks);
    const double k_norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    oracle::Mat c(cond.size(), norm.size());
    for (std::size_t i = 0; i < cond.size(); ++i)
      for (std::size_t j = 0; j < norm.size(); ++j) c(i, j) = k(cond[i], norm[j]);
    Eigen::JacobiSVD<oracle::Mat> svd(c);
    EXPECT_NEAR(b.b_value, -svd.singularValues()(0), 1e-9);
    EXPECT_LE(std::abs(b.b_value), k_norm + 1e-9);
    EXPECT_LE(std::abs(b.b_value), b.frobenius_bound * (1 + 1e-12));
    EXPECT_NEAR(b.cond_vector.norm(), 1.0, 1e-9);
    EXPECT_NEAR(b.norm_vector.norm(), 1.0, 1e-9);
  }
}

TEST(Specular, GroverModifiedPrimedEnergies) {
  const auto r = specular_split(Family::grover_modified, 10, 1.0);
  EXPECT_NEAR(r.e_norm_primed, -1.7, 1e-12);
  EXPECT_EQ(r.m_cond_primed, 1);
  EXPECT_EQ(r.m_total, 1024);
  // Exact energy from diagonalization.
  const ModelSpec m = make(Family::grover_modified, 10, 0, Boundary::open, 1.0);
  EXPECT_NEAR(*r.e_exact, ground_state(m, Subspace::full, false).e0 / 10, 1e-10);
}

TEST(Specular, CounterExampleMinimum) {
  const auto r = specular_split(Family::counter_example, 6, 1.0);
  EXPECT_NEAR(std::min(r.e_cond_primed, r.e_norm_primed), -1.5, 1e-12);
  const ModelSpec m = make(Family::counter_example, 6, 0, Boundary::open, 1.0);
  EXPECT_NEAR(*r.e_exact, ground_state(m, Subspace::full, false).e0 / 6, 1e-10);
  EXPECT_THROW(specular_split(Family::ising_transverse, 6, 1.0), CapabilityError);
}

TEST(Csv, RoundTripIsByteIdentical) {
  SweepPlan plan;
  plan.want_gap = true;
  const auto grid = make_grid(0.1, 0.7, 0.3);
  const auto r = sweep(make(Family::fermion_attractive, 8, 4, Boundary::open, 0.0), grid, plan);
  const std::string text = to_csv(r.rows);
  EXPECT_EQ(to_csv(parse_csv(text)), text);
  SweepPlan thermo;
  thermo.thermodynamic = true;
  const auto t = sweep(make(Family::ising_transverse, 4, 0, Boundary::open, 0.0), grid, thermo);
  const std::string text2 = to_csv(t.rows);
  EXPECT_EQ(to_csv(parse_csv(text2)), text2);
  EXPECT_THROW(parse_csv("bad header\n"), ConfigError);
  EXPECT_THROW(parse_csv(csv_header() + "\n1,2\n"), ConfigError);
}

}  // namespace
}  // namespace cqpt
