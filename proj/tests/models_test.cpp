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

#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "cqpt/errors.hpp"
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

double amplitude(const ModelSpec& m, Configuration from, Configuration to) {
  for (const auto& nb : matrix_row(m, from).neighbors)
    if (nb.config == to) return nb.amplitude;
  return 0.0;
}

TEST(Names, RoundTrip) {
  for (auto f : {Family::grover, Family::grover_modified, Family::fermion_impurity,
                 Family::fermion_impurity_extensive, Family::fermion_attractive,
                 Family::hardcore_boson_attractive, Family::ising_transverse,
                 Family::counter_example}) {
    EXPECT_EQ(family_from_string(to_string(f)), f);
  }
  EXPECT_EQ(boundary_from_string("pbc"), Boundary::periodic);
  EXPECT_EQ(boundary_from_string("open"), Boundary::open);
  EXPECT_THROW(family_from_string("hubbard"), ConfigError);
  EXPECT_THROW(boundary_from_string("twisted"), ConfigError);
}

TEST(Validate, RejectsBadSpecs) {
  EXPECT_THROW(validate(make(Family::grover, 0, 0, Boundary::open, 1)), ConfigError);
  EXPECT_THROW(validate(make(Family::grover, 65, 0, Boundary::open, 1)), ConfigError);
  EXPECT_THROW(validate(make(Family::fermion_attractive, 6, 7, Boundary::open, 1)), ConfigError);
  EXPECT_THROW(validate(make(Family::fermion_impurity, 6, 2, Boundary::open, 1, 3)), ConfigError);
  EXPECT_THROW(validate(make(Family::fermion_attractive, 6, 3, Boundary::open, -1)), ConfigError);
  EXPECT_THROW(validate(make(Family::grover, 4, 0, Boundary::open, NAN)), ConfigError);
  EXPECT_NO_THROW(validate(make(Family::fermion_impurity, 6, 2, Boundary::open, -1, 2)));
}

TEST(Bonds, WrapOnlyForLongRings) {
  EXPECT_EQ(chain_bonds(4, Boundary::open).size(), 3u);
  EXPECT_EQ(chain_bonds(4, Boundary::periodic).size(), 4u);
  EXPECT_EQ(chain_bonds(2, Boundary::periodic).size(), 1u);
  EXPECT_EQ(chain_bonds(1, Boundary::periodic).size(), 0u);
}

TEST(JordanWigner, AdjacentHopHasMinusOne) {
  const auto m = make(Family::fermion_attractive, 4, 2, Boundary::open, 0);
  EXPECT_DOUBLE_EQ(amplitude(m, Configuration::from_string("1001"),
                             Configuration::from_string("1010")),
                   -1.0);
}

TEST(JordanWigner, WrapHopCountsParticlesInBetween) {
  const auto even = make(Family::fermion_attractive, 4, 2, Boundary::periodic, 0);
  // Site 1 -> site 4 across one occupied site.
  EXPECT_DOUBLE_EQ(amplitude(even, Configuration::from_string("1010"),
                             Configuration::from_string("0011")),
                   1.0);
  const auto odd = make(Family::fermion_attractive, 4, 3, Boundary::periodic, 0);
  EXPECT_DOUBLE_EQ(amplitude(odd, Configuration::from_string("1110"),
                             Configuration::from_string("0111")),
                   -1.0);
  const auto boson = make(Family::hardcore_boson_attractive, 4, 2, Boundary::periodic, 0);
  EXPECT_DOUBLE_EQ(amplitude(boson, Configuration::from_string("1010"),
                             Configuration::from_string("0011")),
                   -1.0);
}

TEST(Potential, FamilyValues) {
  const auto grover = make(Family::grover, 3, 0, Boundary::open, 2.0);
  EXPECT_EQ(unit_potential(grover, Configuration::from_string("000")), -3.0);
  EXPECT_EQ(unit_potential(grover, Configuration::from_string("010")), 0.0);
  EXPECT_EQ(potential_value(grover, Configuration::from_string("000")), -6.0);

  const auto mod = make(Family::grover_modified, 3, 0, Boundary::open, 1.0);
  EXPECT_EQ(unit_potential(mod, Configuration::from_string("100")), -3.0);
  EXPECT_EQ(unit_potential(mod, Configuration::from_string("011")), 0.0);

  const auto imp = make(Family::fermion_impurity, 6, 3, Boundary::open, 1.0, 2);
  EXPECT_EQ(unit_potential(imp, Configuration::from_string("110100")), -2.0);
  EXPECT_EQ(unit_potential(imp, Configuration::from_string("010101")), -1.0);

  const auto ext = make(Family::fermion_impurity_extensive, 6, 3, Boundary::open, 1.0);
  EXPECT_EQ(unit_potential(ext, Configuration::from_string("100101")), -3.0);

  const auto attr = make(Family::fermion_attractive, 5, 3, Boundary::periodic, 1.0);
  EXPECT_EQ(unit_potential(attr, Configuration::from_string("11001")), -2.0);

  const auto ising = make(Family::ising_transverse, 4, 0, Boundary::periodic, 1.0);
  EXPECT_EQ(unit_potential(ising, Configuration::from_string("1111")), -4.0);
  EXPECT_EQ(unit_potential(ising, Configuration::from_string("1010")), 4.0);
}

TEST(MatrixRow, SymmetricForAllFamilies) {
  std::vector<ModelSpec> models = {
      make(Family::grover, 5, 0, Boundary::open, 0.7),
      make(Family::grover_modified, 5, 0, Boundary::open, 0.7),
      make(Family::counter_example, 5, 0, Boundary::open, 0.7),
      make(Family::ising_transverse, 5, 0, Boundary::periodic, 0.7),
      make(Family::fermion_impurity, 7, 3, Boundary::periodic, 0.7, 2),
      make(Family::fermion_impurity_extensive, 7, 3, Boundary::open, 0.7),
      make(Family::fermion_attractive, 7, 4, Boundary::periodic, 0.7),
      make(Family::hardcore_boson_attractive, 7, 4, Boundary::periodic, 0.7),
  };
  for (const auto& m : models) {
    const Sector s(sector_of(m));
    s.for_each([&](Configuration c) {
      for (const auto& nb : matrix_row(m, c).neighbors) {
        EXPECT_TRUE(s.contains(nb.config));
        EXPECT_DOUBLE_EQ(amplitude(m, nb.config, c), nb.amplitude) << to_string(m.family);
      }
    });
  }
}

// Full matrix from matrix rows, indexed by bit pattern.
oracle::Mat assemble(const ModelSpec& m) {
  const int d = 1 << m.n_sites;
  oracle::Mat h = oracle::Mat::Zero(d, d);
  const Sector s(sector_of(m));
  s.for_each([&](Configuration c) {
    const auto row = matrix_row(m, c);
    h(c.bits, c.bits) = row.diagonal;
    for (const auto& nb : row.neighbors) h(nb.config.bits, c.bits) = nb.amplitude;
  });
  return h;
}

TEST(MatrixRow, MatchesLadderOperatorConstruction) {
  for (bool periodic : {false, true}) {
    const Boundary bc = periodic ? Boundary::periodic : Boundary::open;
    for (bool fermion : {true, false}) {
      const int n = 6;
      for (int np = 0; np <= n; ++np) {
        const auto m = make(fermion ? Family::fermion_attractive : Family::hardcore_boson_attractive,
                            n, np, bc, 0.8);
        oracle::Mat ref = oracle::hopping(n, periodic, fermion);
        for (auto [i, j] : oracle::bonds(n, periodic)) {
          ref -= 0.8 * oracle::site_op(n, i, oracle::nop()) * oracle::site_op(n, j, oracle::nop());
        }
        const oracle::Mat mine = assemble(m);
        const oracle::Mat ref_block = oracle::restrict_particles(ref, np);
        const oracle::Mat mine_block = oracle::restrict_particles(mine, np);
        EXPECT_LT((ref_block - mine_block).cwiseAbs().maxCoeff(), 1e-14)
            << "fermion=" << fermion << " periodic=" << periodic << " np=" << np;
      }
    }
  }
}

TEST(MatrixRow, SpinFamiliesMatchPauliConstruction) {
  const int n = 5;
  const double g = 1.3;
  const int d = 1 << n;
  oracle::Mat kin = oracle::transverse(n);

  oracle::Mat grover = kin;
  grover(0, 0) -= g * n;
  EXPECT_LT((assemble(make(Family::grover, n, 0, Boundary::open, g)) - grover).cwiseAbs().maxCoeff(),
            1e-14);

  oracle::Mat mod = kin - g * n * oracle::site_op(n, 0, oracle::nop());
  EXPECT_LT(
      (assemble(make(Family::grover_modified, n, 0, Boundary::open, g)) - mod).cwiseAbs().maxCoeff(),
      1e-14);

  oracle::Mat plus = 0.5 * (oracle::eye(2) + oracle::sx());
  oracle::Mat counter = -n * oracle::site_op(n, 0, plus) - g * n * oracle::site_op(n, 0, oracle::nop());
  EXPECT_LT((assemble(make(Family::counter_example, n, 0, Boundary::open, g)) - counter)
                .cwiseAbs()
                .maxCoeff(),
            1e-14);

  oracle::Mat ising = kin;
  for (auto [i, j] : oracle::bonds(n, true))
    ising -= g * oracle::site_op(n, i, oracle::sz()) * oracle::site_op(n, j, oracle::sz());
  EXPECT_LT((assemble(make(Family::ising_transverse, n, 0, Boundary::periodic, g)) - ising)
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
  EXPECT_EQ(d, 32);
}

TEST(Stoquastic, FermionRingWithEvenFillingHasWitness) {
  const auto v = stoquastic_check(make(Family::fermion_attractive, 4, 2, Boundary::periodic, 1.0));
  EXPECT_FALSE(v.stoquastic);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_GT(v.witness_amplitude, 0.0);
  const auto m = make(Family::fermion_attractive, 4, 2, Boundary::periodic, 1.0);
  EXPECT_DOUBLE_EQ(amplitude(m, v.witness->first, v.witness->second), v.witness_amplitude);
}

TEST(Stoquastic, Verdicts) {
  EXPECT_TRUE(stoquastic_check(make(Family::fermion_attractive, 5, 3, Boundary::periodic, 1)).stoquastic);
  EXPECT_TRUE(stoquastic_check(make(Family::fermion_attractive, 8, 4, Boundary::open, 1)).stoquastic);
  EXPECT_TRUE(
      stoquastic_check(make(Family::hardcore_boson_attractive, 8, 4, Boundary::periodic, 1)).stoquastic);
  EXPECT_TRUE(stoquastic_check(make(Family::ising_transverse, 6, 0, Boundary::periodic, -1)).stoquastic);
  EXPECT_TRUE(stoquastic_check(make(Family::counter_example, 6, 0, Boundary::open, 1)).stoquastic);
  EXPECT_FALSE(stoquastic_check(make(Family::fermion_impurity, 6, 2, Boundary::periodic, 1, 1)).stoquastic);
  // Above the enumeration limit the family rule decides.
  EXPECT_FALSE(stoquastic_check(make(Family::fermion_attractive, 40, 20, Boundary::periodic, 1)).stoquastic);
  EXPECT_TRUE(stoquastic_check(make(Family::fermion_attractive, 40, 21, Boundary::periodic, 1)).stoquastic);
}

}  // namespace
}  // namespace cqpt
