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

#ifndef CQPT_SPLIT_HPP
#define CQPT_SPLIT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cqpt/basis.hpp"
#include "cqpt/models.hpp"

namespace cqpt {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// F = F_cond (+) F_norm, where F_cond is spanned by the configurations of
// minimal potential.
//
// The potential is oriented by the sign of g: for g < 0 the minimum of gV
// is the maximum of V, so `orientation` is -1 and v_min is the minimum of
// -V. For g >= 0 (including g = 0) the split is taken from V itself.
struct SpaceSplit {
  std::uint64_t m_total = 0;
  std::uint64_t m_cond = 0;
  double v_min = 0.0;
  int orientation = 1;
  bool enumerated = false;  // m_cond counted by enumeration, else closed form
  ModelSpec model;

  bool is_cond(Configuration c) const {
    return orientation * unit_potential(model, c) == v_min;
  }
  std::uint64_t m_norm() const { return m_total - m_cond; }
};

SpaceSplit split_space(const ModelSpec& model);

// Family closed forms (exact integers); nullopt where none is known.
BigInt closed_form_m_total(const ModelSpec& model);
std::optional<BigInt> closed_form_m_cond(const ModelSpec& model);
// Minimal oriented potential from the family formula.
std::optional<double> closed_form_v_min(const ModelSpec& model);

// Template instantiated at size N: N_p = density * N and, when
// impurity_fraction >= 0, N_imp = impurity_fraction * N_p. Throws
// ConfigError if either is not an integer. Spin families ignore both.
ModelSpec scaled_model(const ModelSpec& tmpl, int n_sites, double density,
                       double impurity_fraction = -1.0);

struct RatioRow {
  int n_sites = 0;
  int n_particles = 0;
  BigInt m_cond;
  BigInt m_total;
  BigRational ratio;
  double log_ratio = 0.0;
};

struct RatioSeries {
  std::vector<RatioRow> rows;
  double slope = 0.0;  // least-squares slope of log(M_cond / M) against N
};

RatioSeries ratio_series(const ModelSpec& tmpl, double density, std::span<const int> sizes,
                         double impurity_fraction = -1.0);

}  // namespace cqpt

#endif  // CQPT_SPLIT_HPP
