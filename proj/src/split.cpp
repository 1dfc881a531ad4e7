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

#include "cqpt/split.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cqpt/errors.hpp"

namespace cqpt {

namespace {

BigInt big_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt pow2(int n) { return BigInt(1) << n; }

int bond_count(const ModelSpec& m) {
  return static_cast<int>(chain_bonds(m.n_sites, m.boundary).size());
}

struct ClosedForm {
  BigInt m_cond;
  double v_min;
};

std::optional<ClosedForm> closed_form(const ModelSpec& m) {
  const int n = m.n_sites;
  const int np = m.n_particles;
  const BigInt total = closed_form_m_total(m);
  const bool negative = m.g < 0.0;
  switch (m.family) {
    case Family::grover:
      if (negative) return ClosedForm{total - 1, 0.0};
      return ClosedForm{1, -static_cast<double>(n)};
    case Family::grover_modified:
    case Family::counter_example:
      return ClosedForm{pow2(n - 1), negative ? 0.0 : -static_cast<double>(n)};
    case Family::fermion_impurity: {
      const int ni = m.n_impurities;
      if (ni == 0) return ClosedForm{total, 0.0};
      if (!negative) return ClosedForm{big_binomial(n - ni, np - ni), -static_cast<double>(ni)};
      const int kmin = std::max(0, np - (n - ni));
      return ClosedForm{big_binomial(ni, kmin) * big_binomial(n - ni, np - kmin),
                        static_cast<double>(kmin)};
    }
    case Family::fermion_impurity_extensive:
      if (np == 0) return ClosedForm{1, 0.0};
      if (!negative) return ClosedForm{big_binomial(n - 1, np - 1), -static_cast<double>(np)};
      if (np == n) return ClosedForm{1, static_cast<double>(np)};
      return ClosedForm{big_binomial(n - 1, np), 0.0};
    case Family::fermion_attractive:
    case Family::hardcore_boson_attractive: {
      if (negative) return std::nullopt;
      if (np <= 1) return ClosedForm{total, 0.0};
      if (np == n) return ClosedForm{1, -static_cast<double>(bond_count(m))};
      const bool ring = m.boundary == Boundary::periodic && n >= 3;
      return ClosedForm{ring ? BigInt(n) : BigInt(n - np + 1), -static_cast<double>(np - 1)};
    }
    case Family::ising_transverse: {
      const int bonds = bond_count(m);
      if (!negative) return ClosedForm{2, -static_cast<double>(bonds)};
      const bool frustrated = m.boundary == Boundary::periodic && n >= 3 && n % 2 == 1;
      if (frustrated) return ClosedForm{BigInt(2 * n), -static_cast<double>(bonds - 2)};
      return ClosedForm{2, -static_cast<double>(bonds)};
    }
  }
  return std::nullopt;
}

}  // namespace

BigInt closed_form_m_total(const ModelSpec& m) {
  if (is_spin_family(m.family)) return pow2(m.n_sites);
  return big_binomial(m.n_sites, m.n_particles);
}

std::optional<BigInt> closed_form_m_cond(const ModelSpec& m) {
  auto cf = closed_form(m);
  if (!cf) return std::nullopt;
  return cf->m_cond;
}

std::optional<double> closed_form_v_min(const ModelSpec& m) {
  auto cf = closed_form(m);
  if (!cf) return std::nullopt;
  return cf->v_min;
}

SpaceSplit split_space(const ModelSpec& model) {
  validate(model);
  const Sector sector(sector_of(model));
  SpaceSplit split;
  split.model = model;
  split.orientation = model.g < 0.0 ? -1 : 1;
  split.m_total = sector.size();

  const auto cf = closed_form(model);
  if (sector.size() <= kMaxEnumerated) {
    double v_min = std::numeric_limits<double>::infinity();
    std::uint64_t count = 0;
    sector.for_each([&](Configuration c) {
      const double v = split.orientation * unit_potential(model, c);
      if (v < v_min) {
        v_min = v;
        count = 1;
      } else if (v == v_min) {
        ++count;
      }
    });
    split.v_min = v_min;
    split.m_cond = count;
    split.enumerated = true;
    if (cf && (cf->m_cond != BigInt(count) || cf->v_min != v_min)) {
      throw std::logic_error("closed-form M_cond disagrees with enumeration for " +
                             std::string(to_string(model.family)));
    }
    return split;
  }
  if (!cf) {
    throw CapabilityError("sector too large to enumerate and no closed form for M_cond");
  }
  split.v_min = cf->v_min;
  split.m_cond = static_cast<std::uint64_t>(cf->m_cond);
  return split;
}

ModelSpec scaled_model(const ModelSpec& tmpl, int n_sites, double density,
                       double impurity_fraction) {
  ModelSpec m = tmpl;
  m.n_sites = n_sites;
  if (is_spin_family(m.family)) {
    m.n_particles = n_sites;
    return m;
  }
  const double np = density * n_sites;
  if (std::abs(np - std::round(np)) > 1e-9) {
    throw ConfigError("density * N = " + std::to_string(np) + " is not an integer for N = " +
                      std::to_string(n_sites));
  }
  m.n_particles = static_cast<int>(std::lround(np));
  if (m.family == Family::fermion_impurity && impurity_fraction >= 0.0) {
    const double ni = impurity_fraction * m.n_particles;
    if (std::abs(ni - std::round(ni)) > 1e-9) {
      throw ConfigError("impurity_fraction * N_p = " + std::to_string(ni) +
                        " is not an integer for N = " + std::to_string(n_sites));
    }
    m.n_impurities = static_cast<int>(std::lround(ni));
  }
  return m;
}

RatioSeries ratio_series(const ModelSpec& tmpl, double density, std::span<const int> sizes,
                         double impurity_fraction) {
  RatioSeries series;
  for (int n : sizes) {
    const ModelSpec m = scaled_model(tmpl, n, density, impurity_fraction);
    // Counting works past the 64-site limit of the basis, so only the
    // occupation constraints are checked here.
    if (n < 1) throw ConfigError("ratio series sizes must be >= 1");
    if (!is_spin_family(m.family) && (m.n_particles < 0 || m.n_particles > n)) {
      throw ConfigError("N_p out of range at N = " + std::to_string(n));
    }
    if (m.n_impurities < 0 || m.n_impurities > m.n_particles) {
      throw ConfigError("N_imp out of range at N = " + std::to_string(n));
    }
    auto m_cond = closed_form_m_cond(m);
    if (!m_cond) throw CapabilityError("no closed form for M_cond in this family");
    RatioRow row;
    row.n_sites = n;
    row.n_particles = particle_count(m);
    row.m_cond = *m_cond;
    row.m_total = closed_form_m_total(m);
    row.ratio = BigRational(row.m_cond, row.m_total);
    row.log_ratio = std::log(static_cast<double>(row.m_cond)) -
                    std::log(static_cast<double>(row.m_total));
    series.rows.push_back(std::move(row));
  }
  if (series.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(series.rows.size());
    for (const auto& r : series.rows) {
      sx += r.n_sites;
      sy += r.log_ratio;
      sxx += static_cast<double>(r.n_sites) * r.n_sites;
      sxy += r.n_sites * r.log_ratio;
    }
    const double denom = k * sxx - sx * sx;
    if (denom != 0.0) series.slope = (k * sxy - sx * sy) / denom;
  }
  return series;
}

}  // namespace cqpt
