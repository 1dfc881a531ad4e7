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

#include "cqpt/basis.hpp"

#include <array>
#include <limits>

#include "cqpt/errors.hpp"

namespace cqpt {

namespace {

using Table = std::array<std::array<std::uint64_t, kMaxSites + 1>, kMaxSites + 1>;

// Pascal triangle; entries that overflow are saturated to max().
const Table& pascal() {
  static const Table table = [] {
    Table t{};
    constexpr auto kSat = std::numeric_limits<std::uint64_t>::max();
    for (int n = 0; n <= kMaxSites; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k) {
        const std::uint64_t a = t[n - 1][k - 1];
        const std::uint64_t b = k <= n - 1 ? t[n - 1][k] : 0;
        t[n][k] = (a == kSat || b == kSat || a > kSat - b) ? kSat : a + b;
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

std::string Configuration::to_string() const {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if (occupied(i)) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

Configuration Configuration::from_string(std::string_view s) {
  if (s.empty() || s.size() > kMaxSites) {
    throw ConfigError("configuration string must have 1..64 characters");
  }
  Configuration c{0, static_cast<int>(s.size())};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      c.bits |= std::uint64_t{1} << i;
    } else if (s[i] != '0') {
      throw ConfigError("configuration string may contain only 0 and 1");
    }
  }
  return c;
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > kMaxSites) throw CapabilityError("binomial: n out of range");
  if (k < 0 || k > n) return 0;
  const std::uint64_t v = pascal()[n][k];
  if (v == std::numeric_limits<std::uint64_t>::max()) {
    throw CapabilityError("sector dimension overflows 64 bits");
  }
  return v;
}

Sector::Sector(const SectorSpec& spec) : spec_(spec) {
  if (spec.n_sites < 1 || spec.n_sites > kMaxSites) {
    throw ConfigError("n_sites must lie in [1, 64], got " + std::to_string(spec.n_sites));
  }
  if (spec.statistics == Statistics::spin) {
    if (spec.n_particles) throw ConfigError("spin sectors carry no particle number");
    if (spec.n_sites >= 64) throw CapabilityError("spin sector 2^64 overflows the index");
    size_ = std::uint64_t{1} << spec.n_sites;
    return;
  }
  if (!spec.n_particles) throw ConfigError("particle sector requires n_particles");
  const int k = *spec.n_particles;
  if (k < 0 || k > spec.n_sites) {
    throw ConfigError("n_particles must lie in [0, n_sites], got " + std::to_string(k));
  }
  size_ = binomial(spec.n_sites, k);
}

bool Sector::contains(Configuration c) const {
  if (c.width != spec_.n_sites) return false;
  if (spec_.n_sites < 64 && (c.bits >> spec_.n_sites) != 0) return false;
  return is_spin() || c.popcount() == *spec_.n_particles;
}

std::uint64_t Sector::rank(Configuration c) const {
  if (!contains(c)) throw ConfigError("configuration " + c.to_string() + " is outside the sector");
  if (is_spin()) return c.bits;
  const auto& t = pascal();
  std::uint64_t r = 0;
  int j = 1;
  for (std::uint64_t b = c.bits; b != 0; b &= b - 1, ++j) {
    r += t[std::countr_zero(b)][j];
  }
  return r;
}

Configuration Sector::unrank(std::uint64_t index) const {
  if (index >= size_) throw ConfigError("rank out of range");
  const int n = spec_.n_sites;
  if (is_spin()) return Configuration{index, n};
  const auto& t = pascal();
  std::uint64_t bits = 0;
  std::uint64_t r = index;
  // Greedy decoding, highest particle first, one downward sweep.
  int j = *spec_.n_particles;
  for (int p = n - 1; p >= 0 && j > 0; --p) {
    if (t[p][j] <= r) {
      r -= t[p][j];
      bits |= std::uint64_t{1} << p;
      --j;
    }
  }
  return Configuration{bits, n};
}

std::vector<Configuration> enumerate_sector(const SectorSpec& spec) {
  const Sector sector(spec);
  if (sector.size() > kMaxEnumerated) {
    throw CapabilityError("sector of dimension " + std::to_string(sector.size()) +
                          " exceeds the enumeration cap 2^24");
  }
  std::vector<Configuration> out;
  out.reserve(sector.size());
  sector.for_each([&](Configuration c) { out.push_back(c); });
  return out;
}

}  // namespace cqpt
