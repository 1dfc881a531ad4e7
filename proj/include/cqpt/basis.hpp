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

#ifndef CQPT_BASIS_HPP
#define CQPT_BASIS_HPP

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cqpt {

inline constexpr int kMaxSites = 64;

// Largest sector that is ever enumerated in full.
inline constexpr std::uint64_t kMaxEnumerated = std::uint64_t{1} << 24;

// A basis state of the potential eigenbasis. Bit i is the occupation of
// site i (0-based), or spin s_i = +1 when set.
struct Configuration {
  std::uint64_t bits = 0;
  int width = 0;

  bool occupied(int site) const { return (bits >> site) & 1U; }
  int popcount() const { return std::popcount(bits); }

  // Site 1 first: "1001" has sites 1 and 4 occupied.
  std::string to_string() const;
  static Configuration from_string(std::string_view s);

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

enum class Statistics { spin, fermion, hardcore_boson };

struct SectorSpec {
  int n_sites = 0;
  std::optional<int> n_particles;  // absent for spin sectors
  Statistics statistics = Statistics::spin;
};

// Binomial coefficient; throws CapabilityError if it does not fit 64 bits.
std::uint64_t binomial(int n, int k);

// Dense indexing of a sector. Spin sectors rank by bit value, particle
// sectors by the combinatorial number system; both orders coincide with
// ascending numeric value of the bit pattern.
class Sector {
 public:
  explicit Sector(const SectorSpec& spec);

  const SectorSpec& spec() const { return spec_; }
  int n_sites() const { return spec_.n_sites; }
  std::uint64_t size() const { return size_; }
  bool is_spin() const { return !spec_.n_particles.has_value(); }

  bool contains(Configuration c) const;
  std::uint64_t rank(Configuration c) const;
  Configuration unrank(std::uint64_t index) const;

  // Calls f(Configuration) for every member in rank order.
  template <class F>
  void for_each(F&& f) const {
    const int n = spec_.n_sites;
    if (is_spin()) {
      for (std::uint64_t b = 0; b < size_; ++b) f(Configuration{b, n});
      return;
    }
    const int k = *spec_.n_particles;
    if (k == 0) {
      f(Configuration{0, n});
      return;
    }
    std::uint64_t b = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    for (std::uint64_t i = 0; i < size_; ++i) {
      f(Configuration{b, n});
      if (i + 1 == size_) break;
      // Gosper's hack: next pattern with the same popcount.
      const std::uint64_t lowest = b & (~b + 1);
      const std::uint64_t ripple = b + lowest;
      b = (((ripple ^ b) >> 2) / lowest) | ripple;
    }
  }

 private:
  SectorSpec spec_;
  std::uint64_t size_ = 0;
};

// Ordered, duplicate-free list of the sector's configurations.
std::vector<Configuration> enumerate_sector(const SectorSpec& sector);

}  // namespace cqpt

#endif  // CQPT_BASIS_HPP
