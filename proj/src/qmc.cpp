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

#include "cqpt/qmc.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <boost/random/exponential_distribution.hpp>

#if defined(__BMI2__)
#include <immintrin.h>
#endif

#include "cqpt/errors.hpp"
#include "cqpt/quadratic.hpp"

namespace cqpt {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kInitBlock = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint64_t kResampleStream = std::numeric_limits<std::uint64_t>::max();

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// splitmix64 stream keyed by (seed, stream, block).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t block)
      : state_(mix64(seed ^ mix64(stream + kGolden) ^ mix64(block * 0xd1b54a32d192ed03ULL + 1))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGolden;
    return mix64(state_);
  }
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t k) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * k) >> 64);
  }

 private:
  std::uint64_t state_;
};

std::uint64_t low_mask(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

// Bit-parallel view of a model: moves are bit slots (spin flips, or hops
// across bond (i, i+1) in slot i and across the wrap bond in slot N-1).
struct Kernel {
  int n = 0;
  int np = 0;
  std::uint64_t full = 0;
  std::uint64_t bond_mask = 0;
  std::uint64_t imp_mask = 0;
  bool wrap = false;
  int bonds = 0;
  double g = 0.0;
  double kin_diag = 0.0;
  // Restriction.
  bool restricted = false;
  bool want_cond = false;
  int orientation = 1;
  long v_min = 0;
};

template <Family F>
constexpr bool is_flip = F == Family::grover || F == Family::grover_modified ||
                         F == Family::ising_transverse;

template <Family F>
inline std::uint64_t moves(const Kernel& k, std::uint64_t b) {
  if constexpr (is_flip<F>) {
    return k.full;
  } else {
    std::uint64_t m = (b ^ (b >> 1)) & k.bond_mask;
    if (k.wrap) m |= ((b ^ (b >> (k.n - 1))) & 1U) << (k.n - 1);
    return m;
  }
}

template <Family F>
inline std::uint64_t apply_move(const Kernel& k, std::uint64_t b, int s) {
  if constexpr (is_flip<F>) {
    return b ^ (std::uint64_t{1} << s);
  } else {
    if (s == k.n - 1) return b ^ (1U | (std::uint64_t{1} << (k.n - 1)));
    return b ^ (std::uint64_t{3} << s);
  }
}

template <Family F>
inline long potential(const Kernel& k, std::uint64_t b) {
  if constexpr (F == Family::grover) {
    return b == 0 ? -k.n : 0;
  } else if constexpr (F == Family::grover_modified) {
    return (b & 1U) ? -k.n : 0;
  } else if constexpr (F == Family::fermion_impurity) {
    return -std::popcount(b & k.imp_mask);
  } else if constexpr (F == Family::fermion_impurity_extensive) {
    return (b & 1U) ? -k.np : 0;
  } else if constexpr (F == Family::ising_transverse) {
    std::uint64_t anti = (b ^ (b >> 1)) & k.bond_mask;
    long wrap_anti = k.wrap ? static_cast<long>((b ^ (b >> (k.n - 1))) & 1U) : 0;
    return 2 * (std::popcount(anti) + wrap_anti) - k.bonds;
  } else {
    long occupied = std::popcount(b & (b >> 1) & k.bond_mask);
    if (k.wrap) occupied += static_cast<long>(b & (b >> (k.n - 1)) & 1U);
    return -occupied;
  }
}

template <Family F>
inline bool is_cond(const Kernel& k, std::uint64_t b) {
  return k.orientation * potential<F>(k, b) == k.v_min;
}

inline int select_bit(std::uint64_t mask, std::uint64_t r) {
#if defined(__BMI2__)
  return std::countr_zero(_pdep_u64(std::uint64_t{1} << r, mask));
#else
  for (; r > 0; --r) mask &= mask - 1;
  return std::countr_zero(mask);
#endif
}

struct Population {
  std::vector<std::uint64_t> bits;
  std::vector<double> log_weight;
  std::vector<std::uint64_t> jumps;
};

struct Lane {
  CounterRng rng{0, 0, 0};
  std::uint64_t bits = 0;
  double log_w = 0.0;
  double left = 0.0;
  std::uint64_t jumps = 0;
  std::size_t walker = 0;
  bool live = false;
};

constexpr auto kInverse = [] {
  std::array<double, 65> t{};
  for (int i = 1; i <= 64; ++i) t[static_cast<std::size_t>(i)] = 1.0 / i;
  return t;
}();

// One sojourn and, unless the block ends first, one jump. Returns false
// once the walker has reached the end of the block.
template <Family F, bool Restricted>
inline bool step(const Kernel& k, Lane& l, double e_ref,
                 boost::random::exponential_distribution<double>& exponential) {
  std::uint64_t allowed = moves<F>(k, l.bits);
  if constexpr (Restricted) {
    std::uint64_t m = allowed;
    allowed = 0;
    while (m) {
      const int s = std::countr_zero(m);
      m &= m - 1;
      if (is_cond<F>(k, apply_move<F>(k, l.bits, s)) == k.want_cond) {
        allowed |= std::uint64_t{1} << s;
      }
    }
  }
  const int kappa = std::popcount(allowed);
  const double rate =
      kappa - (k.kin_diag + k.g * static_cast<double>(potential<F>(k, l.bits))) + e_ref;
  if (kappa == 0) {
    l.log_w += rate * l.left;
    return false;
  }
  const double tau = exponential(l.rng) * kInverse[static_cast<std::size_t>(kappa)];
  if (tau >= l.left) {
    l.log_w += rate * l.left;
    return false;
  }
  l.log_w += rate * tau;
  l.left -= tau;
  l.bits = apply_move<F>(k, l.bits, select_bit(allowed, l.rng.below(static_cast<std::uint64_t>(kappa))));
  ++l.jumps;
  return true;
}

// Walkers are interleaved over a few lanes so that their independent
// dependency chains overlap in the pipeline.
template <Family F, bool Restricted>
void evolve(const Kernel& k, Population& pop, std::size_t begin, std::size_t end,
            std::uint64_t seed, std::uint64_t block, double dt, double e_ref) {
  constexpr int kLanes = 4;
  boost::random::exponential_distribution<double> exponential(1.0);
  std::array<Lane, kLanes> lanes;
  std::size_t next = begin;
  int live = 0;
  auto start = [&](Lane& l) {
    if (next >= end) {
      l.live = false;
      return;
    }
    l.walker = next++;
    l.rng = CounterRng(seed, l.walker, block);
    l.bits = pop.bits[l.walker];
    l.log_w = 0.0;
    l.left = dt;
    l.jumps = 0;
    l.live = true;
    ++live;
  };
  for (auto& l : lanes) start(l);
  while (live > 0) {
    for (auto& l : lanes) {
      if (!l.live || step<F, Restricted>(k, l, e_ref, exponential)) continue;
      pop.bits[l.walker] = l.bits;
      pop.log_weight[l.walker] = l.log_w;
      pop.jumps[l.walker] = l.jumps;
      --live;
      start(l);
    }
  }
}

using EvolveFn = void (*)(const Kernel&, Population&, std::size_t, std::size_t, std::uint64_t,
                          std::uint64_t, double, double);

template <Family F>
EvolveFn pick(bool restricted) {
  return restricted ? &evolve<F, true> : &evolve<F, false>;
}

EvolveFn dispatch(Family f, bool restricted) {
  switch (f) {
    case Family::grover: return pick<Family::grover>(restricted);
    case Family::grover_modified: return pick<Family::grover_modified>(restricted);
    case Family::fermion_impurity: return pick<Family::fermion_impurity>(restricted);
    case Family::fermion_impurity_extensive:
      return pick<Family::fermion_impurity_extensive>(restricted);
    case Family::fermion_attractive: return pick<Family::fermion_attractive>(restricted);
    case Family::hardcore_boson_attractive:
      return pick<Family::hardcore_boson_attractive>(restricted);
    case Family::ising_transverse: return pick<Family::ising_transverse>(restricted);
    case Family::counter_example: break;
  }
  throw CapabilityError("projector Monte Carlo supports unit hop amplitudes only; " +
                        std::string(to_string(f)) + " has a hop of magnitude N/2");
}

Kernel make_kernel(const ModelSpec& m, const SpaceSplit& split, Subspace restriction) {
  Kernel k;
  k.n = m.n_sites;
  k.np = particle_count(m);
  k.full = low_mask(k.n);
  k.bond_mask = low_mask(k.n - 1);
  k.wrap = m.boundary == Boundary::periodic && k.n >= 3;
  k.bonds = static_cast<int>(chain_bonds(k.n, m.boundary).size());
  if (m.family == Family::fermion_impurity) k.imp_mask = low_mask(m.n_impurities);
  k.g = m.g;
  k.kin_diag = kinetic_diagonal(m);
  k.restricted = restriction != Subspace::full;
  k.want_cond = restriction == Subspace::cond;
  k.orientation = split.orientation;
  k.v_min = std::lround(split.v_min);
  return k;
}

// Uniform draw among the configurations the restriction allows.
std::vector<std::uint64_t> initial_configurations(const ModelSpec& m, const SpaceSplit& split,
                                                  const McConfig& cfg) {
  const Sector sector(sector_of(m));
  std::vector<std::uint64_t> bits(cfg.walkers);
  const bool restricted = cfg.restriction != Subspace::full;
  const bool want_cond = cfg.restriction == Subspace::cond;
  const std::uint64_t allowed =
      !restricted ? sector.size() : (want_cond ? split.m_cond : split.m_norm());
  if (allowed == 0) {
    throw EmptySubspaceError("restriction '" + std::string(to_string(cfg.restriction)) +
                             "' leaves no configuration");
  }
  // Rejection sampling when the allowed set is not too sparse.
  const bool rejection = !restricted || static_cast<double>(allowed) >=
                                            1e-3 * static_cast<double>(sector.size());
  std::vector<std::uint64_t> members;
  if (!rejection) {
    if (sector.size() > kMaxEnumerated) {
      throw CapabilityError("cannot sample the restricted subspace: too sparse to reject and "
                            "too large to enumerate");
    }
    sector.for_each([&](Configuration c) {
      if (split.is_cond(c) == want_cond) members.push_back(c.bits);
    });
  }
  for (std::uint64_t w = 0; w < cfg.walkers; ++w) {
    CounterRng rng(cfg.seed, w, kInitBlock);
    if (!rejection) {
      bits[w] = members[rng.below(members.size())];
      continue;
    }
    for (;;) {
      const Configuration c = sector.unrank(rng.below(sector.size()));
      if (!restricted || split.is_cond(c) == want_cond) {
        bits[w] = c.bits;
        break;
      }
    }
  }
  return bits;
}

template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  const std::size_t chunks = std::clamp<std::size_t>(static_cast<std::size_t>(workers), 1, n);
  if (chunks == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::jthread> threads;
  threads.reserve(chunks - 1);
  const std::size_t step = (n + chunks - 1) / chunks;
  for (std::size_t c = 1; c < chunks; ++c) {
    const std::size_t lo = std::min(n, c * step);
    const std::size_t hi = std::min(n, lo + step);
    threads.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  fn(0, std::min(n, step));
}

}  // namespace

void validate(const McConfig& c) {
  if (c.walkers < 2) throw ConfigError("mc.walkers must be >= 2");
  if (c.blocks < 2) throw ConfigError("mc.blocks must be >= 2");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigError("mc.dt must be positive");
  if (!(c.burn_in_fraction >= 0.0 && c.burn_in_fraction < 1.0)) {
    throw ConfigError("mc.burn_in must lie in [0, 1)");
  }
  if (blocks_used(c) < 2) throw ConfigError("mc: fewer than 2 blocks remain after burn-in");
  if (c.reference_energy && !std::isfinite(*c.reference_energy)) {
    throw ConfigError("mc.e_ref must be finite");
  }
}

int blocks_used(const McConfig& c) {
  return static_cast<int>(std::floor(c.blocks * (1.0 - c.burn_in_fraction) + 1e-12));
}

double default_reference_energy(const ModelSpec& m, const SpaceSplit& split) {
  if (auto e = closed_form_e_cond(m)) return *e;
  // Diagonal energy of the condensed configurations.
  return kinetic_diagonal(m) + m.g * split.orientation * split.v_min;
}

std::optional<std::string> feasibility_warning(const ModelSpec& m, const McConfig& c) {
  const double e0 = std::abs(free_ground_energy(m));
  if (c.dt * e0 >= 1.0) return std::nullopt;
  char buf[160];
  std::snprintf(buf, sizeof buf, "dt * |E0| = %.6g < 1: trajectories make almost no jumps per block",
                c.dt * e0);
  return std::string(buf);
}

McEstimate run_projector_mc(const ModelSpec& model, const SpaceSplit& given,
                            const McConfig& cfg) {
  validate(model);
  const bool flipped = (model.g < 0.0) != (given.orientation < 0);
  const SpaceSplit split = flipped ? split_space(model) : given;
  validate(cfg);
  const EvolveFn evolve_fn = dispatch(model.family, cfg.restriction != Subspace::full);
  const auto verdict = stoquastic_check(model);
  if (!verdict.stoquastic) {
    throw SignProblemError("model is not stoquastic: <" + verdict.witness->second.to_string() +
                           "|H|" + verdict.witness->first.to_string() + "> = +" +
                           std::to_string(verdict.witness_amplitude));
  }

  McEstimate est;
  est.config = cfg;
  est.reference_energy = cfg.reference_energy.value_or(default_reference_energy(model, split));
  if (auto w = feasibility_warning(model, cfg)) est.warnings.push_back(*w);

  const Kernel kernel = make_kernel(model, split, cfg.restriction);
  const std::size_t m = cfg.walkers;
  Population pop;
  pop.bits = initial_configurations(model, split, cfg);
  pop.log_weight.assign(m, 0.0);
  pop.jumps.assign(m, 0);
  std::vector<double> rel(m);
  std::vector<std::uint64_t> next(m);

  int workers = cfg.workers > 0 ? cfg.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(workers, 1);
  const double e_ref = est.reference_energy;

  est.trace.reserve(static_cast<std::size_t>(cfg.blocks));
  for (int block = 0; block < cfg.blocks; ++block) {
    parallel_for(m, workers, [&](std::size_t lo, std::size_t hi) {
      evolve_fn(kernel, pop, lo, hi, cfg.seed, static_cast<std::uint64_t>(block), cfg.dt, e_ref);
    });

    // Serial reductions in walker order keep the result independent of
    // the worker count.
    const double top = *std::max_element(pop.log_weight.begin(), pop.log_weight.end());
    if (!std::isfinite(top)) {
      throw ConvergenceError("walker weights diverged in block " + std::to_string(block));
    }
    double total = 0.0;
    double jump_weight = 0.0;
    std::uint64_t jumps = 0;
    for (std::size_t w = 0; w < m; ++w) {
      rel[w] = std::exp(pop.log_weight[w] - top);
      total += rel[w];
      jump_weight += rel[w] * static_cast<double>(pop.jumps[w]);
      jumps += pop.jumps[w];
    }
    BlockRecord rec;
    rec.index = block;
    rec.log_mean_weight = top + std::log(total / static_cast<double>(m));
    rec.jumps = jumps;
    rec.weighted_jump_rate = jump_weight / (total * cfg.dt);
    rec.energy = e_ref - rec.log_mean_weight / cfg.dt;
    est.trace.push_back(rec);

    if (kernel.restricted) {
      for (std::size_t w = 0; w < m; ++w) {
        const bool cond = split.is_cond(Configuration{pop.bits[w], model.n_sites});
        if (cond != kernel.want_cond) ++est.restriction_violations;
      }
    }

    // Systematic resampling.
    CounterRng rng(cfg.seed, kResampleStream, static_cast<std::uint64_t>(block));
    const double spacing = total / static_cast<double>(m);
    double target = rng.uniform() * spacing;
    double cumulative = rel[0];
    std::size_t src = 0;
    for (std::size_t j = 0; j < m; ++j) {
      while (cumulative < target && src + 1 < m) cumulative += rel[++src];
      next[j] = pop.bits[src];
      target += spacing;
    }
    pop.bits.swap(next);
  }

  const int used = blocks_used(cfg);
  const int first = cfg.blocks - used;
  est.n_blocks_used = used;
  double sum = 0.0;
  double rate = 0.0;
  for (int b = first; b < cfg.blocks; ++b) {
    sum += est.trace[static_cast<std::size_t>(b)].energy;
    rate += est.trace[static_cast<std::size_t>(b)].weighted_jump_rate;
  }
  est.energy = sum / used;
  est.mean_jumps_per_unit_time = rate / used;
  // Jackknife over bins of consecutive blocks; binning absorbs the
  // correlation between neighbouring blocks.
  const int bins = std::min(used, kJackknifeBins);
  double var = 0.0;
  for (int k = 0; k < bins; ++k) {
    const int lo = first + k * used / bins;
    const int hi = first + (k + 1) * used / bins;
    double bin_sum = 0.0;
    for (int b = lo; b < hi; ++b) bin_sum += est.trace[static_cast<std::size_t>(b)].energy;
    const double loo = (sum - bin_sum) / (used - (hi - lo));
    var += (loo - est.energy) * (loo - est.energy);
  }
  est.std_error = std::sqrt(var * (bins - 1) / bins);

  est.final_walkers.reserve(m);
  for (std::size_t w = 0; w < m; ++w) {
    est.final_walkers.push_back({Configuration{pop.bits[w], model.n_sites}, 0.0});
  }
  return est;
}

double mean_jump_rate(const McEstimate& e) { return e.mean_jumps_per_unit_time; }

TableDefaults table_defaults(Family family, int n) {
  struct Row {
    int n, np;
    double dt;
    int blocks;
  };
  static constexpr Row kImpurity[] = {
      {4, 2, 16, 64}, {8, 4, 16, 128}, {16, 8, 16, 256}, {32, 16, 32, 512}, {64, 32, 32, 1024}};
  static constexpr Row kInteracting[] = {{4, 2, 16, 64},     {8, 4, 16, 128},
                                         {16, 8, 16, 256},   {32, 16, 64, 512},
                                         {64, 32, 64, 1024}, {128, 64, 64, 2048}};
  if (n < 1) throw ConfigError("table_defaults: N must be >= 1");
  TableDefaults out;
  const bool interacting = is_attractive_family(family);
  std::span<const Row> rows = interacting ? std::span<const Row>(kInteracting)
                                          : std::span<const Row>(kImpurity);
  out.table = interacting ? 2 : 1;
  if (!interacting && !is_impurity_family(family)) {
    out.warnings.push_back("no published parameters for " + std::string(to_string(family)) +
                           "; using the impurity table");
  }
  const Row* best = &rows.front();
  for (const Row& r : rows) {
    if (std::abs(r.n - n) < std::abs(best->n - n)) best = &r;
  }
  if (best->n != n) {
    out.warnings.push_back("N = " + std::to_string(n) + " not tabulated; using the row N = " +
                           std::to_string(best->n));
  }
  out.row_n = best->n;
  out.row_np = best->np;
  out.config.dt = best->dt;
  out.config.blocks = best->blocks;
  return out;
}

void write_trace_csv(std::ostream& out, const McEstimate& e) {
  out << "block,log_mean_weight,mean_weight,jumps,weighted_jump_rate,energy\n";
  char buf[256];
  for (const auto& r : e.trace) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%llu,%.12g,%.12g\n", r.index, r.log_mean_weight,
                  std::exp(r.log_mean_weight), static_cast<unsigned long long>(r.jumps),
                  r.weighted_jump_rate, r.energy);
    out << buf;
  }
}

}  // namespace cqpt
