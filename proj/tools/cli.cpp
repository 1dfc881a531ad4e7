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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cqpt/analysis.hpp"
#include "cqpt/errors.hpp"
#include "cqpt/qmc.hpp"
#include "cqpt/quadratic.hpp"
#include "cqpt/split.hpp"

namespace cqpt::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kArtifactVersion = 1;
constexpr const char* kToolVersion = "1.0.0";
constexpr const char* kOutputDirVariable = "CQPT_OUTPUT_DIR";

struct KeySpec {
  const char* key;
  const char* flag;
  const char* help;
  bool is_flag = false;
};

constexpr KeySpec kKeys[] = {
    {"model.family", "--family", "model family"},
    {"model.N", "--N", "site counts, e.g. 12 or 4,8,16 or 1..12"},
    {"model.Np", "--Np", "particle number"},
    {"model.density", "--density", "filling N_p/N, instead of --Np"},
    {"model.Nimp", "--Nimp", "impurity count (fermion-impurity)"},
    {"model.impurity_fraction", "--impurity-fraction", "N_imp/N_p, instead of --Nimp"},
    {"model.boundary", "--boundary", "obc or pbc"},
    {"model.g", "--g", "coupling for split and qmc-trace"},
    {"sweep.g_min", "--g-min", "first coupling of the grid"},
    {"sweep.g_max", "--g-max", "last coupling of the grid"},
    {"sweep.g_step", "--g-step", "grid spacing"},
    {"sweep.g_list", "--g-list", "explicit comma-separated couplings"},
    {"sweep.thermodynamic", "--thermodynamic", "closed-form N -> infinity energies", true},
    {"method.full", "--full", "solver for E"},
    {"method.cond", "--cond", "solver for E_cond"},
    {"method.norm", "--norm", "solver for E_norm"},
    {"method.solver", "--solver", "auto, dense or lanczos"},
    {"method.gap", "--gap", "also compute the gap E' - E", true},
    {"mc.walkers", "--walkers", "walker population"},
    {"mc.dt", "--dt", "block length in imaginary time"},
    {"mc.blocks", "--blocks", "number of blocks"},
    {"mc.seed", "--seed", "random seed"},
    {"mc.burn_in", "--burn-in", "fraction of blocks discarded"},
    {"mc.e_ref", "--e-ref", "reference energy"},
    {"mc.workers", "--workers", "worker threads (0: all cores)"},
    {"mc.defaults", "--mc-defaults", "none or table"},
    {"mc.restriction", "--restriction", "full, cond or norm (qmc-trace)"},
    {"output.path", "--out", "output directory"},
    {"output.format", "--format", "text or json"},
    {"locate.diagnostic", "--diagnostic", "delta0 or delta1"},
    {"locate.input", "--input", "comma-separated sweep CSV files"},
    {"locate.analytic", "--analytic", "thermodynamic coexistence instead of a sweep", true},
};

const KeySpec* find_key(std::string_view key) {
  for (const auto& k : kKeys) {
    if (key == k.key) return &k;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    const std::string item = trim(s.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Typed, field-checked access to the merged settings.
class Config {
 public:
  explicit Config(Settings s) : s_(std::move(s)) {}

  const Settings& settings() const { return s_; }
  bool has(const std::string& key) const { return s_.count(key) > 0; }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const auto it = s_.find(key);
    const std::string where = it == s_.end() ? "" : it->second.origin + ": ";
    throw ConfigError(where + key + ": " + message);
  }

  std::string text(const std::string& key, const std::string& fallback = {}) const {
    const auto it = s_.find(key);
    return it == s_.end() ? fallback : it->second.value;
  }

  std::string required(const std::string& key) const {
    if (!has(key)) fail(key, "is required");
    return text(key);
  }

  long long integer(const std::string& key, long long lo, long long hi) const {
    const std::string v = required(key);
    long long x = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || end != v.data() + v.size()) fail(key, "expected an integer, got '" + v + "'");
    if (x < lo || x > hi) {
      fail(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + v);
    }
    return x;
  }

  std::uint64_t unsigned_integer(const std::string& key) const {
    const std::string v = required(key);
    std::uint64_t x = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || end != v.data() + v.size()) {
      fail(key, "expected a non-negative integer, got '" + v + "'");
    }
    return x;
  }

  double real(const std::string& key) const { return parse_real(key, required(key)); }

  double parse_real(const std::string& key, const std::string& v) const {
    double x = 0.0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || end != v.data() + v.size() || !std::isfinite(x)) {
      fail(key, "expected a finite number, got '" + v + "'");
    }
    return x;
  }

  bool boolean(const std::string& key) const {
    const std::string v = text(key, "false");
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(key, "expected true or false, got '" + v + "'");
  }

  template <class T, class F>
  T parsed(const std::string& key, F parse) const {
    try {
      return parse(required(key));
    } catch (const ConfigError& e) {
      fail(key, e.what());
    }
  }

 private:
  Settings s_;
};

// ---------------------------------------------------------------- model

std::vector<int> site_counts(const Config& c) {
  const std::string key = "model.N";
  std::vector<int> sizes;
  for (const auto& item : split_list(c.required(key))) {
    const auto dots = item.find("..");
    auto to_int = [&](const std::string& s) {
      int v = 0;
      const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || end != s.data() + s.size() || v < 1) {
        c.fail(key, "expected positive integers or ranges a..b, got '" + item + "'");
      }
      return v;
    };
    if (dots == std::string::npos) {
      sizes.push_back(to_int(item));
    } else {
      const int a = to_int(item.substr(0, dots));
      const int b = to_int(item.substr(dots + 2));
      if (a > b) c.fail(key, "empty range '" + item + "'");
      for (int n = a; n <= b; ++n) sizes.push_back(n);
    }
  }
  if (sizes.empty()) c.fail(key, "no sizes given");
  return sizes;
}

Family family_of(const Config& c) {
  return c.parsed<Family>("model.family", [](const std::string& s) { return family_from_string(s); });
}

ModelSpec model_for(const Config& c, int n) {
  ModelSpec m;
  m.family = family_of(c);
  m.n_sites = n;
  m.boundary = c.has("model.boundary")
                   ? c.parsed<Boundary>("model.boundary",
                                        [](const std::string& s) { return boundary_from_string(s); })
                   : Boundary::open;
  m.g = c.has("model.g") ? c.real("model.g") : 0.0;
  if (is_spin_family(m.family)) {
    m.n_particles = n;
  } else if (c.has("model.Np")) {
    if (c.has("model.density")) c.fail("model.density", "give either model.Np or model.density");
    m.n_particles = static_cast<int>(c.integer("model.Np", 0, n));
  } else if (c.has("model.density")) {
    const double np = c.real("model.density") * n;
    if (std::abs(np - std::round(np)) > 1e-9 || np < 0.0 || np > n) {
      c.fail("model.density", "density * N = " + format_g(np) + " is not a particle number for N = " +
                                  std::to_string(n));
    }
    m.n_particles = static_cast<int>(std::lround(np));
  } else {
    c.fail("model.Np", "is required for particle families (or set model.density)");
  }
  if (m.family == Family::fermion_impurity) {
    if (c.has("model.Nimp")) {
      m.n_impurities = static_cast<int>(c.integer("model.Nimp", 0, m.n_particles));
    } else if (c.has("model.impurity_fraction")) {
      const double ni = c.real("model.impurity_fraction") * m.n_particles;
      if (std::abs(ni - std::round(ni)) > 1e-9 || ni < 0.0 || ni > m.n_particles) {
        c.fail("model.impurity_fraction", "fraction * N_p = " + format_g(ni) + " is not valid");
      }
      m.n_impurities = static_cast<int>(std::lround(ni));
    } else {
      c.fail("model.Nimp", "is required for fermion-impurity");
    }
  }
  if (is_attractive_family(m.family) && m.g < 0.0) c.fail("model.g", "attractive families need g >= 0");
  validate_parameters(m);
  return m;
}

std::string file_stem(const ModelSpec& m) {
  return std::string(to_string(m.family)) + "_N" + std::to_string(m.n_sites) + "_Np" +
         std::to_string(particle_count(m));
}

// ---------------------------------------------------------------- grid

std::vector<double> grid_of(const Config& c) {
  if (c.has("sweep.g_list")) {
    for (const char* k : {"sweep.g_min", "sweep.g_max", "sweep.g_step"}) {
      if (c.has(k)) c.fail(k, "cannot be combined with sweep.g_list");
    }
    std::vector<double> g;
    for (const auto& item : split_list(c.text("sweep.g_list"))) g.push_back(c.parse_real("sweep.g_list", item));
    if (g.empty()) c.fail("sweep.g_list", "is empty");
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (!(g[i] > g[i - 1])) c.fail("sweep.g_list", "values must increase strictly");
    }
    return g;
  }
  const double lo = c.real("sweep.g_min");
  const double hi = c.real("sweep.g_max");
  const double step = c.real("sweep.g_step");
  if (!(lo < hi)) c.fail("sweep.g_max", "must exceed sweep.g_min");
  if (!(step > 0.0)) c.fail("sweep.g_step", "must be positive");
  return make_grid(lo, hi, step);
}

// ---------------------------------------------------------------- methods

Method method_of(const Config& c, const std::string& key, Method fallback) {
  if (!c.has(key)) return fallback;
  return c.parsed<Method>(key, [](const std::string& s) { return method_from_string(s); });
}

void check_method(const Config& c, const std::string& key, Method m, Family f, Subspace sub) {
  auto refuse = [&](const std::string& why) {
    throw CapabilityError(key + " = " + std::string(to_string(m)) + ": " + why);
  };
  switch (m) {
    case Method::symmetric:
      if (f != Family::grover) refuse("available for grover only");
      break;
    case Method::quadratic:
      if (sub == Subspace::norm ? f != Family::fermion_impurity_extensive : !is_impurity_family(f)) {
        refuse("available for the impurity families only");
      }
      break;
    case Method::closed_form:
      if (sub == Subspace::full && f != Family::counter_example) {
        refuse("no finite-N closed form for E of " + std::string(to_string(f)));
      }
      if (sub == Subspace::norm && f != Family::grover_modified && f != Family::counter_example &&
          f != Family::fermion_impurity_extensive) {
        refuse("no closed form for E_norm of " + std::string(to_string(f)));
      }
      break;
    case Method::qmc:
      if (f == Family::counter_example) refuse("the counter-example has non-unit hops");
      break;
    case Method::none:
      if (sub != Subspace::norm) c.fail(key, "only method.norm may be none");
      break;
    case Method::ed:
      break;
  }
}

McConfig mc_config(const Config& c, Family family, int n, std::vector<std::string>& warnings) {
  McConfig mc;
  const std::string defaults = c.text("mc.defaults", "none");
  if (defaults == "table") {
    auto t = table_defaults(family, n);
    mc = t.config;
    for (auto& w : t.warnings) warnings.push_back(std::move(w));
  } else if (defaults != "none") {
    c.fail("mc.defaults", "expected none or table, got '" + defaults + "'");
  }
  if (c.has("mc.walkers")) mc.walkers = c.unsigned_integer("mc.walkers");
  if (c.has("mc.dt")) mc.dt = c.real("mc.dt");
  if (c.has("mc.blocks")) mc.blocks = static_cast<int>(c.integer("mc.blocks", 2, 1 << 24));
  if (c.has("mc.seed")) mc.seed = c.unsigned_integer("mc.seed");
  if (c.has("mc.burn_in")) mc.burn_in_fraction = c.real("mc.burn_in");
  if (c.has("mc.e_ref")) mc.reference_energy = c.real("mc.e_ref");
  if (c.has("mc.workers")) mc.workers = static_cast<int>(c.integer("mc.workers", 0, 4096));
  if (c.has("mc.restriction")) {
    mc.restriction = c.parsed<Subspace>("mc.restriction",
                                        [](const std::string& s) { return subspace_from_string(s); });
  }
  if (mc.walkers < 2) c.fail("mc.walkers", "must be >= 2");
  if (!(mc.dt > 0.0)) c.fail("mc.dt", "must be positive");
  if (!(mc.burn_in_fraction >= 0.0 && mc.burn_in_fraction < 1.0)) c.fail("mc.burn_in", "must lie in [0, 1)");
  validate(mc);
  return mc;
}

SolverChoice solver_of(const Config& c) {
  const std::string s = c.text("method.solver", "auto");
  if (s == "auto") return SolverChoice::automatic;
  if (s == "dense") return SolverChoice::dense;
  if (s == "lanczos") return SolverChoice::lanczos;
  c.fail("method.solver", "expected auto, dense or lanczos, got '" + s + "'");
}

// ---------------------------------------------------------------- output

fs::path output_dir(const Config& c) {
  fs::path dir = ".";
  if (c.has("output.path")) {
    dir = c.text("output.path");
  } else if (const char* env = std::getenv(kOutputDirVariable); env && *env) {
    dir = env;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) c.fail("output.path", "cannot create directory '" + dir.string() + "': " + ec.message());
  return dir;
}

bool json_format(const Config& c) {
  const std::string f = c.text("output.format", "text");
  if (f != "text" && f != "json") c.fail("output.format", "expected text or json, got '" + f + "'");
  return f == "json";
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw Error("cannot write " + path.string());
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunRecord {
  explicit RunRecord(std::string name) : command(std::move(name)), started(utc_now()) {}

  std::string command;
  std::string started;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  ordered_json outputs = ordered_json::array();
  ordered_json rows = ordered_json::array();
  std::vector<std::string> warnings;
};

fs::path write_manifest(const Config& c, const fs::path& dir, const std::string& stem,
                        const RunRecord& rec) {
  ordered_json m;
  m["artifact_version"] = kArtifactVersion;
  m["tool_version"] = kToolVersion;
  m["command"] = rec.command;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : c.settings()) {
    if (k != "output.path") cfg[k] = v.value;
  }
  m["config"] = cfg;
  m["started_utc"] = rec.started;
  m["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - rec.t0).count();
  m["seeds"] = {{"mc.seed", c.has("mc.seed") ? c.unsigned_integer("mc.seed") : McConfig{}.seed}};
  m["outputs"] = rec.outputs;
  m["rows"] = rec.rows;
  m["warnings"] = rec.warnings;
  const fs::path path = dir / (stem + "_" + rec.command + "_manifest.json");
  write_file(path, m.dump(2) + "\n");
  return path;
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

// ---------------------------------------------------------------- split

std::string ratio_text(const BigInt& num, const BigInt& den) {
  if (num == 0) return "0";
  const BigInt d = boost::multiprecision::gcd(num, den);
  const BigInt p = num / d, q = den / d;
  if (q == 1) return p.str();
  if (p == 1 && (q & (q - 1)) == 0) return "2^-" + std::to_string(boost::multiprecision::msb(q));
  return p.str() + "/" + q.str();
}

int cmd_split(const Config& c, std::ostream& out, std::ostream& err) {
  RunRecord rec("split");
  const bool as_json = json_format(c);
  ordered_json rows = ordered_json::array();
  std::vector<double> xs, ys;
  std::string family;
  for (int n : site_counts(c)) {
    const ModelSpec m = model_for(c, n);
    family = std::string(to_string(m.family));
    BigInt m_total = closed_form_m_total(m);
    std::optional<BigInt> m_cond;
    std::optional<double> v_min;
    bool enumerated = false;
    if (n <= kMaxSites && m_total <= kMaxEnumerated) {
      const SpaceSplit s = split_space(m);
      m_cond = BigInt(s.m_cond);
      v_min = s.v_min;
      enumerated = s.enumerated;
    } else {
      m_cond = closed_form_m_cond(m);
      v_min = closed_form_v_min(m);
      if (!m_cond) throw CapabilityError("N = " + std::to_string(n) + ": sector too large to enumerate and no closed form for M_cond");
    }
    const double log_ratio = std::log(static_cast<double>(*m_cond)) - std::log(static_cast<double>(m_total));
    xs.push_back(n);
    ys.push_back(log_ratio);
    const std::string ratio = ratio_text(*m_cond, m_total);
    if (!as_json) {
      out << "N=" << n << " Np=" << particle_count(m) << " M=" << m_total.str()
          << " M_cond=" << m_cond->str() << " ratio=" << ratio << '\n';
    }
    ordered_json row = {{"N", n},
                        {"Np", particle_count(m)},
                        {"M", m_total.str()},
                        {"M_cond", m_cond->str()},
                        {"M_norm", BigInt(m_total - *m_cond).str()},
                        {"ratio", ratio},
                        {"log_ratio", log_ratio},
                        {"enumerated", enumerated}};
    if (v_min) row["v_min"] = *v_min;
    rows.push_back(row);
  }
  ordered_json doc = {{"family", family}, {"rows", rows}};
  if (xs.size() >= 2) {
    const double k = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    doc["log_ratio_slope"] = slope;
    if (!as_json) out << "slope d ln(M_cond/M)/dN = " << format_g(slope) << '\n';
  }
  if (as_json) out << doc.dump(2) << '\n';
  rec.rows = rows;
  const fs::path dir = output_dir(c);
  write_manifest(c, dir, family, rec);
  print_warnings(err, rec.warnings);
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepData {
  ModelSpec model;
  std::string label;  // file stem
  SweepResult result;
};

std::vector<SweepData> run_sweeps(const Config& c, RunRecord& rec) {
  const Family family = family_of(c);
  const std::vector<double> grid = grid_of(c);
  SweepPlan plan;
  plan.thermodynamic = c.boolean("sweep.thermodynamic");
  plan.want_gap = c.boolean("method.gap");
  plan.solver = solver_of(c);
  plan.full = method_of(c, "method.full", Method::ed);
  plan.cond = method_of(c, "method.cond", Method::closed_form);
  plan.norm = method_of(c, "method.norm", Method::ed);
  std::vector<SweepData> out;
  if (plan.thermodynamic) {
    ModelSpec m;
    m.family = family;
    SweepData d{m, std::string(to_string(family)) + "_thermodynamic", {}};
    double current = 0.0;
    try {
      d.result = sweep(m, grid, plan, [&](double g) { current = g; });
    } catch (const Error& e) {
      rec.warnings.push_back("aborted at g = " + format_g(current));
      throw;
    }
    out.push_back(std::move(d));
    return out;
  }
  check_method(c, "method.full", plan.full, family, Subspace::full);
  check_method(c, "method.cond", plan.cond, family, Subspace::cond);
  check_method(c, "method.norm", plan.norm, family, Subspace::norm);
  const bool uses_mc =
      plan.full == Method::qmc || plan.cond == Method::qmc || plan.norm == Method::qmc;
  for (int n : site_counts(c)) {
    const ModelSpec m = model_for(c, n);
    if (uses_mc) plan.mc = mc_config(c, family, n, rec.warnings);
    SweepData d{m, file_stem(m), {}};
    double current = 0.0;
    try {
      d.result = sweep(m, grid, plan, [&](double g) { current = g; });
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("N = " + std::to_string(n) + ", g = " + format_g(current) + ": " + e.what());
    } catch (const CapabilityError& e) {
      throw CapabilityError("N = " + std::to_string(n) + ", g = " + format_g(current) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("N = " + std::to_string(n) + ", g = " + format_g(current) + ": " + e.what());
    }
    for (auto& w : d.result.warnings) rec.warnings.push_back("N = " + std::to_string(n) + ": " + w);
    out.push_back(std::move(d));
  }
  return out;
}

void record_rows(RunRecord& rec, const SweepData& d, const std::string& file) {
  for (const auto& r : d.result.rows) {
    ordered_json row = {{"file", file}, {"g", r.g}, {"E_solver", r.e_solver}, {"Enorm_solver", r.enorm_solver}};
    if (r.mc_stderr) row["mc_stderr"] = *r.mc_stderr;
    rec.rows.push_back(row);
  }
}

int cmd_sweep(const Config& c, std::ostream& out, std::ostream& err) {
  RunRecord rec("sweep");
  const fs::path dir = output_dir(c);
  const auto data = run_sweeps(c, rec);
  for (const auto& d : data) {
    const fs::path file = dir / (d.label + ".csv");
    write_file(file, to_csv(d.result.rows));
    rec.outputs.push_back(file.filename().string());
    record_rows(rec, d, file.filename().string());
    out << file.string() << '\n';
  }
  const fs::path manifest = write_manifest(c, dir, std::string(to_string(family_of(c))), rec);
  out << manifest.string() << '\n';
  print_warnings(err, rec.warnings);
  return 0;
}

// ---------------------------------------------------------------- locate

ordered_json estimate_json(const CriticalEstimate& e) {
  ordered_json j;
  if (e.g_c) {
    j["g_c"] = *e.g_c;
  } else {
    j["g_c"] = "no-crossing";
  }
  j["method"] = std::string(to_string(e.method));
  j["uncertainty"] = e.uncertainty;
  j["detail"] = e.detail;
  return j;
}

std::string read_file(const Config& c, const std::string& key, const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) c.fail(key, "cannot read '" + path.string() + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

int cmd_locate(const Config& c, std::ostream& out, std::ostream& err) {
  RunRecord rec("locate");
  ordered_json results = ordered_json::array();
  const std::string family = c.has("model.family") ? std::string(to_string(family_of(c))) : "input";
  if (c.boolean("locate.analytic")) {
    const Family f = family_of(c);
    double density = 0.5;
    if (c.has("model.density")) {
      density = c.real("model.density");
    } else if (c.has("model.Np") && c.has("model.N")) {
      const auto sizes = site_counts(c);
      density = static_cast<double>(c.integer("model.Np", 0, sizes.front())) / sizes.front();
    }
    auto j = estimate_json(coexistence_analytic(f, density));
    j["family"] = family;
    results.push_back(j);
  } else {
    const Diagnostic diag = c.parsed<Diagnostic>(
        "locate.diagnostic", [](const std::string& s) { return diagnostic_from_string(s); });
    if (c.has("locate.input")) {
      for (const auto& path : split_list(c.text("locate.input"))) {
        std::vector<SweepRow> rows;
        try {
          rows = parse_csv(read_file(c, "locate.input", path));
        } catch (const ConfigError& e) {
          c.fail("locate.input", path + ": " + e.what());
        }
        auto j = estimate_json(locate_critical(rows, diag));
        j["input"] = path;
        if (!rows.empty() && rows.front().n_sites) j["N"] = *rows.front().n_sites;
        results.push_back(j);
      }
    } else {
      for (const auto& d : run_sweeps(c, rec)) {
        auto j = estimate_json(locate_critical(d.result.rows, diag));
        j["sweep"] = d.label;
        if (d.result.rows.front().n_sites) j["N"] = *d.result.rows.front().n_sites;
        results.push_back(j);
        record_rows(rec, d, "");
      }
    }
  }
  out << (results.size() == 1 ? results.front() : results).dump(2) << '\n';
  rec.outputs = results;
  write_manifest(c, output_dir(c), family, rec);
  print_warnings(err, rec.warnings);
  return 0;
}

// ---------------------------------------------------------------- qmc-trace

int cmd_qmc_trace(const Config& c, std::ostream& out, std::ostream& err) {
  RunRecord rec("qmc-trace");
  const auto sizes = site_counts(c);
  if (sizes.size() != 1) c.fail("model.N", "qmc-trace takes a single size");
  const ModelSpec m = model_for(c, sizes.front());
  validate(m);
  if (!c.has("model.g")) c.fail("model.g", "is required for qmc-trace");
  const McConfig mc = mc_config(c, m.family, m.n_sites, rec.warnings);
  const McEstimate est = run_projector_mc(m, split_space(m), mc);
  rec.warnings.insert(rec.warnings.end(), est.warnings.begin(), est.warnings.end());
  const fs::path dir = output_dir(c);
  const std::string stem = file_stem(m) + "_" + std::string(to_string(mc.restriction));
  const fs::path file = dir / (stem + "_trace.csv");
  std::ostringstream csv;
  write_trace_csv(csv, est);
  write_file(file, csv.str());
  ordered_json summary = {{"trace", file.string()},
                          {"energy", est.energy},
                          {"std_error", est.std_error},
                          {"energy_per_particle", est.energy / particle_count(m)},
                          {"n_blocks_used", est.n_blocks_used},
                          {"mean_jumps_per_unit_time", est.mean_jumps_per_unit_time},
                          {"reference_energy", est.reference_energy},
                          {"restriction", std::string(to_string(mc.restriction))},
                          {"restriction_violations", est.restriction_violations},
                          {"walkers", mc.walkers},
                          {"dt", mc.dt},
                          {"blocks", mc.blocks},
                          {"seed", mc.seed}};
  out << summary.dump(2) << '\n';
  rec.outputs.push_back(file.filename().string());
  rec.rows.push_back(summary);
  write_manifest(c, dir, stem, rec);
  print_warnings(err, rec.warnings);
  return 0;
}

// ---------------------------------------------------------------- defaults

int cmd_defaults(const Config& c, std::ostream& out, std::ostream& err) {
  if (c.has("model.family") && c.has("model.N")) {
    const auto sizes = site_counts(c);
    ordered_json rows = ordered_json::array();
    for (int n : sizes) {
      const auto t = table_defaults(family_of(c), n);
      print_warnings(err, t.warnings);
      rows.push_back({{"N", n},
                      {"table", t.table},
                      {"row_N", t.row_n},
                      {"row_Np", t.row_np},
                      {"walkers", t.config.walkers},
                      {"dt", t.config.dt},
                      {"blocks", t.config.blocks},
                      {"burn_in", t.config.burn_in_fraction}});
    }
    out << (rows.size() == 1 ? rows.front() : rows).dump(2) << '\n';
    return 0;
  }
  const std::pair<const char*, Family> tables[] = {{"Table I (impurity families)", Family::fermion_impurity},
                                                    {"Table II (interacting families)", Family::fermion_attractive}};
  for (const auto& [title, family] : tables) {
    out << title << '\n' << "  N     Np    dt    blocks  walkers\n";
    for (int n : {4, 8, 16, 32, 64, 128}) {
      const auto t = table_defaults(family, n);
      if (!t.warnings.empty()) continue;
      char line[96];
      std::snprintf(line, sizeof line, "  %-5d %-5d %-5g %-7d %llu\n", t.row_n, t.row_np, t.config.dt,
                    t.config.blocks, static_cast<unsigned long long>(t.config.walkers));
      out << line;
    }
  }
  return 0;
}

// ---------------------------------------------------------------- driver

int dispatch(const std::string& command, const Config& c, std::ostream& out, std::ostream& err) {
  if (command == "split") return cmd_split(c, out, err);
  if (command == "sweep") return cmd_sweep(c, out, err);
  if (command == "locate") return cmd_locate(c, out, err);
  if (command == "qmc-trace") return cmd_qmc_trace(c, out, err);
  if (command == "defaults") return cmd_defaults(c, out, err);
  throw ConfigError("unknown command '" + command + "'");
}

Settings load_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return parse_config(s.str(), path);
}

Settings load_manifest(const std::string& path, std::string& command) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read manifest '" + path + "'");
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": invalid JSON: " + e.what());
  }
  if (!m.contains("command") || !m.contains("config") || !m["config"].is_object()) {
    throw ConfigError(path + ": not a run manifest");
  }
  if (m.value("artifact_version", 0) != kArtifactVersion) {
    throw ConfigError(path + ": unsupported artifact_version");
  }
  command = m["command"].get<std::string>();
  Settings s;
  for (const auto& [k, v] : m["config"].items()) {
    if (!find_key(k)) throw ConfigError(path + ": unknown config key '" + k + "'");
    s[k] = {v.get<std::string>(), "manifest " + path};
  }
  return s;
}

}  // namespace

Settings parse_config(std::string_view text, const std::string& source) {
  Settings s;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      static constexpr std::string_view kSections[] = {"model", "sweep", "method", "mc", "output", "locate"};
      if (std::find(std::begin(kSections), std::end(kSections), section) == std::end(kSections)) {
        throw ConfigError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside of a section");
    const std::string key = section + "." + trim(line.substr(0, eq));
    if (!find_key(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (s.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    s[key] = {trim(line.substr(eq + 1)), where};
  }
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Restricted-subspace energies and critical couplings of lattice models"};
  app.require_subcommand(1);
  std::map<std::string, std::string> flag_values;
  std::map<std::string, bool> flag_switches;
  std::string config_path;
  std::string manifest_path;

  const std::pair<const char*, const char*> commands[] = {
      {"split", "Hilbert-space split sizes and ratio series"},
      {"sweep", "energy sweep over g; writes CSV files and a manifest"},
      {"locate", "critical coupling from a sweep (CSV input or inline)"},
      {"qmc-trace", "projector Monte Carlo run with per-block diagnostics"},
      {"defaults", "tabulated Monte Carlo defaults"},
      {"replay", "re-run the command recorded in a manifest"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (std::string_view(name) == "replay") {
      sub->add_option("manifest", manifest_path, "manifest JSON file")->required();
      sub->add_option("--out", flag_values["output.path"], "output directory");
      continue;
    }
    sub->add_option("--config", config_path, "configuration file");
    for (const auto& k : kKeys) {
      if (k.is_flag) {
        sub->add_flag(k.flag, flag_switches[k.key], k.help);
      } else {
        sub->add_option(k.flag, flag_values[k.key], k.help);
      }
    }
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (app.get_subcommands().empty()) err << app.help();
    return 2;
  }

  try {
    std::string command = app.get_subcommands().front()->get_name();
    Settings settings;
    if (command == "replay") {
      settings = load_manifest(manifest_path, command);
    } else if (!config_path.empty()) {
      settings = load_config_file(config_path);
    }
    CLI::App* sub = app.get_subcommands().front();
    for (const auto& k : kKeys) {
      if (command == "replay" || sub->get_name() == "replay") break;
      const std::string key = k.key;
      if (k.is_flag) {
        if (sub->count(k.flag) > 0) settings[key] = {"true", k.flag};
      } else if (sub->count(k.flag) > 0) {
        settings[key] = {flag_values[key], k.flag};
      }
    }
    if (sub->get_name() == "replay" && sub->count("--out") > 0) {
      settings["output.path"] = {flag_values["output.path"], "--out"};
    }
    return dispatch(command, Config(std::move(settings)), out, err);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cqpt::cli
