#include "run_config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

namespace barrier::cli {

using nlohmann::json;

namespace {
constexpr double kPi = std::numbers::pi;
const std::set<std::string> kCommands{"kplus", "smatrix", "ensemble", "stats", "trace", "spectrum"};
const std::set<std::string> kKinds{"A", "B", "C", "c", "xi", "lax"};
const std::set<std::string> kMatrices{"exact", "physical", "b", "paraxial"};

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& field) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(field, std::string("wrong type: ") + e.what());
  }
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

bool is_on_threshold(double k, double b) {
  const double j = std::round(2.0 * b * k / kPi);
  return j >= 1.0 && std::abs(k - j * kPi / (2.0 * b)) <= 4.0 * std::numeric_limits<double>::epsilon() * k;
}
}  // namespace

ConfigError::ConfigError(const std::string& field, const std::string& message)
    : DomainError(field + ": " + message), field_(field) {}

std::vector<double> AlphaSweep::values() const {
  std::vector<double> out;
  if (!(step > 0.0) || hi < lo) return out;
  const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

AlphaSweep parse_alpha_sweep(const std::string& text) {
  AlphaSweep s;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> s.lo >> c1 >> s.hi >> c2 >> s.step) || c1 != ':' || c2 != ':' || !is.eof())
    throw ConfigError("alpha_sweep", "expected lo:hi:step, got '" + text + "'");
  if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !std::isfinite(s.step))
    throw ConfigError("alpha_sweep", "non-finite bound");
  if (!(s.step > 0.0)) throw ConfigError("alpha_sweep", "step must be positive");
  if (s.hi < s.lo) throw ConfigError("alpha_sweep", "empty sweep range");
  return s;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    int m = 0, n = 0;
    char slash = 0;
    std::istringstream one(item);
    if (!(one >> m >> slash >> n) || slash != '/')
      throw ConfigError("pairs", "expected M/N items, got '" + item + "'");
    out.emplace_back(m, n);
  }
  return out;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  RunConfig c;
  read(j, "command", c.command, "command");
  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    double a = 1.0, b = 1.0, h1 = 0.5;
    read(g, "a", a, "geometry.a");
    read(g, "b", b, "geometry.b");
    read(g, "h1", h1, "geometry.h1");
    c.geometry = Geometry::from_split(a, b, h1);
  }
  if (j.contains("ensemble")) {
    const json& e = j.at("ensemble");
    read(e, "kind", c.ensemble.kind, "ensemble.kind");
    read(e, "dim", c.ensemble.dim, "ensemble.dim");
    read(e, "realisations", c.ensemble.realisations, "ensemble.realisations");
    read(e, "alpha", c.ensemble.alpha, "ensemble.alpha");
    read(e, "order", c.ensemble.order, "ensemble.order");
  }
  if (j.contains("numerics")) {
    const json& n = j.at("numerics");
    read(n, "n_terms", c.numerics.n_terms, "numerics.n_terms");
    read(n, "n_evanescent", c.numerics.n_evanescent, "numerics.n_evanescent");
    read(n, "dk", c.numerics.dk, "numerics.dk");
    read(n, "bins", c.numerics.bins, "numerics.bins");
    read(n, "s_max", c.numerics.s_max, "numerics.s_max");
    read(n, "l_max", c.numerics.l_max, "numerics.l_max");
  }
  read(j, "seed", c.seed, "seed");
  read(j, "output_dir", c.output_dir, "output_dir");
  read(j, "k", c.k, "k");
  read(j, "b", c.b, "b");
  read(j, "alpha_sweep", c.alpha_sweep, "alpha_sweep");
  read(j, "corrected", c.corrected, "corrected");
  read(j, "convergence", c.convergence, "convergence");
  read(j, "matrix", c.matrix, "matrix");
  read(j, "k_min", c.k_min, "k_min");
  read(j, "k_max", c.k_max, "k_max");
  if (j.contains("pairs")) {
    std::string text;
    read(j, "pairs", text, "pairs");
    c.pairs = parse_pairs(text);
  }
  read(j, "h_ratios", c.h_ratios, "h_ratios");
  read(j, "r_dims", c.r_dims, "r_dims");
  read(j, "l_step", c.l_step, "l_step");
  read(j, "levels", c.levels, "levels");
  read(j, "tau_max", c.tau_max, "tau_max");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  if (c.geometry) j["geometry"] = {{"a", c.geometry->a}, {"b", c.geometry->b}, {"h1", c.geometry->h1}};
  j["ensemble"] = {{"kind", c.ensemble.kind},
                   {"dim", c.ensemble.dim},
                   {"realisations", c.ensemble.realisations},
                   {"alpha", c.ensemble.alpha},
                   {"order", c.ensemble.order}};
  j["numerics"] = {{"n_terms", c.numerics.n_terms}, {"n_evanescent", c.numerics.n_evanescent},
                   {"dk", c.numerics.dk},           {"bins", c.numerics.bins},
                   {"s_max", c.numerics.s_max},     {"l_max", c.numerics.l_max}};
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["k"] = c.k;
  j["b"] = c.b;
  j["alpha_sweep"] = c.alpha_sweep;
  j["corrected"] = c.corrected;
  j["convergence"] = c.convergence;
  j["matrix"] = c.matrix;
  j["k_min"] = c.k_min;
  j["k_max"] = c.k_max;
  std::string pairs;
  for (const auto& [m, n] : c.pairs) pairs += (pairs.empty() ? "" : ",") + std::to_string(m) + "/" + std::to_string(n);
  j["pairs"] = pairs;
  j["h_ratios"] = c.h_ratios;
  j["r_dims"] = c.r_dims;
  j["l_step"] = c.l_step;
  j["levels"] = c.levels;
  j["tau_max"] = c.tau_max;
  return j;
}

void validate(const RunConfig& c) {
  require(kCommands.count(c.command) == 1, "command",
          "must be one of kplus, smatrix, ensemble, stats, trace, spectrum");
  if (c.geometry) {
    try {
      c.geometry->validate();
    } catch (const DomainError& e) {
      throw ConfigError("geometry", e.what());
    }
  }
  const auto& n = c.numerics;
  require(n.n_terms >= 0, "numerics.n_terms", "must be >= 0");
  require(n.n_evanescent >= -1, "numerics.n_evanescent", "must be >= 0 (or -1 for default)");
  require(n.dk > 0.0 && std::isfinite(n.dk), "numerics.dk", "must be positive");
  require(n.bins >= 1 && n.bins <= 100000, "numerics.bins", "must lie in [1, 100000]");
  require(n.s_max > 0.0 && std::isfinite(n.s_max), "numerics.s_max", "must be positive");
  require(n.l_max > 0.0 && std::isfinite(n.l_max), "numerics.l_max", "must be positive");

  const std::string& cmd = c.command;
  if (cmd == "kplus") {
    require(c.k > 0.0 && std::isfinite(c.k), "k", "must be positive");
    require(c.b > 0.0 && std::isfinite(c.b), "b", "must be positive");
    require(!c.alpha_sweep.empty(), "alpha_sweep", "required");
    parse_alpha_sweep(c.alpha_sweep);
    require(n.n_terms == 0 || !c.corrected || n.n_terms > c.b * c.k / kPi,
            "numerics.n_terms", "the tail correction needs n_terms > bk/pi");
  } else if (cmd == "smatrix") {
    require(kMatrices.count(c.matrix) == 1, "matrix", "must be one of exact, physical, b, paraxial");
    if (c.matrix == "paraxial") {
      require(c.ensemble.dim >= 1, "ensemble.dim", "must be >= 1");
    } else {
      require(c.k > 0.0 && std::isfinite(c.k), "k", "must be positive");
      const double b = c.geometry ? c.geometry->b : c.b;
      require(b > 0.0, "b", "must be positive");
      require(c.k > kPi / (2.0 * b), "k", "no propagating channel below pi/(2b)");
      require(!is_on_threshold(c.k, b), "k", "sits on a channel threshold");
      require(c.matrix != "b" || c.geometry.has_value(), "geometry", "required for matrix b");
    }
  } else if (cmd == "ensemble" || (cmd == "stats" && c.levels.empty())) {
    const auto& e = c.ensemble;
    require(kKinds.count(e.kind) == 1, "ensemble.kind", "must be one of A, B, C, c, xi, lax");
    require(e.dim >= 2 && e.dim <= 20000, "ensemble.dim", "must lie in [2, 20000]");
    require(e.realisations >= 1, "ensemble.realisations", "must be >= 1");
    require(e.order >= 0, "ensemble.order", "must be >= 0");
    if (e.kind == "A") require(e.dim % 2 == 1 && e.dim >= 3, "ensemble.dim", "must be odd and >= 3 for kind A");
    if (e.kind == "lax") {
      const bool half = std::abs(e.alpha - 0.5) < 1e-12;
      const bool rod = std::abs(e.alpha - 1.0 / (2.0 * e.dim)) < 1e-12;
      require(half || rod, "ensemble.alpha", "lax ensemble supports alpha = 1/2 or 1/(2 dim)");
      if (half) require(e.dim % 2 == 1 && e.dim >= 3, "ensemble.dim", "must be odd and >= 3 for alpha = 1/2");
    }
  }
  if (cmd == "stats") {
    require(c.ensemble.order >= 0 && c.ensemble.order <= 10, "ensemble.order", "must lie in [0, 10]");
    require(c.tau_max > 0.0, "tau_max", "must be positive");
  }
  if (cmd == "spectrum") {
    require(c.geometry.has_value(), "geometry", "required");
    require(c.k_min >= 0.0, "k_min", "must be >= 0");
    require(c.k_max > c.k_min, "k_max", "must exceed k_min (empty scan range)");
  }
  if (cmd == "trace") {
    require(c.geometry.has_value(), "geometry", "required");
    require(n.l_max > 2.0 * c.geometry->a, "numerics.l_max", "must exceed 2a");
    require(c.l_step > 0.0, "l_step", "must be positive");
    require(n.l_max / c.l_step <= 1e6, "l_step", "length grid too fine");
    for (const auto& [m, nw] : c.pairs) {
      require(m >= 1 && nw >= 1, "pairs", "M and N must be >= 1");
      require(std::gcd(m, nw) == 1, "pairs", "M and N must be co-prime");
      for (int r : c.r_dims) require(r >= 4 * m, "r_dims", "each R must be >= 4M");
    }
    require(!c.r_dims.empty(), "r_dims", "must not be empty");
    for (double h : c.h_ratios) require(h > 0.0 && h < 1.0, "h_ratios", "must lie in (0, 1)");
  }
}

std::string config_hash(const RunConfig& c) {
  RunConfig copy = c;
  copy.output_dir.clear();
  const std::string text = config_to_json(copy).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string default_output_root() {
  const char* env = std::getenv("BARRIER_OUTPUT_ROOT");
  return (env && *env) ? env : "barrier_runs";
}

std::string resolve_output_dir(const RunConfig& c) {
  if (!c.output_dir.empty()) return c.output_dir;
  return default_output_root() + "/" + c.command + "-" + config_hash(c);
}

}  // namespace barrier::cli
