#include "commands.hpp"
#include "run_config.hpp"

#include "barrier/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace barrier;
using namespace barrier::cli;

namespace {

// Flag values; only the ones given on the command line override the config file.
struct Flags {
  std::string config;
  std::optional<double> a, h1;
  std::optional<std::string> kind;
  std::optional<int> dim, realisations, order;
  std::optional<double> alpha;
  std::optional<int> n_terms, n_evanescent, bins;
  std::optional<double> dk, s_max, l_max;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<double> k, b;
  std::optional<std::string> alpha_sweep;
  std::optional<bool> corrected;
  bool convergence = false;
  std::optional<std::string> matrix;
  std::optional<double> k_min, k_max;
  std::optional<std::string> pairs;
  std::vector<double> h_ratios;
  std::vector<int> r_dims;
  std::optional<double> l_step, tau_max;
  std::optional<std::string> levels;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration; flags override it");
  sub->add_option("--seed", f.seed, "64-bit seed");
  sub->add_option("--output-dir", f.output_dir, "output directory (default: $BARRIER_OUTPUT_ROOT/<command>-<hash>)");
  sub->add_option("--n-terms", f.n_terms, "K+ truncation (0 = default)");
}

void add_geometry(CLI::App* sub, Flags& f) {
  sub->add_option("--a", f.a, "rectangle width a");
  sub->add_option("--b", f.b, "rectangle height b");
  sub->add_option("--h1", f.h1, "Neumann part of the barrier");
}

void add_ensemble(CLI::App* sub, Flags& f) {
  sub->add_option("--kind", f.kind, "A, B, C, c, xi or lax");
  sub->add_option("--dim", f.dim, "matrix dimension (n0 for c, C, xi)");
  sub->add_option("--realisations", f.realisations, "number of matrices");
  sub->add_option("--alpha", f.alpha, "lax coupling: 0.5 or 1/(2 dim)");
  sub->add_option("--order", f.order, "spacing order n of P_n");
  sub->add_option("--bins", f.bins, "histogram bins");
  sub->add_option("--s-max", f.s_max, "histogram range [0, s_max)");
}

RunConfig build_config(const std::string& command, const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw IoError("cannot read config file " + f.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    c = config_from_json(j);
    if (!c.command.empty() && c.command != command)
      throw ConfigError("command", "config file is for '" + c.command + "', not '" + command + "'");
  }
  c.command = command;
  if (f.a || f.h1 || (f.b && c.geometry)) {
    const Geometry base = c.geometry.value_or(Geometry{});
    const double a = f.a.value_or(base.a);
    const double b = f.b.value_or(base.b);
    const double h1 = f.h1.value_or(c.geometry ? base.h1 : 0.5 * a);
    if (!(a > 0.0) || !(h1 > 0.0) || !(h1 < a)) throw ConfigError("geometry", "need a > 0 and 0 < h1 < a");
    c.geometry = Geometry::from_split(a, b, h1);
  }
  if (f.kind) c.ensemble.kind = *f.kind;
  if (f.dim) c.ensemble.dim = *f.dim;
  if (f.realisations) c.ensemble.realisations = *f.realisations;
  if (f.order) c.ensemble.order = *f.order;
  if (f.alpha) c.ensemble.alpha = *f.alpha;
  if (f.n_terms) c.numerics.n_terms = *f.n_terms;
  if (f.n_evanescent) c.numerics.n_evanescent = *f.n_evanescent;
  if (f.bins) c.numerics.bins = *f.bins;
  if (f.dk) c.numerics.dk = *f.dk;
  if (f.s_max) c.numerics.s_max = *f.s_max;
  if (f.l_max) c.numerics.l_max = *f.l_max;
  if (f.seed) c.seed = *f.seed;
  if (f.output_dir) c.output_dir = *f.output_dir;
  if (f.k) c.k = *f.k;
  if (f.b) c.b = *f.b;
  if (f.alpha_sweep) c.alpha_sweep = *f.alpha_sweep;
  if (f.corrected) c.corrected = *f.corrected;
  if (f.convergence) c.convergence = true;
  if (f.matrix) c.matrix = *f.matrix;
  if (f.k_min) c.k_min = *f.k_min;
  if (f.k_max) c.k_max = *f.k_max;
  if (f.pairs) c.pairs = parse_pairs(*f.pairs);
  if (!f.h_ratios.empty()) c.h_ratios = f.h_ratios;
  if (!f.r_dims.empty()) c.r_dims = f.r_dims;
  if (f.l_step) c.l_step = *f.l_step;
  if (f.tau_max) c.tau_max = *f.tau_max;
  if (f.levels) c.levels = *f.levels;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barrier billiard transfer operators, random unitary ensembles and spectral statistics"};
  app.require_subcommand(1);
  Flags f;

  auto* kplus = app.add_subcommand("kplus", "Wiener-Hopf factor K+ over a real alpha sweep");
  add_common(kplus, f);
  kplus->add_option("--k", f.k, "wavenumber");
  kplus->add_option("--b", f.b, "half height b");
  kplus->add_option("--alpha-sweep", f.alpha_sweep, "lo:hi:step, inclusive");
  kplus->add_option("--corrected", f.corrected, "apply the tail correction (default true)");
  kplus->add_flag("--convergence", f.convergence, "also tabulate truncation errors");

  auto* smatrix = app.add_subcommand("smatrix", "S or B matrix as CSV plus unitarity summary");
  add_common(smatrix, f);
  add_geometry(smatrix, f);
  smatrix->add_option("--k", f.k, "wavenumber");
  smatrix->add_option("--matrix", f.matrix, "exact, physical, b or paraxial");
  smatrix->add_option("--dim", f.dim, "half dimension of the paraxial kernel");

  auto* ensemble = app.add_subcommand("ensemble", "P_n histogram of a random unitary ensemble");
  add_common(ensemble, f);
  add_ensemble(ensemble, f);

  auto* stats = app.add_subcommand("stats", "P_n, form factor and number variance");
  add_common(stats, f);
  add_ensemble(stats, f);
  stats->add_option("--levels", f.levels, "CSV of levels (k_root column) instead of an ensemble");
  stats->add_option("--tau-max", f.tau_max, "largest tau of the form factor table");

  auto* trace = app.add_subcommand("trace", "periodic orbits, Q-matrix check and length spectrum");
  add_common(trace, f);
  add_geometry(trace, f);
  trace->add_option("--l-max", f.l_max, "longest orbit / length grid end");
  trace->add_option("--l-step", f.l_step, "length grid step");
  trace->add_option("--pairs", f.pairs, "Q-matrix (M, N) pairs, e.g. 2/1,3/1");
  trace->add_option("--h-ratio", f.h_ratios, "h1/a values for the Q-matrix check")->delimiter(',');
  trace->add_option("--r-dim", f.r_dims, "Q-matrix dimensions")->delimiter(',');
  trace->add_option("--levels", f.levels, "CSV of levels (k_root column) for the length spectrum");

  auto* spectrum = app.add_subcommand("spectrum", "eigen-wavenumbers from det(1 + B) = 0");
  add_common(spectrum, f);
  add_geometry(spectrum, f);
  spectrum->add_option("--k-min", f.k_min, "scan start");
  spectrum->add_option("--k-max", f.k_max, "scan end");
  spectrum->add_option("--dk", f.dk, "largest scan step");
  spectrum->add_option("--n-evanescent", f.n_evanescent, "evanescent channels (-1 = default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig config = build_config(command, f);
    validate(config);
    const fs::path dir = resolve_output_dir(config);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    const RunResult result = run_command(config, dir);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(config, dir, result, wall);
    std::cout << dir.string() << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical abort in " << command << ": " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 4;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 4;
  }
}
