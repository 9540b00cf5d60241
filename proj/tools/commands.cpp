#include "commands.hpp"

#include "barrier/errors.hpp"
#include "barrier/linalg.hpp"
#include "barrier/quantization.hpp"
#include "barrier/rmt_ensembles.hpp"
#include "barrier/rng.hpp"
#include "barrier/spacing_laws.hpp"
#include "barrier/spectral_statistics.hpp"
#include "barrier/trace_formula.hpp"
#include "barrier/transfer_operator.hpp"
#include "barrier/wiener_hopf.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <sstream>

namespace barrier::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr const char* kVersion = "0.1.0";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    if (!out_) throw IoError("write failed: " + path_.string());
  }
  void close() {
    out_.close();
    if (!out_) throw IoError("close failed: " + path_.string());
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

std::uint64_t realisation_seed(std::uint64_t seed, int i) {
  return Rng(seed).split(static_cast<std::uint64_t>(i)).next();
}

UnitarySample sample_ensemble(const EnsembleSettings& e, std::uint64_t seed) {
  if (e.kind == "A") return a_matrix(e.dim, seed);
  if (e.kind == "B") return b_matrix_random(channel_coordinates(e.dim), seed);
  if (e.kind == "C") return big_c_matrix(e.dim, seed);
  if (e.kind == "c") return c_matrix(e.dim, seed);
  if (e.kind == "xi") return xi_matrix(e.dim, seed);
  Rng rng(seed);
  LaxConfiguration cfg;
  cfg.alpha = e.alpha;
  const bool half = std::abs(e.alpha - 0.5) < 1e-12;
  cfg.theta = half ? sample_omega_half(e.dim, rng) : sample_omega_hard_rod(e.dim, rng);
  cfg.phases = uniform_phases(e.dim, rng);
  UnitarySample s = lax_matrix(cfg);
  s.seed = seed;
  return s;
}

SpacingLaw reference_law(const EnsembleSettings& e, int order) {
  if (e.kind == "c") return {LawFamily::ShiftedPoisson, 0, order};
  if (e.kind == "lax") {
    const bool half = std::abs(e.alpha - 0.5) < 1e-12;
    if (half && e.dim >= 2 * order + 3) return {LawFamily::ModelA, e.dim, order};
    if (!half && e.dim >= order + 2) return {LawFamily::ModelC, e.dim, order};
  }
  return {LawFamily::SemiPoisson, 0, order};
}

std::string law_name(const SpacingLaw& law) {
  switch (law.family) {
    case LawFamily::SemiPoisson: return "semi-Poisson";
    case LawFamily::ModelA: return "model-A N=" + std::to_string(law.n_dim);
    case LawFamily::ModelC: return "model-C N=" + std::to_string(law.n_dim);
    case LawFamily::ShiftedPoisson: return "shifted-Poisson";
    case LawFamily::Poisson: return "Poisson";
  }
  return "unknown";
}

std::vector<EigenphaseSpectrum> sample_spectra(const EnsembleSettings& e, std::uint64_t seed) {
  std::vector<EigenphaseSpectrum> out;
  out.reserve(e.realisations);
  for (int i = 0; i < e.realisations; ++i) {
    const UnitarySample s = sample_ensemble(e, realisation_seed(seed, i));
    out.push_back(EigenphaseSpectrum::from_phases(eigenphases(s.matrix), s.label));
  }
  return out;
}

void write_density(const fs::path& path, const DensityTable& t, const SpacingLaw& law) {
  CsvWriter w(path, {"s", "density", "reference"});
  const double width = t.width();
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const double lo = t.lo + static_cast<double>(i) * width;
    w.row({num(t.x[i]), num(t.density[i]), num(spacing_law_bin_average(law, lo, lo + width))});
  }
  w.close();
}

std::vector<double> read_levels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open levels file " + path);
  std::string line;
  int column = 0;
  std::vector<double> out;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      first = false;
      const auto it = std::find(cells.begin(), cells.end(), "k_root");
      if (it != cells.end()) {
        column = static_cast<int>(it - cells.begin());
        continue;
      }
      try {
        std::stod(cells.at(0));
      } catch (const std::exception&) {
        throw DomainError("levels file " + path + ": header lacks a k_root column");
      }
    }
    if (column >= static_cast<int>(cells.size())) throw DomainError("levels file " + path + ": short row");
    try {
      out.push_back(std::stod(cells[column]));
    } catch (const std::exception&) {
      throw DomainError("levels file " + path + ": bad number '" + cells[column] + "'");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Least-squares N(k) ~ c2 k^2 + c1 k + c0 through the staircase midpoints.
std::vector<double> unfold_by_fit(const std::vector<double>& k) {
  const Eigen::Index n = static_cast<Eigen::Index>(k.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = k[i] * k[i];
    a(i, 1) = k[i];
    a(i, 2) = 1.0;
    y[i] = static_cast<double>(i) + 0.5;
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
  std::vector<double> out(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) out[i] = c[0] * k[i] * k[i] + c[1] * k[i] + c[2];
  return out;
}

RunResult run_kplus(const RunConfig& c, const fs::path& dir) {
  RunResult r;
  const auto alphas = parse_alpha_sweep(c.alpha_sweep).values();
  const int n_terms = c.numerics.n_terms > 0 ? c.numerics.n_terms : default_n_terms(c.k, c.b);
  const KPlusEvaluator kp(c.k, c.b, n_terms, c.corrected);
  CsvWriter w(dir / "kplus.csv", {"alpha_re", "alpha_im", "kplus_re", "kplus_im",
                                  "ratio_to_asymptotic_re", "ratio_to_asymptotic_im"});
  for (double a : alphas) {
    const cplx v = kp(cplx(a, 0.0));
    const cplx ratio = v / k_plus_asymptotic({c.k, c.b, cplx(a, 0.0)});
    w.row({num(a), num(0.0), num(v.real()), num(v.imag()), num(ratio.real()), num(ratio.imag())});
  }
  w.close();
  r.files.push_back("kplus.csv");
  r.metadata["n_terms"] = n_terms;
  r.metadata["corrected"] = c.corrected;
  r.metadata["points"] = alphas.size();

  if (c.convergence) {
    // Reference: corrected product at 64 times the largest tabulated truncation.
    const std::vector<int> grid{200, 400, 800, 1600, 3200};
    const int n_ref = 64 * std::max(grid.back(), default_n_terms(c.k, c.b));
    CsvWriter cw(dir / "kplus_convergence.csv",
                 {"alpha", "n_terms", "rel_error_raw", "rel_error_corrected"});
    for (double a : alphas) {
      const FactorizationInput in{c.k, c.b, cplx(a, 0.0)};
      const cplx ref = k_plus_corrected(in, n_ref).value;
      for (int n : grid) {
        const cplx raw = k_plus_product(in, n).value;
        const std::string corr = n > c.b * c.k / kPi ? num(std::abs(k_plus_corrected(in, n).value / ref - 1.0))
                                                     : std::string("nan");
        cw.row({num(a), std::to_string(n), num(std::abs(raw / ref - 1.0)), corr});
      }
    }
    cw.close();
    r.files.push_back("kplus_convergence.csv");
    r.metadata["convergence_reference_n_terms"] = n_ref;
  }
  return r;
}

RunResult run_smatrix(const RunConfig& c, const fs::path& dir) {
  RunResult r;
  MatrixXcd m;
  json summary;
  if (c.matrix == "paraxial") {
    const MatrixXd s = s_paraxial(c.ensemble.dim);
    m = s.cast<cplx>();
    summary["orthogonality_defect"] = orthogonality_defect(s);
  } else {
    const double b = c.geometry ? c.geometry->b : c.b;
    ModeOptions mo;
    mo.n_terms = c.numerics.n_terms;
    mo.amplitudes = (c.matrix == "physical");
    const ModeSet modes = build_mode_set(c.k, b, mo);
    summary["n_prop"] = modes.n_prop;
    if (c.matrix == "exact") {
      const MatrixXd s = s_matrix_exact(modes);
      m = s.cast<cplx>();
      summary["orthogonality_defect"] = orthogonality_defect(s);
    } else if (c.matrix == "physical") {
      m = s_matrix_physical(modes);
    } else {
      m = b_matrix(modes, *c.geometry).matrix;
    }
  }
  summary["dim"] = m.rows();
  summary["unitarity_defect"] = unitarity_defect(m);
  CsvWriter w(dir / "smatrix.csv", {"row", "col", "re", "im"});
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      w.row({std::to_string(i + 1), std::to_string(j + 1), num(m(i, j).real()), num(m(i, j).imag())});
  w.close();
  std::ofstream js(dir / "unitarity.json");
  js << summary.dump(2) << '\n';
  if (!js) throw IoError("cannot write unitarity.json");
  r.files = {"smatrix.csv", "unitarity.json"};
  r.metadata = summary;
  return r;
}

RunResult run_ensemble(const RunConfig& c, const fs::path& dir) {
  RunResult r;
  const auto& e = c.ensemble;
  PnHistogram h(e.order, c.numerics.bins, c.numerics.s_max);
  for (int i = 0; i < e.realisations; ++i) {
    const UnitarySample s = sample_ensemble(e, realisation_seed(c.seed, i));
    h.add(EigenphaseSpectrum::from_phases(eigenphases(s.matrix), s.label));
  }
  const DensityTable t = h.table();
  const SpacingLaw law = reference_law(e, e.order);
  CsvWriter w(dir / "histogram.csv",
              {"s_bin_center", "density", "law_reference_density", "realisations", "seed"});
  const double width = t.width();
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const double lo = t.lo + static_cast<double>(i) * width;
    w.row({num(t.x[i]), num(t.density[i]), num(spacing_law_bin_average(law, lo, lo + width)),
           std::to_string(e.realisations), std::to_string(c.seed)});
  }
  w.close();
  r.files.push_back("histogram.csv");
  r.metadata["reference_law"] = law_name(law);
  r.metadata["reference_is_bin_average"] = true;
  r.metadata["order"] = e.order;
  r.metadata["sup_norm"] = sup_norm_vs_law(t, law);
  r.metadata["samples"] = t.total;
  r.metadata["sparse"] = t.sparse;
  return r;
}

RunResult run_stats(const RunConfig& c, const fs::path& dir) {
  RunResult r;
  std::vector<EigenphaseSpectrum> spectra;
  EnsembleSettings e = c.ensemble;
  if (!c.levels.empty()) {
    const auto k = read_levels(c.levels);
    if (k.size() < 20) throw DomainError("levels: need at least 20 levels");
    const auto x = unfold_by_fit(k);
    const double span = x.back() - x.front() + 1.0;
    std::vector<double> ph(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ph[i] = 2.0 * kPi * (x[i] - x.front()) / span;
    spectra.push_back(EigenphaseSpectrum::from_phases(ph, c.levels));
    e.kind = "levels";
    e.dim = static_cast<int>(x.size());
    r.metadata["source"] = "levels";
    r.metadata["unfolding"] = "quadratic least-squares fit of the staircase";
  } else {
    spectra = sample_spectra(e, c.seed);
    r.metadata["source"] = "ensemble";
  }
  json laws = json::array();
  for (int n = 0; n <= e.order; ++n) {
    const DensityTable t = p_n_histogram(spectra, n, c.numerics.bins, c.numerics.s_max);
    const SpacingLaw law = reference_law(e, n);
    const std::string name = "pn_" + std::to_string(n) + ".csv";
    write_density(dir / name, t, law);
    r.files.push_back(name);
    laws.push_back({{"order", n}, {"law", law_name(law)}, {"sup_norm", sup_norm_vs_law(t, law)}});
  }
  r.metadata["p_n"] = laws;

  const R2Table r2 = r2_estimate(spectra, c.numerics.bins, c.numerics.s_max);
  std::vector<double> tau;
  const int n_tau = 300;
  for (int i = 0; i <= n_tau; ++i) tau.push_back(c.tau_max * i / n_tau);
  const FormFactorTable ff = form_factor(r2.table, tau);
  CsvWriter fw(dir / "formfactor.csv", {"tau", "k_estimate", "k_reference"});
  for (std::size_t i = 0; i < ff.tau.size(); ++i)
    fw.row({num(ff.tau[i]), num(ff.k[i]), num(semi_poisson_form_factor(ff.tau[i]))});
  fw.close();
  r.files.push_back("formfactor.csv");
  r.metadata["form_factor"] = {{"taper_start", ff.taper_start},
                               {"r2_max_order", r2.max_order},
                               {"r2_truncated", r2.truncated},
                               {"reference", "semi-Poisson"}};

  std::vector<double> l_grid;
  const double l_top = std::min(25.0, e.dim / 4.0);
  for (double l = 0.5; l <= l_top + 1e-12; l += 0.5) l_grid.push_back(l);
  if (!l_grid.empty()) {
    const NumberVarianceTable nv = number_variance(spectra, l_grid);
    CsvWriter nw(dir / "numvar.csv", {"L", "variance"});
    for (std::size_t i = 0; i < nv.l.size(); ++i) nw.row({num(nv.l[i]), num(nv.variance[i])});
    nw.close();
    r.files.push_back("numvar.csv");
    if (l_top >= 20.0) {
      const CompressibilityFit fit = compressibility(nv, 5.0, 20.0);
      r.metadata["compressibility"] = {{"slope", fit.slope},
                                       {"intercept", fit.intercept},
                                       {"rel_residual", fit.rel_residual},
                                       {"nonlinear_warning", fit.nonlinear_warning},
                                       {"window", {5.0, 20.0}}};
    }
  }
  return r;
}

RunResult run_trace(const RunConfig& c, const fs::path& dir) {
  RunResult r;
  const Geometry& g = *c.geometry;
  const auto orbits = enumerate_orbits(g, c.numerics.l_max, 64, RepetitionRule::ChannelPower);
  CsvWriter ow(dir / "orbits.csv", {"M", "N", "length", "K", "eta", "amplitude"});
  for (const auto& o : orbits)
    ow.row({std::to_string(o.m_wind), std::to_string(o.n_wind), num(o.length), std::to_string(o.k_int),
            num(o.eta), num(o.amplitude)});
  ow.close();
  r.files.push_back("orbits.csv");
  r.metadata["repetition_rule"] = "channel-power";

  if (!c.pairs.empty()) {
    std::vector<double> hs = c.h_ratios;
    if (hs.empty()) hs.push_back(g.h1 / g.a);
    CsvWriter qw(dir / "qcheck.csv",
                 {"R", "M", "N", "y", "trace_real", "prediction", "clustering_fraction"});
    for (double h : hs)
      for (const auto& [m, n] : c.pairs)
        for (int rd : c.r_dims) {
          QMatrixSpec spec;
          spec.r_dim = rd;
          spec.m_wind = m;
          spec.n_wind = n;
          spec.h_ratio = h;
          const QCheck q = q_check(spec);
          qw.row({std::to_string(rd), std::to_string(m), std::to_string(n), num(spec.y()),
                  num(q.trace_real), num(q.prediction), num(q.clustering_fraction)});
        }
    qw.close();
    r.files.push_back("qcheck.csv");
  }

  if (!c.levels.empty()) {
    const auto k = read_levels(c.levels);
    if (k.size() < 200) throw DomainError("levels: the length spectrum needs at least 200 levels");
    std::vector<double> grid;
    for (long i = 1; i * c.l_step <= c.numerics.l_max + 1e-12; ++i) grid.push_back(i * c.l_step);
    const LengthSpectrum ls = length_spectrum(k, g, grid);
    CsvWriter lw(dir / "lengthspec.csv", {"L", "weight"});
    for (std::size_t i = 0; i < ls.l.size(); ++i) lw.row({num(ls.l[i]), num(ls.weight[i])});
    lw.close();
    r.files.push_back("lengthspec.csv");
    json peaks = json::array();
    const auto found = find_peaks(ls);
    for (std::size_t i = 0; i < found.size() && i < 20; ++i)
      peaks.push_back({{"L", found[i].l}, {"weight", found[i].weight}});
    r.metadata["length_spectrum"] = {{"window", "hann"},
                                     {"k_min", ls.k_min},
                                     {"k_max", ls.k_max},
                                     {"levels", k.size()},
                                     {"window_too_short", ls.window_too_short},
                                     {"peaks", peaks}};
  }
  return r;
}

RunResult run_spectrum(const RunConfig& c, const fs::path& dir) {
  RunResult r;
  SecularOptions opt;
  opt.dk = c.numerics.dk;
  opt.n_evanescent = c.numerics.n_evanescent;
  opt.n_terms = c.numerics.n_terms;
  const SecularScan scan = secular_scan(*c.geometry, c.k_min, c.k_max, opt);
  CsvWriter w(dir / "spectrum.csv", {"index", "k_root", "residual", "flag"});
  long index = 0;
  for (const auto& root : scan.roots) {
    const int flag = (root.near_threshold ? 1 : 0) | (root.collision ? 2 : 0);
    for (int m = 0; m < root.multiplicity; ++m)
      w.row({std::to_string(++index), num(root.k), num(root.residual), std::to_string(flag)});
  }
  w.close();
  r.files.push_back("spectrum.csv");
  r.metadata["levels"] = scan.level_count();
  r.metadata["dk"] = scan.dk;
  r.metadata["n_evanescent"] = scan.n_evanescent;
  r.metadata["evaluations"] = scan.evaluations;
  r.metadata["flag_bits"] = {{"1", "within 10 dk of a channel threshold"},
                             {"2", "unresolved degenerate crossing"}};
  r.metadata["determinism"] = "no random numbers are used; identical configs give identical output";
  return r;
}
}  // namespace

RunResult run_command(const RunConfig& c, const fs::path& dir) {
  if (c.command == "kplus") return run_kplus(c, dir);
  if (c.command == "smatrix") return run_smatrix(c, dir);
  if (c.command == "ensemble") return run_ensemble(c, dir);
  if (c.command == "stats") return run_stats(c, dir);
  if (c.command == "trace") return run_trace(c, dir);
  if (c.command == "spectrum") return run_spectrum(c, dir);
  throw ConfigError("command", "unknown command " + c.command);
}

void write_manifest(const RunConfig& c, const fs::path& dir, const RunResult& result,
                    double wall_seconds) {
  json m;
  m["command"] = c.command;
  m["config"] = config_to_json(c);
  m["seed"] = c.seed;
  m["versions"] = {{"barrier", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                 "." + std::to_string(EIGEN_MINOR_VERSION)}};
  m["files"] = result.files;
  m["metadata"] = result.metadata;
  m["wall_time_s"] = wall_seconds;
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  m["timestamp"] = stamp;
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << '\n';
  if (!out) throw IoError("cannot write manifest.json");
}

}  // namespace barrier::cli
