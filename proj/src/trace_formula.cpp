#include "barrier/trace_formula.hpp"

#include "barrier/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace barrier {

namespace {
constexpr double kPi = std::numbers::pi;

double frac(double v) { return v - std::floor(v); }
double parity_sign(long k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// Snap n h1/a to an integer when it is one up to rounding, so eta = 0 rather than 1 - eps.
std::pair<long, double> split_value(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(v))) return {static_cast<long>(r), 0.0};
  const double f = std::floor(v);
  return {static_cast<long>(f), v - f};
}

double hann(double k, double k_min, double k_max) {
  if (k <= k_min || k >= k_max) return 0.0;
  const double s = std::sin(kPi * (k - k_min) / (k_max - k_min));
  return s * s;
}
}  // namespace

std::pair<int, double> winding_split(const Geometry& g, int n_wind) {
  const auto [k, eta] = split_value(n_wind * g.h1 / g.a);
  return {static_cast<int>(k), eta};
}

double orbit_amplitude(const Geometry& g, int n_wind) {
  const auto [k, eta] = winding_split(g, n_wind);
  return parity_sign(k) * (1.0 - 2.0 * eta) * 4.0 * g.area();
}

std::vector<PeriodicOrbit> enumerate_orbits(const Geometry& g, double l_max, int max_repetition,
                                            RepetitionRule rule) {
  g.validate();
  if (!(l_max > 2.0 * g.a)) throw DomainError("l_max must exceed 2a");
  if (max_repetition < 1) throw DomainError("max_repetition must be >= 1");

  auto make = [&](int m, int n, int r) {
    PeriodicOrbit o;
    o.m_wind = r * m;
    o.n_wind = r * n;
    o.repetition = r;
    o.boundary = (n == 0);
    o.length = std::hypot(2.0 * g.a * o.m_wind, 2.0 * g.b * o.n_wind);
    const auto [k, eta] = winding_split(g, o.n_wind);
    o.k_int = k;
    o.eta = eta;
    if (r == 1 || rule == RepetitionRule::ReducedPair) {
      o.amplitude = orbit_amplitude(g, o.n_wind);
    } else {
      const auto [k1, eta1] = winding_split(g, n);
      o.amplitude = parity_sign(static_cast<long>(r) * k1) *
                    ((1.0 - eta1) + parity_sign(r) * eta1) * 4.0 * g.area();
    }
    return o;
  };

  std::vector<PeriodicOrbit> out;
  const int m_max = static_cast<int>(std::floor(l_max / (2.0 * g.a)));
  const int n_max = static_cast<int>(std::floor(l_max / (2.0 * g.b)));
  for (int m = 1; m <= m_max; ++m) {
    for (int n = 0; n <= n_max; ++n) {
      if (std::gcd(m, n) != 1) continue;
      const double len = std::hypot(2.0 * g.a * m, 2.0 * g.b * n);
      if (len > l_max) continue;
      for (int r = 1; r <= max_repetition && r * len <= l_max; ++r) out.push_back(make(m, n, r));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const PeriodicOrbit& x, const PeriodicOrbit& y) {
    if (x.length != y.length) return x.length < y.length;
    return x.m_wind < y.m_wind;
  });
  return out;
}

double weyl_density(const Geometry& g) { return g.area() / (4.0 * kPi); }

double weyl_counting(const Geometry& g, double k) { return g.area() * k * k / (4.0 * kPi); }

double oscillating_density(const Geometry& g, const std::vector<PeriodicOrbit>& orbits, double k) {
  (void)g;
  if (!(k > 0.0)) throw DomainError("k must be positive");
  double sum = 0.0;
  for (const auto& o : orbits)
    sum += o.amplitude / std::sqrt(2.0 * kPi * k * o.length) * std::cos(k * o.length - kPi / 4.0);
  return sum / (2.0 * kPi);
}

double f_kernel(long p, double y) {
  if (p == 0) return 1.0 - 2.0 * frac(y);
  return -2.0 * std::sin(kPi * y * static_cast<double>(p)) / (kPi * static_cast<double>(p));
}

MatrixXd u_matrix(int r_dim, double y) {
  if (r_dim < 1) throw DomainError("r_dim must be >= 1");
  std::vector<double> f(r_dim);
  for (int p = 0; p < r_dim; ++p) f[p] = f_kernel(p, y);
  MatrixXd u(r_dim, r_dim);
  for (int i = 0; i < r_dim; ++i)
    for (int j = 0; j < r_dim; ++j) u(i, j) = ((i == j ? 1.0 : 0.0) - f[std::abs(i - j)]) / 2.0;
  return u;
}

namespace {
void validate_q(const QMatrixSpec& s) {
  if (s.m_wind < 1 || s.n_wind < 1) throw DomainError("Q matrix needs M >= 1 and N >= 1");
  if (std::gcd(s.m_wind, s.n_wind) != 1) throw DomainError("Q matrix needs co-prime (M, N)");
  if (s.r_dim < 4 * s.m_wind) throw DomainError("r_dim must be >= 4M");
  if (!(s.h_ratio > 0.0 && s.h_ratio < 1.0)) throw DomainError("h1/a must lie in (0, 1)");
}
}  // namespace

MatrixXcd q_matrix(const QMatrixSpec& spec) {
  validate_q(spec);
  const int r = spec.r_dim;
  const double y = spec.y();
  std::vector<double> f(2 * r - 1);
  for (int p = -(r - 1); p <= r - 1; ++p) f[p + r - 1] = f_kernel(p, y);
  MatrixXcd q(r, r);
  for (int m = 1; m <= r; ++m) {
    // z = N/M, so the phase only depends on (N m) mod M
    const long red = (static_cast<long>(spec.n_wind) * m) % spec.m_wind;
    const cplx ph = std::polar(1.0, -2.0 * kPi * static_cast<double>(red) / spec.m_wind);
    for (int n = 1; n <= r; ++n) q(m - 1, n - 1) = ph * f[m - n + r - 1];
  }
  return q;
}

double q_trace_prediction(const QMatrixSpec& spec) {
  if (spec.m_wind < 1 || spec.n_wind < 1 || std::gcd(spec.m_wind, spec.n_wind) != 1)
    throw DomainError("trace prediction needs co-prime (M, N)");
  const auto [k, eta] = split_value(spec.n_wind * spec.h_ratio);
  return parity_sign(k) * (1.0 - 2.0 * eta);
}

double q_trace_limit(const QMatrixSpec& spec) {
  const double fy = frac(spec.y());
  const auto [s, eta] = split_value(spec.m_wind * fy);
  return parity_sign(s) * (1.0 - 2.0 * eta);
}

QCheck q_check(const QMatrixSpec& spec, double cluster_tol) {
  const MatrixXcd q = q_matrix(spec);
  Eigen::ComplexEigenSolver<MatrixXcd> es(q, false);
  if (es.info() != Eigen::Success) throw NumericalError("Q matrix eigensolver failed");
  const VectorXcd& ev = es.eigenvalues();
  const int two_m = 2 * spec.m_wind;
  cplx tr = 0.0;
  int close = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    tr += std::pow(ev[i], spec.m_wind);
    double best = 1e300;
    for (int beta = 0; beta < two_m; ++beta)
      best = std::min(best, std::abs(ev[i] - std::polar(1.0, 2.0 * kPi * beta / two_m)));
    if (best < cluster_tol) ++close;
  }
  QCheck out;
  out.trace_real = tr.real() / spec.r_dim;
  out.prediction = q_trace_prediction(spec);
  out.clustering_fraction = static_cast<double>(close) / spec.r_dim;
  return out;
}

LengthSpectrum length_spectrum(const std::vector<double>& k_list, const Geometry& g,
                               const std::vector<double>& l_grid, double k_min, double k_max) {
  if (k_list.empty()) throw DomainError("length spectrum needs a non-empty k list");
  if (l_grid.empty()) throw DomainError("length grid is empty");
  if (k_min == 0.0 && k_max == 0.0) {
    const auto [lo, hi] = std::minmax_element(k_list.begin(), k_list.end());
    k_min = *lo;
    k_max = *hi;
  }
  if (!(k_max > k_min)) throw DomainError("length spectrum needs k_max > k_min");

  LengthSpectrum out;
  out.l = l_grid;
  out.k_min = k_min;
  out.k_max = k_max;
  double min_gap = 1e300;
  for (std::size_t i = 1; i < l_grid.size(); ++i)
    min_gap = std::min(min_gap, std::abs(l_grid[i] - l_grid[i - 1]));
  out.window_too_short = l_grid.size() > 1 && (k_max - k_min) < 2.0 * kPi / min_gap;

  // Smooth part by composite Simpson, resolving the fastest oscillation with >= 16 points.
  const double l_top = *std::max_element(l_grid.begin(), l_grid.end());
  const double span = k_max - k_min;
  int n_int = static_cast<int>(std::ceil(span * std::max(l_top, 1.0) * 16.0 / (2.0 * kPi)));
  n_int = std::max(n_int, 2000);
  if (n_int % 2 == 1) ++n_int;
  const double hk = span / n_int;
  std::vector<double> kq(n_int + 1), wq(n_int + 1);
  for (int i = 0; i <= n_int; ++i) {
    const double k = k_min + i * hk;
    const double simpson = (i == 0 || i == n_int) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    kq[i] = k;
    wq[i] = simpson * hk / 3.0 * hann(k, k_min, k_max) * g.area() * k / (2.0 * kPi);
  }

  out.weight.resize(l_grid.size());
  for (std::size_t il = 0; il < l_grid.size(); ++il) {
    const double len = l_grid[il];
    cplx sum = 0.0;
    for (double k : k_list) {
      const double w = hann(k, k_min, k_max);
      if (w > 0.0) sum += w * std::polar(1.0, k * len);
    }
    cplx smooth = 0.0;
    for (int i = 0; i <= n_int; ++i) smooth += wq[i] * std::polar(1.0, kq[i] * len);
    out.weight[il] = std::abs(sum - smooth);
  }
  return out;
}

std::vector<Peak> find_peaks(const LengthSpectrum& spectrum, double min_weight) {
  std::vector<Peak> peaks;
  const auto& w = spectrum.weight;
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    if (w[i] > w[i - 1] && w[i] >= w[i + 1] && w[i] > min_weight)
      peaks.push_back({spectrum.l[i], w[i], i});
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.weight > b.weight; });
  return peaks;
}

}  // namespace barrier
