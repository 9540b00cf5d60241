#include "barrier/transfer_operator.hpp"

#include "barrier/errors.hpp"
#include "barrier/rng.hpp"
#include "barrier/wiener_hopf.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace barrier {

namespace {
constexpr double kPi = std::numbers::pi;

double sign_of_parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }  // (-1)^n
}  // namespace

std::vector<double> ModeSet::x_propagating() const {
  std::vector<double> out(n_prop);
  for (int i = 0; i < n_prop; ++i) out[i] = x[i].real();
  return out;
}

int propagating_count(double k, double b) {
  if (!(k > 0.0) || !(b > 0.0)) throw DomainError("need k > 0 and b > 0");
  int n = static_cast<int>(std::floor(2.0 * b * k / kPi));
  // guard both neighbours against rounding in the floor
  for (int c = std::max(1, n - 1); c <= n + 1; ++c) channel_momentum(k, b, c);
  while (n >= 1 && kPi * n / (2.0 * b) >= k) --n;
  while (kPi * (n + 1) / (2.0 * b) < k) ++n;
  return n;
}

ModeSet build_mode_set(double k, double b, const ModeOptions& opt) {
  if (opt.n_evanescent < 0) throw DomainError("n_evanescent must be >= 0");
  ModeSet m;
  m.k = k;
  m.b = b;
  m.n_prop = propagating_count(k, b);
  const int total = m.n_prop + opt.n_evanescent;
  m.p.resize(total);
  m.x.resize(total);
  for (int n = 1; n <= total; ++n) {
    m.p[n - 1] = channel_momentum(k, b, n);
    m.x[n - 1] = (n % 2 == 1 ? b : -b) * m.p[n - 1];
  }
  const auto xp = m.x_propagating();
  check_intertwining(xp);
  m.l_mod2 = l_mod2_from_x(xp);
  if (opt.amplitudes) {
    const KPlusEvaluator kp(k, b, opt.n_terms, true);
    m.l.resize(total);
    for (int n = 1; n <= total; ++n) {
      const cplx p = m.p[n - 1];
      const cplx root = std::sqrt(b * p);
      const int j = (n + 1) / 2;
      const double sgn = sign_of_parity(j);
      if (n % 2 == 1)
        m.l[n - 1] = sgn / (root * kp(p));
      else
        m.l[n - 1] = sgn * kPi * j * kp(p) / root;
    }
  }
  return m;
}

ModeSet build_mode_set(double k, const Geometry& g, int n_evanescent) {
  g.validate();
  ModeOptions opt;
  opt.n_evanescent = n_evanescent;
  return build_mode_set(k, g.b, opt);
}

void check_intertwining(const std::vector<double>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double expected = (i % 2 == 0) ? 1.0 : -1.0;
    if (!(x[i] * expected > 0.0)) {
      std::ostringstream os;
      os << "intertwining violated: x_" << (i + 1) << " = " << x[i] << " has the wrong sign";
      throw DomainError(os.str());
    }
    if (i > 0 && !(std::abs(x[i]) < std::abs(x[i - 1]))) {
      std::ostringstream os;
      os << "intertwining violated: |x_" << (i + 1) << "| >= |x_" << i << "|";
      throw DomainError(os.str());
    }
  }
}

std::vector<double> l_mod2_from_x(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    double log_mag = std::log(2.0 * std::abs(x[m]));
    bool negative = x[m] < 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == m) continue;
      const double r = (x[m] + x[j]) / (x[m] - x[j]);
      log_mag += std::log(std::abs(r));
      if (r < 0.0) negative = !negative;
    }
    if (negative || !std::isfinite(log_mag)) {
      std::ostringstream os;
      os << "|L_" << (m + 1) << "|^2 is not positive; coordinates violate intertwining";
      throw NumericalError(os.str());
    }
    out[m] = std::exp(log_mag);
  }
  return out;
}

MatrixXd s_matrix_from_x(const std::vector<double>& x) {
  check_intertwining(x);
  const auto l2 = l_mod2_from_x(x);
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double den = x[i] + x[j];
      if (den == 0.0) throw NumericalError("x_n + x_m = 0 in S matrix");
      s(i, j) = std::sqrt(l2[i] * l2[j]) / den;
    }
  return s;
}

MatrixXd s_matrix_exact(const ModeSet& modes) {
  const auto x = modes.x_propagating();
  const Eigen::Index n = modes.n_prop;
  MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      s(i, j) = std::sqrt(modes.l_mod2[i] * modes.l_mod2[j]) / (x[i] + x[j]);
  return s;
}

MatrixXcd s_matrix_physical(const ModeSet& modes) {
  if (modes.l.size() != modes.p.size())
    throw DomainError("s_matrix_physical needs a mode set built with amplitudes");
  const Eigen::Index n = modes.size();
  MatrixXcd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) s(i, j) = modes.l[i] * modes.l[j] / (modes.x[i] + modes.x[j]);
  return s;
}

std::vector<cplx> transfer_phases(const ModeSet& modes, const Geometry& g) {
  std::vector<cplx> out(modes.size());
  for (int n = 1; n <= modes.size(); ++n) {
    const double h = (n % 2 == 1) ? g.h1 : g.h2;
    out[n - 1] = std::exp(cplx(0.0, 2.0 * h) * modes.p[n - 1]);
  }
  return out;
}

UnitarySample b_matrix(const ModeSet& modes, const Geometry& g) {
  g.validate();
  const MatrixXd s = s_matrix_exact(modes);
  UnitarySample out;
  out.label = "B";
  out.matrix.resize(modes.n_prop, modes.n_prop);
  out.phases.resize(modes.n_prop);
  for (int n = 1; n <= modes.n_prop; ++n) {
    const double h = (n % 2 == 1) ? g.h1 : g.h2;
    const double phi = 2.0 * h * modes.p[n - 1].real();
    out.phases[n - 1] = std::fmod(phi, 2.0 * kPi);
    out.matrix.row(n - 1) = std::polar(1.0, phi) * s.row(n - 1).cast<cplx>();
  }
  return out;
}

UnitarySample b_matrix_random(const std::vector<double>& x, std::uint64_t seed) {
  const MatrixXd s = s_matrix_from_x(x);
  Rng rng(seed);
  UnitarySample out;
  out.label = "B-random";
  out.seed = seed;
  const Eigen::Index n = s.rows();
  out.matrix.resize(n, n);
  out.phases.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.phases[i] = rng.uniform(0.0, 2.0 * kPi);
    out.matrix.row(i) = std::polar(1.0, out.phases[i]) * s.row(i).cast<cplx>();
  }
  return out;
}

std::vector<double> channel_coordinates(int dim, double b) {
  if (dim < 1) throw DomainError("dim must be >= 1");
  const double k = kPi * (dim + 0.5) / (2.0 * b);
  std::vector<double> x(dim);
  for (int n = 1; n <= dim; ++n)
    x[n - 1] = (n % 2 == 1 ? b : -b) * channel_momentum(k, b, n).real();
  return x;
}

double s_paraxial_pole(long j, long k) {
  const double sgn = ((j + k) % 2 == 0) ? 1.0 : -1.0;
  return sgn / (kPi * (static_cast<double>(k - j) + 0.5));
}

double s_paraxial_two_term(int n, int m) {
  const double sgn = ((n + m) % 2 == 0) ? 1.0 : -1.0;
  return sgn / kPi * (1.0 / (m - n + 0.5) + 1.0 / (m + n - 0.5));
}

MatrixXd s_paraxial(int half_dim) {
  if (half_dim < 1) throw DomainError("half_dim must be >= 1");
  MatrixXd out = MatrixXd::Zero(2 * half_dim, 2 * half_dim);
  for (int j = 1; j <= half_dim; ++j)
    for (int k = 1; k <= half_dim; ++k) {
      const double v = s_paraxial_pole(j, k);
      out(j - 1, half_dim + k - 1) = v;
      out(half_dim + k - 1, j - 1) = v;
    }
  return out;
}

}  // namespace barrier
