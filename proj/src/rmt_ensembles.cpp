#include "barrier/rmt_ensembles.hpp"

#include "barrier/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace barrier {

namespace {
constexpr double kPi = std::numbers::pi;

// log|prod_{k != n} sin(d_nk/2 + shift)/sin(d_nk/2)| and its sign.
std::pair<double, double> lax_weight(const std::vector<double>& theta, int n, double shift) {
  double log_mag = 0.0;
  double sign = 1.0;
  for (int k = 0; k < static_cast<int>(theta.size()); ++k) {
    if (k == n) continue;
    const double half = 0.5 * (theta[n] - theta[k]);
    const double den = std::sin(half);
    if (std::abs(den) < 1e-14) {
      std::ostringstream os;
      os << "lax matrix: coincident angles theta_" << (n + 1) << " and theta_" << (k + 1);
      throw DomainError(os.str());
    }
    const double r = std::sin(half + shift) / den;
    log_mag += std::log(std::abs(r));
    if (r < 0.0) sign = -sign;
  }
  return {log_mag, sign};
}

void require_positive(int n, const char* what) {
  if (n < 1) throw DomainError(std::string(what) + ": dimension must be >= 1");
}
}  // namespace

UnitarySample lax_matrix(const LaxConfiguration& config) {
  const int n = config.n();
  require_positive(n, "lax_matrix");
  if (static_cast<int>(config.phases.size()) != n)
    throw DomainError("lax_matrix: theta and phases differ in length");
  const double pa = kPi * config.alpha;
  std::vector<cplx> w(n), v(n);
  double first_sign = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto [lw, sw] = lax_weight(config.theta, i, pa);
    const auto [lv, sv] = lax_weight(config.theta, i, -pa);
    if (i == 0) first_sign = sw;
    // L is unitary exactly when every W^2 and V^2 carries the same sign
    if (sw != sv || sw != first_sign) {
      std::ostringstream os;
      os << "lax matrix: weight signs differ at index " << (i + 1) << " (theta outside Omega_N)";
      throw DomainError(os.str());
    }
    w[i] = std::sqrt(cplx(sw * std::exp(lw), 0.0));
    v[i] = std::sqrt(cplx(sv * std::exp(lv), 0.0));
  }
  UnitarySample out;
  out.label = "lax";
  out.phases = config.phases;
  out.matrix.resize(n, n);
  const double sa = std::sin(pa);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double den = std::sin(0.5 * (config.theta[i] - config.theta[j]) + pa);
      out.matrix(i, j) = std::polar(1.0, config.phases[i]) * w[i] * sa / den * v[j];
    }
  return out;
}

std::vector<double> uniform_phases(int n, Rng& rng) {
  std::vector<double> out(n);
  for (auto& p : out) p = rng.uniform(0.0, 2.0 * kPi);
  return out;
}

std::vector<double> sample_omega_half(int n, Rng& rng) {
  if (n < 3 || n % 2 == 0) throw DomainError("sample_omega_half: n must be odd and >= 3");
  std::vector<double> z(n, 0.0);
  for (int i = 1; i < n; ++i) z[i] = rng.uniform(0.0, kPi);
  std::sort(z.begin() + 1, z.end());
  for (int i = 1; i < n; i += 2) z[i] += kPi;  // 1-based even indices
  return z;
}

std::vector<double> sample_omega_half(int n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_omega_half(n, rng);
}

std::vector<double> sample_omega_hard_rod(int n, Rng& rng) {
  if (n < 2) throw DomainError("sample_omega_hard_rod: n must be >= 2");
  std::vector<double> u(n - 1);
  for (auto& x : u) x = rng.uniform(0.0, kPi);
  std::sort(u.begin(), u.end());
  std::vector<double> theta(n, 0.0);
  double prev = 0.0;
  for (int i = 1; i < n; ++i) {
    theta[i] = theta[i - 1] + kPi / n + (u[i - 1] - prev);
    prev = u[i - 1];
  }
  return theta;
}

std::vector<double> sample_omega_hard_rod(int n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_omega_hard_rod(n, rng);
}

MatrixXd sigma_matrix(int n) {
  if (n < 1 || n % 2 == 0) throw DomainError("sigma_matrix: n must be odd");
  MatrixXd s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = 1.0 / (n * std::cos(kPi * (i - j) / n));
  return s;
}

MatrixXd z_matrix(int n) {
  require_positive(n, "z_matrix");
  MatrixXd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = 1.0 / (n * std::sin(kPi * (j - i + 0.5) / n));
  return z;
}

MatrixXd big_z_matrix(int n0) {
  require_positive(n0, "big_z_matrix");
  MatrixXd out = MatrixXd::Zero(2 * n0, 2 * n0);
  for (int j = 0; j < n0; ++j)
    for (int k = 0; k < n0; ++k) {
      const double sgn = ((j + k) % 2 == 0) ? 1.0 : -1.0;
      const double v = sgn / (n0 * std::sin(kPi * (j - k - 0.5) / n0));
      out(j, n0 + k) = v;
      out(n0 + k, j) = v;
    }
  return out;
}

MatrixXcd apply_phases(const std::vector<double>& phases, const MatrixXd& m) {
  if (static_cast<Eigen::Index>(phases.size()) != m.rows())
    throw DomainError("apply_phases: size mismatch");
  MatrixXcd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    out.row(i) = std::polar(1.0, phases[i]) * m.row(i).cast<cplx>();
  return out;
}

MatrixXcd xi_product(const MatrixXd& z, const std::vector<double>& phi,
                     const std::vector<double>& phi_prime) {
  const MatrixXcd left = apply_phases(phi, z);
  const MatrixXcd right = apply_phases(phi_prime, z.transpose());
  return left * right;
}

UnitarySample a_matrix(int n, std::uint64_t seed) {
  Rng rng(seed);
  UnitarySample out;
  out.phases = uniform_phases(n, rng);
  out.matrix = apply_phases(out.phases, sigma_matrix(n));
  out.seed = seed;
  out.label = "A";
  return out;
}

UnitarySample c_matrix(int n0, std::uint64_t seed) {
  require_positive(n0, "c_matrix");
  Rng rng(seed);
  UnitarySample out;
  out.phases = uniform_phases(n0, rng);
  out.matrix = apply_phases(out.phases, z_matrix(n0));
  out.seed = seed;
  out.label = "c";
  return out;
}

UnitarySample big_c_matrix(int n0, std::uint64_t seed) {
  require_positive(n0, "big_c_matrix");
  Rng rng(seed);
  UnitarySample out;
  out.phases = uniform_phases(2 * n0, rng);
  out.matrix = apply_phases(out.phases, big_z_matrix(n0));
  out.seed = seed;
  out.label = "C";
  return out;
}

UnitarySample xi_matrix(int n0, std::uint64_t seed) {
  require_positive(n0, "xi_matrix");
  Rng rng(seed);
  UnitarySample out;
  out.phases = uniform_phases(n0, rng);
  const auto phi_prime = uniform_phases(n0, rng);
  out.matrix = xi_product(z_matrix(n0), out.phases, phi_prime);
  out.phases.insert(out.phases.end(), phi_prime.begin(), phi_prime.end());
  out.seed = seed;
  out.label = "xi";
  return out;
}

}  // namespace barrier
