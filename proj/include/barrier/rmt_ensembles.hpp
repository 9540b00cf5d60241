#pragma once

#include "barrier/rng.hpp"
#include "barrier/types.hpp"

#include <cstdint>
#include <vector>

namespace barrier {

struct LaxConfiguration {
  double alpha = 0.5;
  std::vector<double> theta;   // coordinates in Omega_N
  std::vector<double> phases;  // momenta in [0, 2pi)
  int n() const { return static_cast<int>(theta.size()); }
};

// L_{nm} = e^{i phi_n} W_n sin(pi alpha)/sin((theta_n - theta_m)/2 + pi alpha) V_m.
UnitarySample lax_matrix(const LaxConfiguration& config);

std::vector<double> uniform_phases(int n, Rng& rng);

// alpha = 1/2 region: n-1 sorted uniform points in (0, pi) after a leading 0,
// entries with even (1-based) index shifted by pi.
std::vector<double> sample_omega_half(int n, Rng& rng);
std::vector<double> sample_omega_half(int n, std::uint64_t seed);

// alpha = 1/(2n) region: theta_1 = 0, consecutive circular gaps pi/n + a uniform partition of pi.
std::vector<double> sample_omega_hard_rod(int n, Rng& rng);
std::vector<double> sample_omega_hard_rod(int n, std::uint64_t seed);

// Sigma_{nm} = 1/(n cos(pi (n-m)/n)), n odd.
MatrixXd sigma_matrix(int n);
// z_{nm} = 1/(n sin(pi (m - n + 1/2)/n)).
MatrixXd z_matrix(int n);
// [[0, z], [z^T, 0]] with z_{jk} = (-1)^{j+k}/(n0 sin(pi (j - k - 1/2)/n0)).
MatrixXd big_z_matrix(int n0);

// diag(e^{i phases}) * m
MatrixXcd apply_phases(const std::vector<double>& phases, const MatrixXd& m);
// xi_{nm} = sum_k e^{i phi_n} z_{nk} e^{i phi'_k} z_{mk}
MatrixXcd xi_product(const MatrixXd& z, const std::vector<double>& phi,
                     const std::vector<double>& phi_prime);

UnitarySample a_matrix(int n, std::uint64_t seed);
UnitarySample c_matrix(int n0, std::uint64_t seed);
UnitarySample big_c_matrix(int n0, std::uint64_t seed);
// phases holds phi followed by phi'.
UnitarySample xi_matrix(int n0, std::uint64_t seed);

}  // namespace barrier
