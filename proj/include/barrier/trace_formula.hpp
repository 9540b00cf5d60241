#pragma once

#include "barrier/types.hpp"

#include <vector>

namespace barrier {

// How repetitions r > 1 of a primitive family are weighted.
enum class RepetitionRule {
  ReducedPair,  // amplitude of winding rN, i.e. (-1)^K (1-2 eta) with K, eta from rN h1/a
  ChannelPower  // each sub-family sign raised to the r-th power: even r gives the full 4ab
};

struct PeriodicOrbit {
  int m_wind = 0;
  int n_wind = 0;
  double length = 0.0;
  int k_int = 0;
  double eta = 0.0;
  double amplitude = 0.0;
  int repetition = 1;
  bool boundary = false;  // N = 0 or M = 0 family
};

// Floor and fractional part of n h1/a.
std::pair<int, double> winding_split(const Geometry& g, int n_wind);

// (-1)^K (1 - 2 eta) 4ab, independent of M.
double orbit_amplitude(const Geometry& g, int n_wind);

// Primitive families: co-prime (M >= 1, N >= 1) plus boundary families (1,0) and (0,1),
// sorted by length. With max_repetition > 1, repetitions with length <= l_max are appended.
std::vector<PeriodicOrbit> enumerate_orbits(const Geometry& g, double l_max, int max_repetition = 1,
                                            RepetitionRule rule = RepetitionRule::ChannelPower);

// Mean density in E = k^2: ab/(4 pi).
double weyl_density(const Geometry& g);
// Smooth counting function ab k^2/(4 pi).
double weyl_counting(const Geometry& g, double k);

// (1/4pi) sum A_p (2 pi k L_p)^{-1/2} e^{i(k L_p - pi/4)} + c.c.
double oscillating_density(const Geometry& g, const std::vector<PeriodicOrbit>& orbits, double k);

// f_0 = 1 - 2{y}, f_p = -2 sin(pi y p)/(pi p).
double f_kernel(long p, double y);
// U = (1 - f)/2 as an R x R real symmetric matrix.
MatrixXd u_matrix(int r_dim, double y);

struct QMatrixSpec {
  int r_dim = 600;
  int m_wind = 1;
  int n_wind = 1;
  double h_ratio = 0.5;  // h1/a
  double z() const { return static_cast<double>(n_wind) / m_wind; }
  double y() const { return z() * h_ratio; }
};

// Q_{mn} = e^{-2 pi i z m} f_{m-n}(y), m, n = 1..R.
MatrixXcd q_matrix(const QMatrixSpec& spec);

// (-1)^K (1 - 2 eta) with K, eta from N h1/a. DomainError if gcd(M, N) != 1.
double q_trace_prediction(const QMatrixSpec& spec);
// (-1)^s (1 - 2 eta) with s = floor(M {y}), eta = {M y}.
double q_trace_limit(const QMatrixSpec& spec);

struct QCheck {
  double trace_real = 0.0;        // Re (1/R) Tr Q^M
  double prediction = 0.0;
  double clustering_fraction = 0.0;  // eigenvalues within tol of a 2M-th root of unity
};
QCheck q_check(const QMatrixSpec& spec, double cluster_tol = 0.05);

struct LengthSpectrum {
  std::vector<double> l;
  std::vector<double> weight;
  double k_min = 0.0, k_max = 0.0;
  bool window_too_short = false;  // 2 pi/(k_max - k_min) exceeds the grid step
};

// |sum_j w(k_j) e^{i k_j L} - int w(k) dNbar/dk e^{i k L} dk| with a Hann window w on
// [k_min, k_max] (defaults to the span of k_list).
LengthSpectrum length_spectrum(const std::vector<double>& k_list, const Geometry& g,
                               const std::vector<double>& l_grid, double k_min = 0.0,
                               double k_max = 0.0);

struct Peak {
  double l = 0.0;
  double weight = 0.0;
  std::size_t index = 0;
};
// Local maxima of the weight table, strongest first.
std::vector<Peak> find_peaks(const LengthSpectrum& spectrum, double min_weight = 0.0);

}  // namespace barrier
