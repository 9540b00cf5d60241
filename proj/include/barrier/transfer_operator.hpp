#pragma once

#include "barrier/types.hpp"

#include <cstdint>
#include <vector>

namespace barrier {

// Channels are numbered n = 1, 2, ...; entry n-1 of every vector belongs to channel n.
// Odd channels live in the Neumann-Dirichlet slab, even ones in the Dirichlet-Dirichlet slab.
struct ModeSet {
  double k = 0.0;
  double b = 0.0;
  int n_prop = 0;
  std::vector<cplx> p;         // channel momenta, propagating then evanescent
  std::vector<cplx> x;         // x_{2m-1} = b p_{2m-1}, x_{2m} = -b p_{2m}
  std::vector<double> l_mod2;  // |L_n|^2 from the finite product, propagating only
  std::vector<cplx> l;         // complex L_n from K+, all channels; empty if not requested

  int size() const { return static_cast<int>(p.size()); }
  std::vector<double> x_propagating() const;
};

struct ModeOptions {
  int n_evanescent = 0;
  bool amplitudes = true;  // compute complex L_n (costs one K+ product per channel)
  int n_terms = 0;         // K+ truncation, 0 = default
};

// #{n >= 1 : pi n/(2b) < k}; ThresholdError if some pi n/(2b) == k.
int propagating_count(double k, double b);

ModeSet build_mode_set(double k, double b, const ModeOptions& opt);
ModeSet build_mode_set(double k, const Geometry& g, int n_evanescent = 0);

// Signs alternate starting with +, moduli strictly decreasing. Throws DomainError otherwise.
void check_intertwining(const std::vector<double>& x);

// |L_m|^2 = 2 x_m prod_{j != m} (x_m + x_j)/(x_m - x_j), evaluated in log space.
std::vector<double> l_mod2_from_x(const std::vector<double>& x);

// Phase-stripped S: |L_n||L_m|/(x_n + x_m).
MatrixXd s_matrix_from_x(const std::vector<double>& x);
MatrixXd s_matrix_exact(const ModeSet& modes);

// Physical S_{nm} = L_n L_m/(x_n + x_m) over every channel of the set (needs amplitudes).
MatrixXcd s_matrix_physical(const ModeSet& modes);

// phi_{2n-1} = 2 h1 p_{2n-1}, phi_{2n} = 2 h2 p_{2n}; complex for evanescent channels.
std::vector<cplx> transfer_phases(const ModeSet& modes, const Geometry& g);

// B = diag(e^{i phi}) S~ on the propagating block.
UnitarySample b_matrix(const ModeSet& modes, const Geometry& g);

// B = diag(e^{i phi}) S~(x), phi i.i.d. uniform on [0, 2pi).
UnitarySample b_matrix_random(const std::vector<double>& x, std::uint64_t seed);

// x_n = (-1)^{n+1} b p_n for the first dim channels at a wavenumber placed midway
// between thresholds dim and dim+1.
std::vector<double> channel_coordinates(int dim, double b = 1.0);

// Pole-only paraxial kernel s_{jk} = (-1)^{j+k}/(pi (k - j + 1/2)); any integers.
double s_paraxial_pole(long j, long k);
// Two-term paraxial element (-1)^{n+m}/pi (1/(m-n+1/2) + 1/(m+n-1/2)).
double s_paraxial_two_term(int n, int m);
// [[0, s], [s^T, 0]] with j, k = 1..half_dim.
MatrixXd s_paraxial(int half_dim);

}  // namespace barrier
