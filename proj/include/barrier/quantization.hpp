#pragma once

#include "barrier/types.hpp"

#include <vector>

namespace barrier {

struct SecularOptions {
  double dk = 0.05;          // largest step; the scan adapts below it
  int n_evanescent = -1;     // -1 = default_evanescent_count at the top of each interval
  int n_terms = 0;           // K+ truncation, 0 = default
  double phase_tol = 1e-8;   // target |eigenphase - pi| at a root
  bool swap_phase_roles = false;  // odd channels take h2, even channels h1
};

// B_eff = Phi_P (S_PP - S_PE (1 + Phi_E S_EE)^{-1} Phi_E S_EP) with the physical S.
MatrixXcd b_effective(const Geometry& g, double k, int n_evanescent, int n_terms = 0,
                      bool swap_phase_roles = false);

// Smallest count >= 4 such that the slowest decaying dropped channel, |exp(2 i h p)|, is
// below 1e-12; at most 60.
int default_evanescent_count(const Geometry& g, double k);

struct SecularRoot {
  double k = 0.0;
  int multiplicity = 1;
  double residual = 0.0;        // |arg(-lambda)| at k
  bool near_threshold = false;  // within 10 dk of a channel threshold
  bool collision = false;       // unresolved degenerate crossing, see k_lo/k_hi
  double k_lo = 0.0, k_hi = 0.0;
};

struct SecularScan {
  Geometry geometry;
  double k_min = 0.0, k_max = 0.0, dk = 0.0;
  int n_evanescent = 0;  // largest count used
  std::vector<SecularRoot> roots;
  long evaluations = 0;

  std::size_t level_count() const;  // roots weighted by multiplicity
  std::vector<double> levels() const;  // k values repeated by multiplicity
};

SecularScan secular_scan(const Geometry& g, double k_min, double k_max,
                         const SecularOptions& opt = {});

struct Staircase {
  std::vector<double> k;
  std::vector<double> count;   // N(k) right after each level
  std::vector<double> smooth;  // ab k^2/(4 pi)
  std::vector<double> fluctuation;
};

// Roots must be sorted; levels with multiplicity m raise N by m.
Staircase spectrum_to_counting(const std::vector<double>& levels, const Geometry& g);

// Closed-form Dirichlet rectangle levels pi sqrt(m^2/a^2 + n^2/b^2), m, n >= 1, sorted.
std::vector<double> rectangle_levels(double a, double b, int count);

}  // namespace barrier
