#pragma once

#include "barrier/spacing_laws.hpp"

#include <string>
#include <vector>

namespace barrier {

struct EigenphaseSpectrum {
  std::vector<double> phases;  // sorted, [0, 2pi)
  std::string source;

  int dim() const { return static_cast<int>(phases.size()); }
  // Wraps into [0, 2pi) and sorts.
  static EigenphaseSpectrum from_phases(std::vector<double> phases, std::string source = {});
};

struct SpacingSample {
  std::vector<double> s;  // unfolded gaps
  int order = 0;
  int zero_gaps = 0;  // duplicate phases
};

// Circular nearest-neighbour gaps times dim/(2pi); mean exactly 1.
SpacingSample unfold(const EigenphaseSpectrum& spectrum);

// Circular gaps between levels i and i+n+1, unfolded; mean n+1.
SpacingSample order_gaps(const EigenphaseSpectrum& spectrum, int order);

// Unfolded spacings of an ordered real spectrum with a unit-density smooth part
// already removed (levels are N_smooth(E_i)). Not circular.
SpacingSample unfold_levels(const std::vector<double>& unfolded_levels, int order = 0);

struct DensityTable {
  std::vector<double> x;        // bin centres
  std::vector<double> density;  // normalised by all samples, including overflow
  std::vector<long> counts;
  double lo = 0.0, hi = 0.0;
  long total = 0;
  bool sparse = false;  // fewer than 10 samples per bin on average
  double width() const { return x.empty() ? 0.0 : (hi - lo) / x.size(); }
};

// Streaming histogram of order-n gaps; merge() is commutative.
class PnHistogram {
 public:
  PnHistogram(int order, int bins, double s_max);

  void add(const EigenphaseSpectrum& spectrum);
  void add(const SpacingSample& sample);
  void merge(const PnHistogram& other);
  DensityTable table() const;
  int order() const { return order_; }

 private:
  int order_;
  double s_max_;
  std::vector<long> counts_;
  long total_ = 0;
};

DensityTable p_n_histogram(const std::vector<EigenphaseSpectrum>& spectra, int order, int bins,
                           double s_max);

// Largest |empirical - reference bin average| over the bins.
double sup_norm_vs_law(const DensityTable& table, const SpacingLaw& law);

struct R2Table {
  DensityTable table;
  int max_order = 0;
  bool truncated = false;  // order cap hit before all pairs within s_max were counted
};

// R2(s) = sum_n P_n(s), orders added until no order-n gap falls below s_max.
R2Table r2_estimate(const std::vector<EigenphaseSpectrum>& spectra, int bins, double s_max,
                    int order_cap = 400);

struct FormFactorTable {
  std::vector<double> tau;
  std::vector<double> k;
  double taper_start = 0.75;  // Tukey taper on [taper_start * s_max, s_max]
};

// K(tau) = 1 + 2 int_0^smax w(s) (R2(s) - 1) cos(2 pi tau s) ds, midpoint rule on the table.
FormFactorTable form_factor(const DensityTable& r2, const std::vector<double>& tau,
                            double taper_start = 0.75);

struct NumberVarianceTable {
  std::vector<double> l;
  std::vector<double> variance;
  long windows = 0;
};

// Sigma^2(L) = <(n(L) - L)^2>, window starts on a uniform grid of dim points per spectrum.
NumberVarianceTable number_variance(const std::vector<EigenphaseSpectrum>& spectra,
                                    const std::vector<double>& l_grid);

struct CompressibilityFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rel_residual = 0.0;
  bool nonlinear_warning = false;
};

CompressibilityFit compressibility(const NumberVarianceTable& table, double l_min = 5.0,
                                   double l_max = 20.0);

}  // namespace barrier
