#include "barrier/spectral_statistics.hpp"

#include "barrier/errors.hpp"
#include "barrier/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace barrier {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

EigenphaseSpectrum EigenphaseSpectrum::from_phases(std::vector<double> phases, std::string source) {
  for (auto& p : phases) p = wrap_phase(p);
  std::sort(phases.begin(), phases.end());
  return {std::move(phases), std::move(source)};
}

SpacingSample order_gaps(const EigenphaseSpectrum& spectrum, int order) {
  const int dim = spectrum.dim();
  if (dim < 2) throw DomainError("unfold: need at least 2 levels");
  if (order < 0 || (order > 0 && order + 1 >= dim))
    throw DomainError("order gaps: need 0 <= order < dim - 1");
  const double scale = dim / kTwoPi;
  SpacingSample out;
  out.order = order;
  out.s.resize(dim);
  const int step = order + 1;
  for (int i = 0; i < dim; ++i) {
    const int j = i + step;
    double gap = j < dim ? spectrum.phases[j] - spectrum.phases[i]
                         : spectrum.phases[j - dim] + kTwoPi - spectrum.phases[i];
    out.s[i] = gap * scale;
    if (gap == 0.0) ++out.zero_gaps;
  }
  return out;
}

SpacingSample unfold(const EigenphaseSpectrum& spectrum) { return order_gaps(spectrum, 0); }

SpacingSample unfold_levels(const std::vector<double>& unfolded_levels, int order) {
  if (order < 0) throw DomainError("unfold_levels: order must be >= 0");
  SpacingSample out;
  out.order = order;
  const std::size_t step = order + 1;
  for (std::size_t i = 0; i + step < unfolded_levels.size(); ++i) {
    const double g = unfolded_levels[i + step] - unfolded_levels[i];
    out.s.push_back(g);
    if (g == 0.0) ++out.zero_gaps;
  }
  return out;
}

PnHistogram::PnHistogram(int order, int bins, double s_max)
    : order_(order), s_max_(s_max), counts_(bins, 0) {
  if (order < 0) throw DomainError("histogram: order must be >= 0");
  if (bins < 1) throw DomainError("histogram: bins must be >= 1");
  if (!(s_max > 0.0)) throw DomainError("histogram: s_max must be > 0");
}

void PnHistogram::add(const EigenphaseSpectrum& spectrum) { add(order_gaps(spectrum, order_)); }

void PnHistogram::add(const SpacingSample& sample) {
  const int bins = static_cast<int>(counts_.size());
  for (double s : sample.s) {
    ++total_;
    if (s < 0.0 || s >= s_max_) continue;
    const int b = std::min(bins - 1, static_cast<int>(s / s_max_ * bins));
    ++counts_[b];
  }
}

void PnHistogram::merge(const PnHistogram& other) {
  if (other.counts_.size() != counts_.size() || other.s_max_ != s_max_ || other.order_ != order_)
    throw DomainError("histogram merge: incompatible binning");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

DensityTable PnHistogram::table() const {
  DensityTable t;
  const int bins = static_cast<int>(counts_.size());
  t.lo = 0.0;
  t.hi = s_max_;
  t.total = total_;
  t.counts = counts_;
  const double w = s_max_ / bins;
  t.x.resize(bins);
  t.density.resize(bins);
  for (int i = 0; i < bins; ++i) {
    t.x[i] = (i + 0.5) * w;
    t.density[i] = total_ > 0 ? counts_[i] / (w * total_) : 0.0;
  }
  t.sparse = total_ < 10L * bins;
  return t;
}

DensityTable p_n_histogram(const std::vector<EigenphaseSpectrum>& spectra, int order, int bins,
                           double s_max) {
  PnHistogram h(order, bins, s_max);
  for (const auto& s : spectra) h.add(s);
  return h.table();
}

double sup_norm_vs_law(const DensityTable& table, const SpacingLaw& law) {
  const double w = table.width();
  double worst = 0.0;
  for (std::size_t i = 0; i < table.x.size(); ++i) {
    const double lo = table.lo + i * w;
    const double ref = spacing_law_bin_average(law, lo, lo + w);
    worst = std::max(worst, std::abs(table.density[i] - ref));
  }
  return worst;
}

R2Table r2_estimate(const std::vector<EigenphaseSpectrum>& spectra, int bins, double s_max,
                    int order_cap) {
  if (spectra.empty()) throw DomainError("r2_estimate: no spectra");
  R2Table out;
  std::vector<double> sum(bins, 0.0);
  DensityTable last;
  int order = 0;
  for (; order <= order_cap; ++order) {
    PnHistogram h(order, bins, s_max);
    double min_gap = s_max;
    bool any = false;
    for (const auto& sp : spectra) {
      if (order + 1 >= sp.dim()) continue;
      const auto g = order_gaps(sp, order);
      h.add(g);
      any = true;
      min_gap = std::min(min_gap, *std::min_element(g.s.begin(), g.s.end()));
    }
    if (!any) break;
    last = h.table();
    // P_n estimates use the per-order total; every order has the same count per spectrum
    for (int i = 0; i < bins; ++i) sum[i] += last.density[i];
    if (min_gap >= s_max) break;
  }
  out.max_order = std::min(order, order_cap);
  out.truncated = order > order_cap;
  out.table = last;
  out.table.density = sum;
  return out;
}

FormFactorTable form_factor(const DensityTable& r2, const std::vector<double>& tau,
                            double taper_start) {
  FormFactorTable out;
  out.tau = tau;
  out.taper_start = taper_start;
  const double w = r2.width();
  const double s_max = r2.hi;
  const double t0 = taper_start * s_max;
  for (double t : tau) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r2.x.size(); ++i) {
      const double s = r2.x[i];
      double win = 1.0;
      if (s > t0 && s_max > t0) win = 0.5 * (1.0 + std::cos(std::numbers::pi * (s - t0) / (s_max - t0)));
      acc += win * (r2.density[i] - 1.0) * std::cos(kTwoPi * t * s) * w;
    }
    out.k.push_back(1.0 + 2.0 * acc);
  }
  return out;
}

NumberVarianceTable number_variance(const std::vector<EigenphaseSpectrum>& spectra,
                                    const std::vector<double>& l_grid) {
  if (spectra.empty()) throw DomainError("number_variance: no spectra");
  int min_dim = spectra.front().dim();
  for (const auto& s : spectra) min_dim = std::min(min_dim, s.dim());
  for (double l : l_grid)
    if (!(l > 0.0) || l > min_dim / 4.0)
      throw DomainError("number_variance: window length must lie in (0, dim/4]");
  NumberVarianceTable out;
  out.l = l_grid;
  out.variance.assign(l_grid.size(), 0.0);
  std::vector<double> ext;
  for (const auto& sp : spectra) {
    const int dim = sp.dim();
    const double scale = dim / kTwoPi;
    ext.resize(2 * dim);
    for (int i = 0; i < dim; ++i) {
      ext[i] = sp.phases[i] * scale;
      ext[i + dim] = ext[i] + dim;
    }
    for (int j = 0; j < dim; ++j) {
      const double start = j;
      const auto first = std::lower_bound(ext.begin(), ext.end(), start);
      for (std::size_t li = 0; li < l_grid.size(); ++li) {
        const auto last = std::lower_bound(first, ext.end(), start + l_grid[li]);
        const double n = static_cast<double>(last - first);
        out.variance[li] += (n - l_grid[li]) * (n - l_grid[li]);
      }
    }
    out.windows += dim;
  }
  for (auto& v : out.variance) v /= out.windows;
  return out;
}

CompressibilityFit compressibility(const NumberVarianceTable& table, double l_min, double l_max) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < table.l.size(); ++i)
    if (table.l[i] >= l_min && table.l[i] <= l_max) {
      xs.push_back(table.l[i]);
      ys.push_back(table.variance[i]);
    }
  if (xs.size() < 2) throw DomainError("compressibility: fewer than two points in the fit window");
  const double n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  CompressibilityFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0, mean_y = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += r * r;
  }
  fit.rel_residual = std::sqrt(rss / n) / std::max(std::abs(mean_y), 1e-300);
  fit.nonlinear_warning = fit.rel_residual > 0.05;
  return fit;
}

}  // namespace barrier
