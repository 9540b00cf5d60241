#include "barrier/quantization.hpp"

#include "barrier/errors.hpp"
#include "barrier/trace_formula.hpp"
#include "barrier/transfer_operator.hpp"
#include "barrier/wiener_hopf.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace barrier {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr int kMaxEvanescent = 60;
constexpr double kBackSlack = 1e-3;

double phase_height(const Geometry& g, int n, bool swap) {
  const bool odd = (n % 2 == 1);
  return (odd != swap) ? g.h1 : g.h2;
}

struct Snapshot {
  double k = 0.0;
  std::vector<double> phases;  // sorted, [0, 2 pi)
  VectorXcd eig;
};

class Tracker {
 public:
  Tracker(const Geometry& g, const SecularOptions& opt, int n_ev) : g_(g), opt_(opt), n_ev_(n_ev) {}

  Snapshot at(double k) {
    ++evaluations;
    Snapshot s;
    s.k = k;
    const MatrixXcd b = b_effective(g_, k, n_ev_, opt_.n_terms, opt_.swap_phase_roles);
    Eigen::ComplexEigenSolver<MatrixXcd> es(b, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed in secular scan");
    s.eig = es.eigenvalues();
    s.phases.resize(s.eig.size());
    for (Eigen::Index i = 0; i < s.eig.size(); ++i) {
      double t = std::arg(s.eig[i]);
      if (t < 0.0) t += kTwoPi;
      if (t >= kTwoPi) t -= kTwoPi;
      s.phases[i] = t;
    }
    std::sort(s.phases.begin(), s.phases.end());
    return s;
  }

  // arg(-lambda) of the eigenvalue closest to -1; negative below pi, positive above.
  double offset(double k) {
    const Snapshot s = at(k);
    return nearest_offset(s);
  }

  static double nearest_offset(const Snapshot& s) {
    double best = 1e300, off = 0.0;
    for (Eigen::Index i = 0; i < s.eig.size(); ++i) {
      const double d = std::abs(s.eig[i] + 1.0);
      if (d < best) {
        best = d;
        off = std::arg(-s.eig[i]);
      }
    }
    return off;
  }

  long evaluations = 0;

 private:
  Geometry g_;
  SecularOptions opt_;
  int n_ev_;
};

struct Step {
  double total = 0.0;              // sum of forward advances
  std::vector<double> advance;     // advance of old phase i
  std::vector<int> crossing;       // old indices crossing pi
};

// Pair sorted phases a_i with b_{i+s}; the shift with the least total forward advance wins.
Step match(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  Step st;
  if (n == 0 || b.size() != n) return st;
  // Phases only advance with k, but a barely moving phase may jitter backwards by rounding.
  auto fwd = [](double from, double to) {
    double d = to - from;
    if (d < -kBackSlack) d += kTwoPi;
    if (d >= kTwoPi - kBackSlack) d -= kTwoPi;
    return d;
  };
  double best = 1e300;
  std::size_t best_s = 0;
  for (std::size_t s = 0; s < n; ++s) {
    double tot = 0.0;
    for (std::size_t i = 0; i < n && tot < best; ++i) tot += fwd(a[i], b[(i + s) % n]);
    if (tot < best) {
      best = tot;
      best_s = s;
    }
  }
  st.total = best;
  st.advance.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    st.advance[i] = fwd(a[i], b[(i + best_s) % n]);
    if (a[i] < kPi && a[i] + st.advance[i] >= kPi && st.advance[i] > 0.0) st.crossing.push_back(static_cast<int>(i));
  }
  return st;
}

class IntervalScanner {
 public:
  IntervalScanner(Tracker& tr, const SecularOptions& opt) : tr_(tr), opt_(opt) {}

  void run(double lo, double hi, std::vector<SecularRoot>& out) {
    Snapshot cur = tr_.at(lo);
    double h = std::max(1e-9 * hi, (hi - lo) * 1e-6);
    double rate = -1.0;  // advance per unit k from the previous accepted step
    const double target = 1.5;
    while (cur.k < hi) {
      const double min_step = 1e-13 * hi;
      double step = std::min({h, opt_.dk, hi - cur.k});
      if (rate > 0.0) step = std::min(step, target / rate);
      step = std::max(step, std::min(min_step, hi - cur.k));
      for (;;) {
        const double kn = (hi - cur.k - step < 1e-12 * hi) ? hi : cur.k + step;
        Snapshot nxt = tr_.at(kn);
        const Step st = match(cur.phases, nxt.phases);
        const double predicted = rate > 0.0 ? rate * (kn - cur.k) : st.total;
        const bool consistent = st.total <= kPi && st.total >= 0.3 * predicted &&
                                st.total <= 3.0 * predicted + 1e-3;
        if (!consistent && 0.5 * (kn - cur.k) >= min_step) {
          step = 0.5 * (kn - cur.k);
          continue;
        }
        if (!st.crossing.empty()) resolve(cur, nxt, st.crossing.size(), out, 0);
        rate = std::max(st.total, 0.0) / (kn - cur.k);
        h = 2.0 * (kn - cur.k);
        cur = std::move(nxt);
        break;
      }
    }
  }

 private:
  void resolve(const Snapshot& a, const Snapshot& b, std::size_t count, std::vector<SecularRoot>& out,
               int depth) {
    const double w = b.k - a.k;
    const Step st = match(a.phases, b.phases);
    double max_adv = 0.0;
    for (int i : st.crossing) max_adv = std::max(max_adv, st.advance[i]);
    if (count == 1 && max_adv < 0.05) {
      out.push_back(refine(a, b));
      return;
    }
    if (depth > 60 || w < 1e-13 * b.k) {
      SecularRoot r;
      r.k = 0.5 * (a.k + b.k);
      r.multiplicity = static_cast<int>(count);
      r.collision = count > 1;
      r.k_lo = a.k;
      r.k_hi = b.k;
      r.residual = std::abs(Tracker::nearest_offset(tr_.at(r.k)));
      out.push_back(r);
      return;
    }
    const Snapshot m = tr_.at(0.5 * (a.k + b.k));
    const Step left = match(a.phases, m.phases);
    const Step right = match(m.phases, b.phases);
    if (!left.crossing.empty()) resolve(a, m, left.crossing.size(), out, depth + 1);
    if (!right.crossing.empty()) resolve(m, b, right.crossing.size(), out, depth + 1);
  }

  SecularRoot refine(Snapshot a, Snapshot b) {
    SecularRoot r;
    r.k_lo = a.k;
    r.k_hi = b.k;
    r.k = 0.5 * (a.k + b.k);
    r.residual = 1e300;
    for (int it = 0; it < 60; ++it) {
      const double fa = Tracker::nearest_offset(a);
      const double fb = Tracker::nearest_offset(b);
      if (fa == 0.0 || fb == 0.0) {
        r.k = (fa == 0.0) ? a.k : b.k;
        r.residual = 0.0;
        return r;
      }
      if (fa < 0.0 && fb > 0.0) {
        auto f = [this](double k) { return tr_.offset(k); };
        boost::uintmax_t iters = 80;
        const double ktol = std::max(1e-15 * b.k, opt_.phase_tol * 1e-2);
        auto tol = [ktol](double x, double y) { return std::abs(x - y) <= ktol; };
        const auto br = boost::math::tools::toms748_solve(f, a.k, b.k, fa, fb, tol, iters);
        const double fl = tr_.offset(br.first);
        const double fh = tr_.offset(br.second);
        const double k = std::abs(fl) <= std::abs(fh) ? br.first : br.second;
        const double res = std::min(std::abs(fl), std::abs(fh));
        if (res < r.residual) {
          r.k = k;
          r.residual = res;
        }
        if (res <= 100.0 * opt_.phase_tol) return r;
      }
      // The eigenvalue nearest -1 is not the crossing one everywhere; shrink the bracket.
      Snapshot m = tr_.at(0.5 * (a.k + b.k));
      if (!match(a.phases, m.phases).crossing.empty())
        b = std::move(m);
      else
        a = std::move(m);
      r.k_lo = a.k;
      r.k_hi = b.k;
      if (r.residual == 1e300) r.k = 0.5 * (a.k + b.k);
    }
    if (r.residual == 1e300) r.residual = std::abs(tr_.offset(r.k));
    return r;
  }

  Tracker& tr_;
  SecularOptions opt_;
};

}  // namespace

MatrixXcd b_effective(const Geometry& g, double k, int n_evanescent, int n_terms,
                      bool swap_phase_roles) {
  ModeOptions mo;
  mo.n_evanescent = n_evanescent;
  mo.n_terms = n_terms;
  const ModeSet modes = build_mode_set(k, g.b, mo);
  const int np = modes.n_prop;
  const int ne = n_evanescent;
  const MatrixXcd s = s_matrix_physical(modes);
  VectorXcd ph(np + ne);
  for (int n = 1; n <= np + ne; ++n)
    ph[n - 1] = std::exp(cplx(0.0, 2.0 * phase_height(g, n, swap_phase_roles)) * modes.p[n - 1]);

  MatrixXcd s_eff = s.topLeftCorner(np, np);
  if (ne > 0) {
    MatrixXcd m = ph.tail(ne).asDiagonal() * s.bottomRightCorner(ne, ne);
    m += MatrixXcd::Identity(ne, ne);
    const MatrixXcd rhs = ph.tail(ne).asDiagonal() * s.bottomLeftCorner(ne, np);
    s_eff -= s.topRightCorner(np, ne) * m.partialPivLu().solve(rhs);
  }
  return ph.head(np).asDiagonal() * s_eff;
}

int default_evanescent_count(const Geometry& g, double k) {
  g.validate();
  const int np = propagating_count(k, g.b);
  for (int ne = 4; ne < kMaxEvanescent; ++ne) {
    double worst = 0.0;
    for (int n = np + ne + 1; n <= np + ne + 2; ++n) {
      const double q = channel_momentum_unchecked(k, g.b, n).imag();
      const double h = (n % 2 == 1) ? g.h1 : g.h2;
      worst = std::max(worst, std::exp(-2.0 * h * q));
    }
    if (worst < 1e-12) return ne;
  }
  return kMaxEvanescent;
}

std::size_t SecularScan::level_count() const {
  std::size_t n = 0;
  for (const auto& r : roots) n += static_cast<std::size_t>(r.multiplicity);
  return n;
}

std::vector<double> SecularScan::levels() const {
  std::vector<double> out;
  for (const auto& r : roots)
    for (int i = 0; i < r.multiplicity; ++i) out.push_back(r.k);
  return out;
}

SecularScan secular_scan(const Geometry& g, double k_min, double k_max, const SecularOptions& opt) {
  g.validate();
  if (!(k_min >= 0.0) || !(k_max > k_min)) throw DomainError("secular scan needs 0 <= k_min < k_max");
  if (!(opt.dk > 0.0)) throw DomainError("dk must be positive");
  if (opt.n_evanescent < -1) throw DomainError("n_evanescent must be >= 0 (or -1 for default)");

  SecularScan scan;
  scan.geometry = g;
  scan.k_min = k_min;
  scan.k_max = k_max;
  scan.dk = opt.dk;

  const double step_thr = kPi / (2.0 * g.b);
  std::vector<double> edges{k_min};
  for (long j = static_cast<long>(std::floor(k_min / step_thr)) + 1; j * step_thr < k_max; ++j)
    if (j * step_thr > k_min) edges.push_back(j * step_thr);
  edges.push_back(k_max);

  auto is_threshold = [&](double v) {
    const double j = std::round(v / step_thr);
    return j >= 1.0 && std::abs(v - j * step_thr) <= 1e-12 * std::max(1.0, v);
  };

  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    double lo = edges[e], hi = edges[e + 1];
    const double gap = 1e-9 * std::max(1.0, hi);
    if (is_threshold(lo) || lo == 0.0) lo += gap;
    if (is_threshold(hi)) hi -= gap;
    if (!(hi > lo)) continue;
    if (hi <= step_thr) continue;  // no propagating channel
    const int ne = opt.n_evanescent >= 0 ? opt.n_evanescent : default_evanescent_count(g, hi);
    scan.n_evanescent = std::max(scan.n_evanescent, ne);
    Tracker tr(g, opt, ne);
    IntervalScanner sc(tr, opt);
    std::vector<SecularRoot> found;
    sc.run(lo, hi, found);
    scan.evaluations += tr.evaluations;
    std::sort(found.begin(), found.end(),
              [](const SecularRoot& x, const SecularRoot& y) { return x.k < y.k; });
    for (auto& r : found) {
      const double j = std::round(r.k / step_thr);
      r.near_threshold = j >= 1.0 && std::abs(r.k - j * step_thr) <= 10.0 * opt.dk;
      scan.roots.push_back(r);
    }
  }
  return scan;
}

Staircase spectrum_to_counting(const std::vector<double>& levels, const Geometry& g) {
  if (!std::is_sorted(levels.begin(), levels.end())) throw DomainError("levels must be sorted");
  Staircase st;
  st.k = levels;
  st.count.resize(levels.size());
  st.smooth.resize(levels.size());
  st.fluctuation.resize(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    st.count[i] = static_cast<double>(i + 1);
    st.smooth[i] = weyl_counting(g, levels[i]);
    st.fluctuation[i] = st.count[i] - st.smooth[i];
  }
  return st;
}

std::vector<double> rectangle_levels(double a, double b, int count) {
  if (!(a > 0.0) || !(b > 0.0) || count < 0) throw DomainError("invalid rectangle");
  std::vector<double> out;
  // Grow the search box until it surely contains the first count levels.
  for (int box = 8;; box *= 2) {
    out.clear();
    for (int m = 1; m <= box; ++m)
      for (int n = 1; n <= box; ++n) out.push_back(kPi * std::hypot(m / a, n / b));
    std::sort(out.begin(), out.end());
    const double kmax_box = kPi * std::min(box / a, box / b);
    if (static_cast<int>(out.size()) >= count && (count == 0 || out[count - 1] <= kmax_box)) break;
  }
  out.resize(count);
  return out;
}

}  // namespace barrier
