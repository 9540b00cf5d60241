#include "barrier/errors.hpp"
#include "barrier/rng.hpp"
#include "barrier/spacing_laws.hpp"
#include "barrier/spectral_statistics.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

using namespace barrier;

namespace {
constexpr double kPi = std::numbers::pi;

EigenphaseSpectrum poisson_spectrum(int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> ph(dim);
  for (auto& p : ph) p = rng.uniform(0.0, 2.0 * kPi);
  return EigenphaseSpectrum::from_phases(ph, "poisson");
}

// Semi-Poisson levels on the circle: gaps are Gamma(2, 1/2) draws, rescaled to close the circle.
EigenphaseSpectrum semi_poisson_spectrum(int dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> gaps(dim);
  for (auto& g : gaps) g = -0.5 * (std::log(1.0 - rng.uniform()) + std::log(1.0 - rng.uniform()));
  const double total = std::accumulate(gaps.begin(), gaps.end(), 0.0);
  std::vector<double> ph(dim);
  double acc = 0.0;
  for (int i = 0; i < dim; ++i) {
    ph[i] = 2.0 * kPi * acc / total;
    acc += gaps[i];
  }
  return EigenphaseSpectrum::from_phases(ph, "semi-poisson");
}

EigenphaseSpectrum picket_fence(int dim) {
  std::vector<double> ph(dim);
  for (int i = 0; i < dim; ++i) ph[i] = 2.0 * kPi * i / dim;
  return EigenphaseSpectrum::from_phases(ph, "picket");
}
}  // namespace

TEST_CASE("unfolding") {
  const auto s = unfold(picket_fence(12));
  for (double v : s.s) CHECK(v == doctest::Approx(1.0));
  const auto two = unfold(EigenphaseSpectrum::from_phases({0.0, kPi}));
  CHECK(two.s.size() == 2);
  CHECK(two.s[0] == doctest::Approx(1.0));
  CHECK(two.s[1] == doctest::Approx(1.0));

  const auto p = unfold(poisson_spectrum(1000, 3));
  const double mean = std::accumulate(p.s.begin(), p.s.end(), 0.0) / p.s.size();
  CHECK(std::abs(mean - 1.0) < 1e-12);

  const auto dup = unfold(EigenphaseSpectrum::from_phases({0.5, 0.5, 2.0}));
  CHECK(dup.zero_gaps == 1);
}

TEST_CASE("order-n gaps have mean n+1") {
  const auto sp = poisson_spectrum(500, 5);
  for (int n = 0; n < 4; ++n) {
    const auto g = order_gaps(sp, n);
    const double mean = std::accumulate(g.s.begin(), g.s.end(), 0.0) / g.s.size();
    CHECK(mean == doctest::Approx(n + 1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(order_gaps(sp, -1), DomainError);
}

TEST_CASE("Poisson spectrum gives exponential spacings (KS distance)") {
  const auto s = unfold(poisson_spectrum(10000, 17)).s;
  std::vector<double> v = s;
  std::sort(v.begin(), v.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = 1.0 - std::exp(-v[i]);
    ks = std::max({ks, std::abs(f - double(i) / v.size()), std::abs(f - double(i + 1) / v.size())});
  }
  CHECK(ks < 0.02);
}

TEST_CASE("P_n histograms recover the sampling law") {
  std::vector<EigenphaseSpectrum> sp;
  for (int i = 0; i < 40; ++i) sp.push_back(semi_poisson_spectrum(2000, 100 + i));
  for (int n = 0; n <= 2; ++n) {
    const auto t = p_n_histogram(sp, n, 40, 8.0);
    CHECK(sup_norm_vs_law(t, {LawFamily::SemiPoisson, 0, n}) < 0.03);
    double mass = 0.0;
    for (double d : t.density) mass += d * t.width();
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
  }
  std::vector<EigenphaseSpectrum> pois;
  for (int i = 0; i < 40; ++i) pois.push_back(poisson_spectrum(2000, 900 + i));
  CHECK(sup_norm_vs_law(p_n_histogram(pois, 1, 40, 8.0), {LawFamily::Poisson, 0, 1}) < 0.03);
}

TEST_CASE("histogram merge is commutative") {
  PnHistogram a(0, 20, 4.0), b(0, 20, 4.0);
  a.add(poisson_spectrum(300, 1));
  b.add(poisson_spectrum(300, 2));
  PnHistogram ab = a, ba = b;
  ab.merge(b);
  ba.merge(a);
  CHECK(ab.table().counts == ba.table().counts);
  CHECK_THROWS_AS(a.merge(PnHistogram(1, 20, 4.0)), DomainError);
}

TEST_CASE("sparse histograms are reported") {
  const auto t = p_n_histogram({poisson_spectrum(20, 1)}, 0, 100, 4.0);
  CHECK(t.sparse);
}

TEST_CASE("global rotation leaves estimators unchanged") {
  auto sp = poisson_spectrum(400, 8);
  std::vector<double> rot = sp.phases;
  for (auto& p : rot) p += 1.2345;
  const auto sr = EigenphaseSpectrum::from_phases(rot);
  const auto a = p_n_histogram({sp}, 1, 30, 6.0);
  const auto b = p_n_histogram({sr}, 1, 30, 6.0);
  CHECK(a.counts == b.counts);
  const auto va = number_variance({sp}, {1.0, 3.0});
  const auto vb = number_variance({sr}, {1.0, 3.0});
  CHECK(va.variance[0] == doctest::Approx(vb.variance[0]).epsilon(0.05));
}

TEST_CASE("R2 from semi-Poisson data and its form factor") {
  std::vector<EigenphaseSpectrum> sp;
  for (int i = 0; i < 30; ++i) sp.push_back(semi_poisson_spectrum(2000, 500 + i));
  const auto r2 = r2_estimate(sp, 80, 8.0);
  CHECK_FALSE(r2.truncated);
  double worst = 0.0;
  for (std::size_t i = 0; i < r2.table.x.size(); ++i)
    worst = std::max(worst, std::abs(r2.table.density[i] - semi_poisson_r2(r2.table.x[i])));
  CHECK(worst < 0.08);
  // monotone in the number of orders summed
  const auto p0 = p_n_histogram(sp, 0, 80, 8.0);
  for (std::size_t i = 0; i < p0.x.size(); ++i) CHECK(p0.density[i] <= r2.table.density[i] + 1e-12);
}

TEST_CASE("form factor of the exact semi-Poisson R2 table") {
  DensityTable t;
  const int bins = 4000;
  t.lo = 0.0;
  t.hi = 40.0;
  for (int i = 0; i < bins; ++i) {
    const double x = (i + 0.5) * t.hi / bins;
    t.x.push_back(x);
    t.density.push_back(semi_poisson_r2(x));
    t.counts.push_back(0);
  }
  std::vector<double> tau;
  for (double v = 0.0; v <= 3.0 + 1e-12; v += 0.1) tau.push_back(v);
  const auto ff = form_factor(t, tau);
  for (std::size_t i = 0; i < tau.size(); ++i)
    CHECK(ff.k[i] == doctest::Approx(semi_poisson_form_factor(tau[i])).epsilon(0.01));
}

TEST_CASE("number variance and compressibility") {
  std::vector<double> l_grid;
  for (double l = 1.0; l <= 25.0; l += 1.0) l_grid.push_back(l);

  std::vector<EigenphaseSpectrum> pois;
  for (int i = 0; i < 30; ++i) pois.push_back(poisson_spectrum(1000, 40 + i));
  const auto fit_p = compressibility(number_variance(pois, l_grid));
  CHECK(fit_p.slope == doctest::Approx(1.0).epsilon(0.05));

  const auto fit_f = compressibility(number_variance({picket_fence(1000)}, l_grid));
  CHECK(std::abs(fit_f.slope) < 0.01);

  std::vector<EigenphaseSpectrum> sp;
  for (int i = 0; i < 30; ++i) sp.push_back(semi_poisson_spectrum(4000, 700 + i));
  const auto fit_s = compressibility(number_variance(sp, l_grid));
  CHECK(fit_s.slope == doctest::Approx(0.5).epsilon(0.1));

  CHECK_THROWS_AS(number_variance({picket_fence(40)}, {11.0}), DomainError);
}
