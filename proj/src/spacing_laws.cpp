#include "barrier/spacing_laws.hpp"

#include "barrier/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace barrier {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const SpacingLaw& law) {
  if (law.order < 0) throw DomainError("spacing law: order must be >= 0");
  switch (law.family) {
    case LawFamily::ModelA:
      if (law.n_dim < 2 * law.order + 3)
        throw DomainError("model-A law needs N >= 2n + 3, got N = " + std::to_string(law.n_dim));
      break;
    case LawFamily::ModelC:
      if (law.n_dim < law.order + 2)
        throw DomainError("model-C law needs N >= n + 2, got N = " + std::to_string(law.n_dim));
      break;
    default:
      break;
  }
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }
}  // namespace

double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw DomainError("binomial: need 0 <= k <= n");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::pair<double, double> spacing_law_support(const SpacingLaw& law) {
  validate(law);
  const double n = law.order;
  switch (law.family) {
    case LawFamily::ModelA:
      return {0.0, law.n_dim / 2.0};
    case LawFamily::ModelC:
      return {(n + 1) / 2.0, (law.n_dim + n + 1) / 2.0};
    case LawFamily::ShiftedPoisson:
      return {(n + 1) / 2.0, kInf};
    default:
      return {0.0, kInf};
  }
}

double spacing_law_eval(const SpacingLaw& law, double s) {
  const auto [lo, hi] = spacing_law_support(law);
  if (!(s > lo) || !(s < hi)) return 0.0;
  const int n = law.order;
  const int big_n = law.n_dim;
  switch (law.family) {
    case LawFamily::SemiPoisson:
      return 2.0 * std::exp((2 * n + 1) * std::log(2.0 * s) - 2.0 * s - log_factorial(2 * n + 1));
    case LawFamily::Poisson:
      return std::exp(n * std::log(s) - s - log_factorial(n));
    case LawFamily::ShiftedPoisson: {
      const double u = 2.0 * s - n - 1.0;
      return 2.0 * std::exp(n * std::log(u) - u - log_factorial(n));
    }
    case LawFamily::ModelA: {
      const double log_c = (2 * n + 2) * std::log(2.0 / big_n) + std::log(2.0 * (n + 1)) +
                           log_binomial(big_n - 1, 2 * n + 2);
      return std::exp(log_c + (2 * n + 1) * std::log(s) +
                      (big_n - 2 * n - 3) * std::log1p(-2.0 * s / big_n));
    }
    case LawFamily::ModelC: {
      const double log_c = (big_n - 1) * std::log(2.0) + std::log(big_n - 1.0) -
                           (big_n - 1) * std::log(static_cast<double>(big_n)) +
                           log_binomial(big_n - 2, n);
      const double left = s - (n + 1) / 2.0;
      const double right = (big_n + n + 1) / 2.0 - s;
      const double lp = n == 0 ? 0.0 : n * std::log(left);
      return std::exp(log_c + (big_n - 2 - n) * std::log(right) + lp);
    }
  }
  return 0.0;
}

double spacing_law_bin_average(const SpacingLaw& law, double lo, double hi) {
  if (!(hi > lo)) throw DomainError("bin average: need hi > lo");
  const auto [a, b] = spacing_law_support(law);
  const double x0 = std::max(lo, a);
  const double x1 = std::min(hi, b);
  if (!(x1 > x0)) return 0.0;
  const auto f = [&](double s) { return spacing_law_eval(law, s); };
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, x0, x1, 15, 1e-12);
  return v / (hi - lo);
}

double spacing_law_mass(const SpacingLaw& law) {
  const auto [a, b] = spacing_law_support(law);
  const auto f = [&](double s) { return spacing_law_eval(law, s); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

double semi_poisson_r2(double s) { return 1.0 - std::exp(-4.0 * std::abs(s)); }

double semi_poisson_form_factor(double tau) {
  const double x = std::numbers::pi * std::numbers::pi * tau * tau;
  return (2.0 + x) / (4.0 + x);
}

}  // namespace barrier
