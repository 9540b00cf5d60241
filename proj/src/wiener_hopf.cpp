#include "barrier/wiener_hopf.hpp"

#include "barrier/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace barrier {

namespace {

constexpr double kPi = std::numbers::pi;

// Neumaier-compensated sum of complex values, real and imaginary parts separately.
struct CompensatedSum {
  double re = 0.0, im = 0.0, cre = 0.0, cim = 0.0;

  static void add(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  void add(cplx v) {
    add(re, cre, v.real());
    add(im, cim, v.imag());
  }
  cplx value() const { return {re + cre, im + cim}; }
};

double pole_tolerance(double k, cplx alpha) {
  return 1e-13 * (1.0 + k + std::abs(alpha));
}

bool on_threshold(double k, double c) {
  return std::abs(k - c) <= 4.0 * std::numeric_limits<double>::epsilon() * k;
}

// Sum of log factors for n = 1..N; products of up to 32 factors are formed before
// each log to cut the number of complex logarithms.
template <class POdd, class PEven>
cplx log_product(int n_terms, double k, cplx alpha, POdd p_odd, PEven p_even) {
  const double tol = pole_tolerance(k, alpha);
  CompensatedSum sum;
  cplx block{1.0, 0.0};
  int in_block = 0;
  for (int n = 1; n <= n_terms; ++n) {
    const cplx den = p_odd(n) + alpha;
    if (std::abs(den) < tol) throw PoleError(n, std::abs(den));
    block *= (1.0 - 0.5 / n) * (p_even(n) + alpha) / den;
    const double mag = std::abs(block);
    if (++in_block == 32 || mag > 1e100 || mag < 1e-100) {
      sum.add(std::log(block));
      block = 1.0;
      in_block = 0;
    }
  }
  if (in_block > 0) sum.add(std::log(block));
  return sum.value();
}

}  // namespace

cplx channel_momentum_unchecked(double k, double b, int n) {
  const double c = kPi * n / (2.0 * b);
  const double d = (k - c) * (k + c);
  if (d >= 0.0) return {std::sqrt(d), 0.0};
  return {0.0, std::sqrt(-d)};
}

cplx channel_momentum(double k, double b, int n) {
  if (!(k > 0.0) || !(b > 0.0) || n < 1)
    throw DomainError("channel_momentum: need k > 0, b > 0, n >= 1");
  if (on_threshold(k, kPi * n / (2.0 * b))) throw ThresholdError(n, k);
  return channel_momentum_unchecked(k, b, n);
}

int default_n_terms(double k, double b) {
  return std::max(2000, static_cast<int>(std::ceil(10.0 * b * k / kPi)));
}

cplx k_plus_tail_correction(double k, double b, cplx alpha, int n_terms) {
  const double kappa = b * k / kPi;
  const cplx v = cplx(0.0, 1.0) * b * alpha / kPi;
  const double k2 = kappa * kappa;
  const cplx a2 = v / 2.0;
  const cplx a3 = (2.0 * k2 + 2.0 * v * v + v) / 4.0;
  const cplx a4 = (6.0 * k2 * v + 4.0 * v * v * v + 3.0 * k2 + 3.0 * v * v + v) / 8.0;
  const double n = n_terms;
  return a2 / n + (a3 - a2) / (2.0 * n * n) + (2.0 * a4 - 3.0 * a3 + a2) / (6.0 * n * n * n);
}

namespace {

void validate_input(const FactorizationInput& in, int n_terms) {
  if (!(in.k > 0.0) || !(in.b > 0.0)) throw DomainError("K+: need k > 0 and b > 0");
  if (n_terms < 1) throw DomainError("K+: n_terms must be >= 1");
  if (!std::isfinite(in.alpha.real()) || !std::isfinite(in.alpha.imag()))
    throw DomainError("K+: alpha must be finite");
}

}  // namespace

KPlusValue k_plus_product(const FactorizationInput& in, int n_terms) {
  validate_input(in, n_terms);
  const auto p = [&](int n) { return channel_momentum_unchecked(in.k, in.b, n); };
  const cplx s = log_product(
      n_terms, in.k, in.alpha, [&](int n) { return p(2 * n - 1); },
      [&](int n) { return p(2 * n); });
  return {std::exp(s), n_terms, false};
}

KPlusValue k_plus_corrected(const FactorizationInput& in, int n_terms) {
  validate_input(in, n_terms);
  if (!(n_terms > in.b * in.k / kPi))
    throw DomainError("K+: corrected product needs n_terms > bk/pi");
  const auto p = [&](int n) { return channel_momentum_unchecked(in.k, in.b, n); };
  const cplx s = log_product(
      n_terms, in.k, in.alpha, [&](int n) { return p(2 * n - 1); },
      [&](int n) { return p(2 * n); });
  return {std::exp(s + k_plus_tail_correction(in.k, in.b, in.alpha, n_terms)), n_terms, true};
}

cplx k_plus_asymptotic(const FactorizationInput& in) {
  return std::polar(1.0, kPi / 4.0) / std::sqrt(cplx(in.b * (in.k + in.alpha)));
}

double euler_product_constant() {
  return std::exp(std::numbers::egamma / 2.0) / std::sqrt(kPi);
}

KPlusEvaluator::KPlusEvaluator(double k, double b, int n_terms, bool corrected)
    : k_(k), b_(b), n_terms_(n_terms > 0 ? n_terms : default_n_terms(k, b)), corrected_(corrected) {
  if (!(k > 0.0) || !(b > 0.0)) throw DomainError("K+: need k > 0 and b > 0");
  if (corrected_ && !(n_terms_ > b * k / kPi))
    throw DomainError("K+: corrected product needs n_terms > bk/pi");
  p_odd_.resize(n_terms_);
  p_even_.resize(n_terms_);
  for (int n = 1; n <= n_terms_; ++n) {
    p_odd_[n - 1] = channel_momentum_unchecked(k, b, 2 * n - 1);
    p_even_[n - 1] = channel_momentum_unchecked(k, b, 2 * n);
  }
}

cplx KPlusEvaluator::operator()(cplx alpha) const {
  const cplx s = log_product(
      n_terms_, k_, alpha, [&](int n) { return p_odd_[n - 1]; },
      [&](int n) { return p_even_[n - 1]; });
  if (!corrected_) return std::exp(s);
  return std::exp(s + k_plus_tail_correction(k_, b_, alpha, n_terms_));
}

}  // namespace barrier
