#pragma once

#include "barrier/types.hpp"

#include <vector>

namespace barrier {

struct FactorizationInput {
  double k = 1.0;
  double b = 1.0;
  cplx alpha{0.0, 0.0};
};

struct KPlusValue {
  cplx value;
  int n_terms = 0;
  bool corrected = false;
};

// sqrt(k^2 - pi^2 n^2 / (4 b^2)), Im >= 0 on the evanescent side.
// Throws ThresholdError when pi*n/(2b) == k.
cplx channel_momentum(double k, double b, int n);

// Same branch without the threshold check (used for long K+ tables).
cplx channel_momentum_unchecked(double k, double b, int n);

KPlusValue k_plus_product(const FactorizationInput& in, int n_terms);
KPlusValue k_plus_corrected(const FactorizationInput& in, int n_terms);

// Tail correction S_cor(N); the corrected product is raw * exp(S_cor).
cplx k_plus_tail_correction(double k, double b, cplx alpha, int n_terms);

cplx k_plus_asymptotic(const FactorizationInput& in);

// e^{gamma/2}/sqrt(pi), the limit of prod (1 - 1/2n) e^{1/2n}.
double euler_product_constant();

// max(2000, 10 bk/pi).
int default_n_terms(double k, double b);

// Caches p_1..p_{2N} for one (k, b) so that K+ can be evaluated at many alpha.
class KPlusEvaluator {
 public:
  KPlusEvaluator(double k, double b, int n_terms = 0, bool corrected = true);

  cplx operator()(cplx alpha) const;
  int n_terms() const { return n_terms_; }
  bool corrected() const { return corrected_; }

 private:
  double k_;
  double b_;
  int n_terms_;
  bool corrected_;
  std::vector<cplx> p_odd_;   // p_{2n-1}
  std::vector<cplx> p_even_;  // p_{2n}
};

}  // namespace barrier
