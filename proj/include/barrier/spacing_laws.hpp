#pragma once

#include <utility>

namespace barrier {

enum class LawFamily { SemiPoisson, ModelA, ModelC, ShiftedPoisson, Poisson };

struct SpacingLaw {
  LawFamily family = LawFamily::SemiPoisson;
  int n_dim = 0;  // matrix dimension for the finite-N families
  int order = 0;  // number of interior levels
};

// Closed-form density; zero outside the support. DomainError for parameters out of range.
double spacing_law_eval(const SpacingLaw& law, double s);

// Support interval; hi is +infinity for the unbounded families.
std::pair<double, double> spacing_law_support(const SpacingLaw& law);

// (1/(hi-lo)) * integral of the density over [lo, hi], adaptive Gauss-Kronrod.
double spacing_law_bin_average(const SpacingLaw& law, double lo, double hi);

// Integral over the whole support.
double spacing_law_mass(const SpacingLaw& law);

double log_binomial(int n, int k);

// Closed forms of the semi-Poisson two-point function and form factor.
double semi_poisson_r2(double s);
double semi_poisson_form_factor(double tau);

}  // namespace barrier
