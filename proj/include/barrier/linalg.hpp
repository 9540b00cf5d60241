#pragma once

#include "barrier/types.hpp"

#include <vector>

namespace barrier {

// max_{ij} |(M^dagger M - I)_{ij}|
double unitarity_defect(const MatrixXcd& m);
// max_{ij} |(M^T M - I)_{ij}|
double orthogonality_defect(const MatrixXd& m);

VectorXcd eigenvalues(const MatrixXcd& m);

// Eigenphases in [0, 2pi), sorted. Every eigenvalue must satisfy ||lambda| - 1| < tol,
// otherwise NumericalError.
std::vector<double> eigenphases(const MatrixXcd& m, double tol = 1e-6);

double wrap_phase(double theta);  // into [0, 2pi)

}  // namespace barrier
