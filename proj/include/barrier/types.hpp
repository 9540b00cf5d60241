#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace barrier {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Reduced barrier billiard: rectangle a x b, barrier split h1 (Neumann) + h2 (Dirichlet) = a.
struct Geometry {
  double a = 1.0;
  double b = 1.0;
  double h1 = 0.5;
  double h2 = 0.5;

  static Geometry from_split(double a, double b, double h1);
  void validate() const;
  double area() const { return a * b; }
};

struct UnitarySample {
  MatrixXcd matrix;
  std::vector<double> phases;
  std::uint64_t seed = 0;
  std::string label;
};

}  // namespace barrier
