#include "barrier/linalg.hpp"

#include "barrier/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace barrier {

double unitarity_defect(const MatrixXcd& m) {
  const MatrixXcd g = m.adjoint() * m - MatrixXcd::Identity(m.cols(), m.cols());
  return g.cwiseAbs().maxCoeff();
}

double orthogonality_defect(const MatrixXd& m) {
  const MatrixXd g = m.transpose() * m - MatrixXd::Identity(m.cols(), m.cols());
  return g.cwiseAbs().maxCoeff();
}

VectorXcd eigenvalues(const MatrixXcd& m) {
  Eigen::ComplexEigenSolver<MatrixXcd> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return es.eigenvalues();
}

double wrap_phase(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t -= two_pi;
  return t;
}

std::vector<double> eigenphases(const MatrixXcd& m, double tol) {
  const VectorXcd ev = eigenvalues(m);
  std::vector<double> out(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double r = std::abs(ev[i]);
    if (std::abs(r - 1.0) >= tol) {
      std::ostringstream os;
      os << "eigenvalue off the unit circle: |lambda| = " << r;
      throw NumericalError(os.str());
    }
    out[i] = wrap_phase(std::arg(ev[i]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace barrier
