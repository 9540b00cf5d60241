#include "barrier/types.hpp"

#include "barrier/errors.hpp"

#include <cmath>
#include <sstream>

namespace barrier {

ThresholdError::ThresholdError(int channel, double k)
    : DomainError([&] {
        std::ostringstream os;
        os.precision(17);
        os << "k = " << k << " coincides with the threshold of channel " << channel
           << "; perturb k";
        return os.str();
      }()),
      channel_(channel) {}

PoleError::PoleError(int n, double distance)
    : NumericalError([&] {
        std::ostringstream os;
        os << "K+ pole: |p_" << (2 * n - 1) << " + alpha| = " << distance
           << " below tolerance (factor n = " << n << ")";
        return os.str();
      }()),
      channel_(n) {}

Geometry Geometry::from_split(double a, double b, double h1) {
  Geometry g{a, b, h1, a - h1};
  g.validate();
  return g;
}

void Geometry::validate() const {
  if (!(a > 0.0)) throw DomainError("geometry: a must be > 0");
  if (!(b > 0.0)) throw DomainError("geometry: b must be > 0");
  if (!(h1 > 0.0)) throw DomainError("geometry: h1 must be > 0");
  if (!(h2 > 0.0)) throw DomainError("geometry: h2 must be > 0");
  if (std::abs(h1 + h2 - a) > 1e-12 * a) throw DomainError("geometry: h1 + h2 must equal a");
}

}  // namespace barrier
