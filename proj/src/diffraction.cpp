#include "barrier/diffraction.hpp"

#include "barrier/errors.hpp"
#include "barrier/wiener_hopf.hpp"

#include <cmath>
#include <numbers>

namespace barrier {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kBoundaryTol = 1e-12;

double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

double real_momentum(double k, double b, int n) {
  const cplx p = channel_momentum(k, b, n);
  if (p.imag() != 0.0) throw DomainError("asymptotic S elements need propagating channels");
  return p.real();
}

enum class Side { Transmitted, Reflected };

cplx image_sum_impl(Side side, double k, double b, int n, double x, double y, int r_max) {
  const double p = real_momentum(k, b, 2 * n - 1);
  const double phi = std::acos(p / k);
  const double c = -parity_sign(n) / std::sqrt(b * p);
  const double reach = 2.0 * b * r_max;
  const cplx phase0 = std::polar(1.0, -0.75 * kPi);
  cplx total{0.0, 0.0};
  const long j_lo = -static_cast<long>(r_max) - 2;
  const long j_hi = static_cast<long>(r_max) + 2;
  for (long j = j_lo; j <= j_hi; ++j) {
    for (int image = 0; image < 2; ++image) {
      const double yp = (image == 0 ? y : -y) + 2.0 * b * j;
      const double d = yp - b;
      const double u = std::abs(d) / reach;
      if (u >= 1.0) continue;
      const double w = std::pow(std::cos(0.5 * kPi * u), 2);
      const double r = std::hypot(x, d);
      const double theta = side == Side::Transmitted ? 2.0 * kPi + std::atan2(d, x)
                                                     : std::fmod(std::atan2(d, x) + 2.0 * kPi, 2.0 * kPi);
      double sgn = image == 0 ? 1.0 : -1.0;
      if (side == Side::Reflected && (j % 2 != 0)) sgn = -sgn;
      const double dc = sommerfeld_channel(phi, theta);
      total += sgn * w * c * dc / std::sqrt(8.0 * kPi * k * r) * std::polar(1.0, k * r) * phase0;
    }
  }
  return total;
}

ImageSum finish(Side side, double k, double b, int n, double x, double y, int r_max) {
  if (r_max < 2) throw DomainError("image sum: r_max must be >= 2");
  ImageSum out;
  out.r_max = r_max;
  out.value = image_sum_impl(side, k, b, n, x, y, r_max);
  const cplx half = image_sum_impl(side, k, b, n, x, y, r_max / 2);
  const double mag = std::abs(out.value);
  out.residual = mag > 0.0 ? std::abs(out.value - half) / mag : std::abs(out.value - half);
  return out;
}

}  // namespace

cplx s_matrix_asymptotic(double k, double b, ParityBlock block, int n, int m) {
  if (n < 1 || m < 1) throw DomainError("asymptotic S: indices must be >= 1");
  const double sgn = parity_sign(n + m);
  const cplx mi{0.0, -1.0};
  switch (block) {
    case ParityBlock::OddEven: {
      const double p1 = real_momentum(k, b, 2 * n - 1);
      const double p2 = real_momentum(k, b, 2 * m);
      if (p1 == p2) throw DomainError("asymptotic S: resonant denominator p_{2n-1} = p_{2m}");
      return sgn * kPi * m * std::sqrt(k + p1) /
             (b * b * (p1 - p2) * std::sqrt(p1 * p2 * (k + p2)));
    }
    case ParityBlock::OddOdd: {
      const double p1 = real_momentum(k, b, 2 * n - 1);
      const double p2 = real_momentum(k, b, 2 * m - 1);
      return mi * (sgn * std::sqrt((k + p1) * (k + p2))) / (b * (p1 + p2) * std::sqrt(p1 * p2));
    }
    case ParityBlock::EvenEven: {
      const double p1 = real_momentum(k, b, 2 * n);
      const double p2 = real_momentum(k, b, 2 * m);
      return mi * (sgn * kPi * kPi * n * m) /
             (b * b * b * (p1 + p2) * std::sqrt(p1 * p2 * (k + p1) * (k + p2)));
    }
  }
  throw DomainError("asymptotic S: unknown block");
}

double sommerfeld_diffraction(double theta_i, double theta) {
  const double c1 = std::cos(0.5 * (theta - theta_i));
  const double c2 = std::cos(0.5 * (theta + theta_i));
  if (std::abs(c1) < kBoundaryTol || std::abs(c2) < kBoundaryTol)
    throw OpticalBoundaryError("Sommerfeld coefficient evaluated on an optical boundary");
  return 1.0 / c1 - 1.0 / c2;
}

double sommerfeld_channel(double phi, double theta) {
  const double s1 = std::sin(0.5 * (theta + phi));
  const double s2 = std::sin(0.5 * (theta - phi));
  if (std::abs(s1) < kBoundaryTol || std::abs(s2) < kBoundaryTol)
    throw OpticalBoundaryError("channel diffraction coefficient evaluated on an optical boundary");
  return 1.0 / s1 + 1.0 / s2;
}

ImageSum image_sum_transmitted(double k, double b, int n, double x, double y, int r_max) {
  if (!(x > 0.0)) throw DomainError("transmitted image sum needs x > 0");
  return finish(Side::Transmitted, k, b, n, x, y, r_max);
}

ImageSum image_sum_reflected(double k, double b, int n, double x, double y, int r_max) {
  if (!(x < 0.0)) throw DomainError("reflected image sum needs x < 0");
  return finish(Side::Reflected, k, b, n, x, y, r_max);
}

cplx channel_expansion_transmitted(double k, double b, int n, double x, double y) {
  cplx total{0.0, 0.0};
  for (int m = 1; kPi * m / b < k; ++m) {
    const double p2 = real_momentum(k, b, 2 * m);
    total += s_matrix_asymptotic(k, b, ParityBlock::OddEven, n, m) * std::polar(1.0, x * p2) *
             std::sin(kPi * m * y / b) / std::sqrt(b * p2);
  }
  return total;
}

}  // namespace barrier
