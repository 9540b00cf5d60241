#pragma once

#include "barrier/types.hpp"

namespace barrier {

enum class ParityBlock {
  OddEven,  // S_{2n-1,2m}
  OddOdd,   // S_{2n-1,2m-1}
  EvenEven  // S_{2n,2m}
};

// High-energy closed forms of the physical S-matrix elements.
cplx s_matrix_asymptotic(double k, double b, ParityBlock block, int n, int m);

// D = 1/cos((theta - theta_i)/2) - 1/cos((theta + theta_i)/2), angles counterclockwise
// from the barrier. OpticalBoundaryError at theta = pi +- theta_i.
double sommerfeld_diffraction(double theta_i, double theta);

// Same coefficient after theta_i = pi +- phi: 1/sin((theta+phi)/2) + 1/sin((theta-phi)/2).
double sommerfeld_channel(double phi, double theta);

struct ImageSum {
  cplx value;
  double residual = 0.0;  // |S(r_max) - S(r_max/2)| / |S(r_max)|
  int r_max = 0;
};

// Sum over images y' = +-y + 2 b r of the scattered wave of incident channel 2n-1,
// with a cos^2 taper in the image distance that vanishes at 2 b r_max.
ImageSum image_sum_transmitted(double k, double b, int n, double x, double y, int r_max);
// Reflected side (x < 0), images weighted by (-1)^r.
ImageSum image_sum_reflected(double k, double b, int n, double x, double y, int r_max);

// Channel expansion sum_m S_{2n-1,2m} e^{i x p_2m} sin(pi m y/b)/sqrt(b p_2m) built from the
// asymptotic S elements over propagating m.
cplx channel_expansion_transmitted(double k, double b, int n, double x, double y);

}  // namespace barrier
