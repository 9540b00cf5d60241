#pragma once

#include <stdexcept>
#include <string>

namespace barrier {

// Invalid input or configuration. Maps to exit code 2 in the CLI.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// k sits exactly on a channel threshold pi*n/(2b) = k.
class ThresholdError : public DomainError {
 public:
  ThresholdError(int channel, double k);
  int channel() const { return channel_; }

 private:
  int channel_;
};

// Numerical failure. Maps to exit code 3 in the CLI.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |p_{2n-1} + alpha| below tolerance in the K+ product.
class PoleError : public NumericalError {
 public:
  PoleError(int n, double distance);
  int channel() const { return channel_; }

 private:
  int channel_;
};

// Diffraction coefficient evaluated on an optical boundary.
class OpticalBoundaryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace barrier
