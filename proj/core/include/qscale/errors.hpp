#pragma once

#include <stdexcept>
#include <string>

namespace qscale {

/// The image of a map is not trace class: the Gaussian envelope of its
/// characteristic function does not decay.
class DivergentReconstruction : public std::runtime_error {
 public:
  DivergentReconstruction(const std::string& what, double exponent)
      : std::runtime_error(what), exponent_(exponent) {}

  /// Effective Gaussian exponent c of the offending characteristic function.
  double exponent() const { return exponent_; }

 private:
  double exponent_;
};

/// Doubling the radial cutoff or node count moved a result past tolerance.
class QuadratureUnderresolved : public std::runtime_error {
 public:
  QuadratureUnderresolved(const std::string& what, double shift)
      : std::runtime_error(what), shift_(shift) {}

  double shift() const { return shift_; }

 private:
  double shift_;
};

}  // namespace qscale
