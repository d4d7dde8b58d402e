#pragma once

#include "esmm/common.hpp"

#include <span>

namespace esmm {

struct MRWeights {
  std::array<double, 3> chi{1.0 / 111.0, 10.0 / 111.0, 100.0 / 111.0};
  double eps = 1e-10;

  static MRWeights defaults() { return {}; }
  static MRWeights sharp() { return {{0.95, 0.045, 0.005}, 1e-10}; }
  /// Throws ConfigError unless χ > 0, Σχ = 1 and ε > 0.
  void validate() const;
};

/// Value at j+½ from W_{j−2..j+2}.
double reconstruct_right(std::span<const double, 5> W, const MRWeights& wt);
/// Value at j−½; same as reconstruct_right on the reversed window.
double reconstruct_left(std::span<const double, 5> W, const MRWeights& wt);
/// W⁺ − W⁻ at i+½; left = W_{i−2..i+2}, right = W_{i−1..i+3}.
double interface_jump(std::span<const double, 5> left, std::span<const double, 5> right, const MRWeights& wt);

}  // namespace esmm
