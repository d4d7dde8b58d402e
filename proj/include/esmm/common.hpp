#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace esmm {

inline constexpr int kMaxSpecies = 2;
inline constexpr int kMaxDim = 3;
inline constexpr int kMaxVars = kMaxSpecies + kMaxDim + 1;

// Small vectors/matrices live on the stack (max 6 entries per side).
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxVars, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxVars, kMaxVars>;

using Conserved = Vec;
using FluxVector = Vec;
using Index3 = std::array<int, 3>;
using Point3 = std::array<double, 3>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a state has nonpositive partial density or temperature.
class AdmissibilityError : public Error {
 public:
  explicit AdmissibilityError(const std::string& what) : Error(what), detail_(what) {}

  AdmissibilityError with_context(const Index3& node, int stage, double time) const {
    AdmissibilityError e(detail_ + " at node (" + std::to_string(node[0]) + "," + std::to_string(node[1]) +
                         "," + std::to_string(node[2]) + "), stage " + std::to_string(stage) + ", t=" +
                         std::to_string(time));
    e.detail_ = detail_;
    e.node_ = node;
    e.stage_ = stage;
    e.time_ = time;
    e.has_context_ = true;
    return e;
  }

  bool has_context() const { return has_context_; }
  const Index3& node() const { return node_; }
  int stage() const { return stage_; }
  double time() const { return time_; }

 private:
  std::string detail_;
  Index3 node_{0, 0, 0};
  int stage_ = -1;
  double time_ = std::numeric_limits<double>::quiet_NaN();
  bool has_context_ = false;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Tangled or degenerate mesh.
class MeshError : public Error {
 public:
  MeshError(const std::string& what, const Index3& node) : Error(what), node_(node) {}
  const Index3& node() const { return node_; }

 private:
  Index3 node_;
};

}  // namespace esmm
