#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hdg {

using Complex = std::complex<double>;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

using RMatrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Base class for all errors raised by the solver.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Element-local block could not be factorized.
class SingularLocalSolver : public Error {
 public:
  SingularLocalSolver(int element, const std::string& what)
      : Error(what), element_(element) {}
  int element() const { return element_; }

 private:
  int element_;
};

/// Global skeleton system is singular or too close to singular to trust.
class SingularGlobalSystem : public Error {
 public:
  using Error::Error;
};

/// Loop execution strategy for per-element kernels. `serial` is the reference
/// path; `parallel` distributes elements over OpenMP threads and must produce
/// bit-identical results.
enum class ExecutionPolicy { serial, parallel };

}  // namespace hdg
