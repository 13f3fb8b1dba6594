#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "hdg/types.hpp"

namespace hdg {

/// Lame parameters, density and their spatial gradients at a point.
struct IsotropicSample {
  double lambda = 0.0;
  double mu = 0.0;
  double rho = 0.0;
  Vec3 grad_lambda = Vec3::Zero();
  Vec3 grad_mu = Vec3::Zero();
  Vec3 grad_rho = Vec3::Zero();
};

/// Pointwise elastic law C, its inverse A = C^{-1}, density rho and the
/// compliance spectral bound c_A.
class Material {
 public:
  enum class Kind { constant_isotropic, variable_preset, custom };

  struct CustomLaw {
    std::function<double(const Vec3&)> density;
    std::function<Mat3(const Vec3&, const Mat3&)> stiffness;
    std::function<Mat3(const Vec3&, const Mat3&)> compliance;
    std::function<double(const Vec3&)> compliance_bound;
  };

  static Material constant_isotropic(double lambda, double mu, double rho);
  /// rho = 1+|x|^2, lambda = 2 + 0.2x1^2 + 0.3x2^2 + 0.04x3^2,
  /// mu = 3 + 0.5x2^2 + 0.03x3^2.
  static Material variable_preset();
  static Material custom(CustomLaw law);

  Kind kind() const { return kind_; }
  std::string name() const;

  double density(const Vec3& x) const;

  /// Isotropic parameters with gradients; nullopt for custom laws.
  std::optional<IsotropicSample> isotropic(const Vec3& x) const;

  /// 2 mu xi + lambda tr(xi) I. Throws std::invalid_argument if xi is not
  /// symmetric (relative asymmetry > 1e-12).
  Mat3 apply_stiffness(const Vec3& x, const Mat3& xi) const;
  CMat3 apply_stiffness(const Vec3& x, const CMat3& xi) const;
  /// Inverse of apply_stiffness. Throws on asymmetric input or degenerate
  /// moduli (mu <= 0 or 2 mu + 3 lambda <= 0).
  Mat3 apply_compliance(const Vec3& x, const Mat3& xi) const;
  CMat3 apply_compliance(const Vec3& x, const CMat3& xi) const;

  /// Largest eigenvalue of A(x) on symmetric matrices.
  double compliance_bound(const Vec3& x) const;

  /// (c_p, c_s) = (sqrt((lambda+2mu)/rho), sqrt(mu/rho)).
  std::pair<double, double> wavespeeds(const Vec3& x) const;

 private:
  Material() = default;

  Kind kind_ = Kind::constant_isotropic;
  double lambda_ = 1.0, mu_ = 1.0, rho_ = 1.0;
  CustomLaw custom_;
};

/// Asymmetry of a matrix relative to its size; used for input validation.
double relative_asymmetry(const Mat3& m);
double relative_asymmetry(const CMat3& m);

}  // namespace hdg
