#pragma once

#include <array>
#include <functional>
#include <string>

#include "hdg/global_solver.hpp"
#include "hdg/materials.hpp"

namespace hdg {

/// Value, gradient G(i,j) = d_j u_i and Hessians H[i](j,l) = d_j d_l u_i of a
/// displacement field at one point.
struct DisplacementJet {
  CVec3 value = CVec3::Zero();
  CMat3 gradient = CMat3::Zero();
  std::array<CMat3, 3> hessian{CMat3::Zero(), CMat3::Zero(), CMat3::Zero()};
};

using JetField = std::function<DisplacementJet(const Vec3&)>;

/// Manufactured solution of div sigma~ + kappa^2 rho u = f~, sigma~ = C eps(u).
struct ExactCase {
  std::string tag;
  double kappa = 1.0;
  Material material = Material::constant_isotropic(1.0, 1.0, 1.0);
  JetField jet;

  CVec3 displacement(const Vec3& x) const { return jet(x).value; }
  CMat3 stress(const Vec3& x) const;       // sigma~
  CVec3 divergence(const Vec3& x) const;   // div sigma~
  CVec3 load(const Vec3& x) const;         // f~

  /// f~, g_D = u, g~_N = sigma~ n, g~_R = sigma~ n - i kappa u.
  ProblemData data() const;
  VectorField displacement_field() const;
  StressField stress_field() const;
};

struct CaseParams {
  double amplitude = 0.3;
  Vec3 direction = Vec3::Constant(1.0 / std::sqrt(3.0));
  Vec3 polarization = Vec3::Zero();  // zero selects the default per wave type
  double lambda = 1.0, mu = 1.0, rho = 1.0;
  int degree = 2;               // polynomial case: components in P_degree
  unsigned seed = 12345;
};

/// Tags: varcoeff, pwave, swave, polynomial. Plane waves need unit direction
/// and polarization, parallel for pwave and orthogonal for swave (1e-12).
ExactCase make_case(const std::string& tag, double kappa, const CaseParams& params = {});

/// Default polarization used for the shear wave when none is given.
Vec3 default_shear_polarization();

}  // namespace hdg
