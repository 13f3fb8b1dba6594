#include "hdg/projection.hpp"

#include <stdexcept>

#include "hdg/materials.hpp"

namespace hdg {

CVector project_stress(const Mesh& mesh, const Spaces& spaces, int element,
                       const StressField& field) {
  const ElementGeometry geo = mesh.geometry(element);
  const TetRule& rule = spaces.cell_rule();
  const RMatrix& phi = spaces.stress_table();
  const int ns = spaces.stress_scalars();
  CVector coeffs = CVector::Zero(spaces.dim_v());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const CMat3 value = field(geo.to_physical(rule.points[q]));
    if (relative_asymmetry(value) > 1e-12) {
      throw std::invalid_argument("project_stress: field is not symmetric");
    }
    const double w = rule.weights[q];
    for (int c = 0; c < 6; ++c) {
      const auto [i, j] = kSymmetricIndex[c];
      // field : E_c
      const Complex pairing = c < 3 ? value(i, j) : value(i, j) + value(j, i);
      const Complex scaled = w * pairing / symmetric_unit_norm2(c);
      for (int a = 0; a < ns; ++a) coeffs[c * ns + a] += scaled * phi(q, a);
    }
  }
  // reference-orthonormal basis: mass on K is det * identity
  return coeffs;
}

CVector project_displacement(const Mesh& mesh, const Spaces& spaces, int element,
                             const VectorField& field) {
  const ElementGeometry geo = mesh.geometry(element);
  const TetRule& rule = spaces.cell_rule();
  const RMatrix& psi = spaces.displacement_table();
  const int nw = spaces.displacement_scalars();
  CVector coeffs = CVector::Zero(spaces.dim_w());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const CVec3 value = field(geo.to_physical(rule.points[q]));
    const double w = rule.weights[q];
    for (int r = 0; r < 3; ++r) {
      for (int a = 0; a < nw; ++a) coeffs[r * nw + a] += w * value[r] * psi(q, a);
    }
  }
  return coeffs;
}

CVector project_trace(const Mesh& mesh, const Spaces& spaces, int face,
                      const VectorField& field) {
  const FaceGeometry fg = mesh.face_geometry(face);
  const TriRule& rule = spaces.face_rule();
  const RMatrix& mu = spaces.trace_table();
  const int nm = spaces.trace_scalars();
  CVector coeffs = CVector::Zero(spaces.dim_m());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const CVec3 value = field(fg.to_physical(rule.points[q]));
    const double w = rule.weights[q];
    for (int r = 0; r < 3; ++r) {
      for (int j = 0; j < nm; ++j) coeffs[r * nm + j] += w * value[r] * mu(q, j);
    }
  }
  return coeffs;
}

CMat3 evaluate_stress(const Spaces& spaces, const CVector& coeffs, const Vec3& xi) {
  const RVector phi = spaces.stress_basis().values(xi);
  const int ns = spaces.stress_scalars();
  CMat3 s = CMat3::Zero();
  for (int c = 0; c < 6; ++c) {
    const Complex v = (coeffs.segment(c * ns, ns).transpose() * phi.cast<Complex>())(0);
    const auto [i, j] = kSymmetricIndex[c];
    s(i, j) += v;
    if (i != j) s(j, i) += v;
  }
  return s;
}

CVec3 evaluate_displacement(const Spaces& spaces, const CVector& coeffs,
                            const Vec3& xi) {
  const RVector psi = spaces.displacement_basis().values(xi);
  const int nw = spaces.displacement_scalars();
  CVec3 u;
  for (int r = 0; r < 3; ++r) {
    u[r] = (coeffs.segment(r * nw, nw).transpose() * psi.cast<Complex>())(0);
  }
  return u;
}

CMat3 evaluate_displacement_gradient(const Spaces& spaces, const ElementGeometry& geo,
                                     const CVector& coeffs, const Vec3& xi) {
  const int nw = spaces.displacement_scalars();
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> g(nw, 3);
  spaces.displacement_basis().gradients(xi.data(), g.data());
  const RMatrix phys = g * geo.inverse;  // row a: grad psi_a in x
  CMat3 grad;
  for (int r = 0; r < 3; ++r) {
    grad.row(r) = coeffs.segment(r * nw, nw).transpose() * phys.cast<Complex>();
  }
  return grad;
}

CVec3 evaluate_trace(const Spaces& spaces, const CVector& coeffs, const Vec2& st) {
  const RVector mu = spaces.trace_basis().values(st);
  const int nm = spaces.trace_scalars();
  CVec3 v;
  for (int r = 0; r < 3; ++r) {
    v[r] = (coeffs.segment(r * nm, nm).transpose() * mu.cast<Complex>())(0);
  }
  return v;
}

Vec2 face_coordinates(const FaceGeometry& fg, const Vec3& x) {
  Eigen::Matrix<double, 3, 2> e;
  e.col(0) = fg.edge1;
  e.col(1) = fg.edge2;
  return (e.transpose() * e).ldlt().solve(e.transpose() * (x - fg.origin));
}

}  // namespace hdg
