#pragma once

#include <functional>

#include "hdg/basis.hpp"
#include "hdg/mesh.hpp"

namespace hdg {

using VectorField = std::function<CVec3(const Vec3&)>;
using StressField = std::function<CMat3(const Vec3&)>;

/// L2(K) projection onto V|_K. Throws std::invalid_argument if the field is
/// not symmetric at a quadrature point (relative asymmetry > 1e-12).
CVector project_stress(const Mesh& mesh, const Spaces& spaces, int element,
                       const StressField& field);

/// L2(K) projection onto W|_K.
CVector project_displacement(const Mesh& mesh, const Spaces& spaces, int element,
                             const VectorField& field);

/// L2(F) projection P_M onto P_k(F; C^3) in the face's own frame.
CVector project_trace(const Mesh& mesh, const Spaces& spaces, int face,
                      const VectorField& field);

/// Field reconstruction from local coefficients at a reference point.
CMat3 evaluate_stress(const Spaces& spaces, const CVector& coeffs, const Vec3& xi);
CVec3 evaluate_displacement(const Spaces& spaces, const CVector& coeffs,
                            const Vec3& xi);
/// Physical gradient G(i,j) = d u_i / d x_j.
CMat3 evaluate_displacement_gradient(const Spaces& spaces, const ElementGeometry& geo,
                                     const CVector& coeffs, const Vec3& xi);
CVec3 evaluate_trace(const Spaces& spaces, const CVector& coeffs, const Vec2& st);

/// Reference coordinates within the face frame of a point on face f.
Vec2 face_coordinates(const FaceGeometry& fg, const Vec3& x);

}  // namespace hdg
