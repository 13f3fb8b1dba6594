#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hdg/quadrature.hpp"
#include "hdg/types.hpp"

namespace hdg {

/// Dimension of P_degree on a simplex of dimension `dim` (2 or 3).
int polynomial_dimension(int dim, int degree);

/// Scalar basis of P_degree on a reference simplex, orthonormal in
/// L2(reference simplex). Functions are ordered hierarchically: the first
/// polynomial_dimension(dim, r) functions span P_r for every r <= degree.
class SimplexBasis {
 public:
  SimplexBasis(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponents_.size()); }

  /// Values at a reference point (length dim()).
  void values(const double* xi, double* out) const;
  /// Reference gradients, row-major: out[i*dim + d] = d(phi_i)/d(xi_d).
  void gradients(const double* xi, double* out) const;

  RVector values(const Vec3& xi) const;
  RVector values(const Vec2& xi) const;

 private:
  void monomials(const double* xi, double* out) const;

  int dim_;
  int degree_;
  std::vector<std::array<int, 3>> exponents_;
  RMatrix coeffs_;  // phi_i = sum_j coeffs_(j, i) m_j
};

/// Packing order of symmetric 3x3 components: (11, 22, 33, 23, 13, 12).
inline constexpr std::array<std::pair<int, int>, 6> kSymmetricIndex{
    {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};

/// Unit symmetric matrix for packed component c; off-diagonal entries are
/// unscaled (both (i,j) and (j,i) are 1).
Mat3 symmetric_unit(int c);

/// Frobenius norm squared of symmetric_unit(c): 1 on the diagonal, 2 off it.
inline double symmetric_unit_norm2(int c) { return c < 3 ? 1.0 : 2.0; }

/// Reference bases and quadrature for the three discrete spaces:
///   V: symmetric-matrix valued P_k on tetrahedra (6 components),
///   W: vector valued P_{k+1} on tetrahedra (3 components),
///   M: vector valued P_k on faces (3 components).
/// Local dof ordering is component-major, then scalar basis index.
class Spaces {
 public:
  /// quad_degree < 0 selects the default exactness 2(k+1)+2.
  explicit Spaces(int k, int quad_degree = -1);

  int k() const { return k_; }
  int quad_degree() const { return cell_rule_.degree; }

  const SimplexBasis& stress_basis() const { return stress_; }
  const SimplexBasis& displacement_basis() const { return displacement_; }
  const SimplexBasis& trace_basis() const { return trace_; }

  const TetRule& cell_rule() const { return cell_rule_; }
  const TriRule& face_rule() const { return face_rule_; }

  int stress_scalars() const { return stress_.size(); }
  int displacement_scalars() const { return displacement_.size(); }
  int trace_scalars() const { return trace_.size(); }

  int dim_v() const { return 6 * stress_.size(); }
  int dim_w() const { return 3 * displacement_.size(); }
  int dim_m() const { return 3 * trace_.size(); }

  /// Tabulated values at cell_rule() points: (npoints x nscalars).
  const RMatrix& stress_table() const { return stress_values_; }
  const RMatrix& displacement_table() const { return displacement_values_; }
  /// Reference gradients at cell_rule() point q: (nscalars x 3).
  const RMatrix& stress_gradient_table(int q) const { return stress_grads_[q]; }
  const RMatrix& displacement_gradient_table(int q) const {
    return displacement_grads_[q];
  }
  /// Trace basis values at face_rule() points: (npoints x nscalars).
  const RMatrix& trace_table() const { return trace_values_; }

 private:
  int k_;
  SimplexBasis stress_;
  SimplexBasis displacement_;
  SimplexBasis trace_;
  TetRule cell_rule_;
  TriRule face_rule_;
  RMatrix stress_values_;
  RMatrix displacement_values_;
  std::vector<RMatrix> stress_grads_;
  std::vector<RMatrix> displacement_grads_;
  RMatrix trace_values_;
};

}  // namespace hdg
