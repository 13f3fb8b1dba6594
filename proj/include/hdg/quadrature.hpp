#pragma once

#include <vector>

#include <Eigen/Dense>

namespace hdg {

/// Quadrature on a reference simplex. Tetrahedron: {x,y,z >= 0, x+y+z <= 1};
/// triangle: {s,t >= 0, s+t <= 1}.
template <int Dim>
struct QuadratureRule {
  using Point = Eigen::Matrix<double, Dim, 1>;
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

using TetRule = QuadratureRule<3>;
using TriRule = QuadratureRule<2>;

/// Highest exactness degree accepted by the rule builders.
inline constexpr int kMaxQuadratureDegree = 40;

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int npoints, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Conical-product (collapsed Gauss-Legendre) rules exact for polynomials of
/// total degree <= `degree`. Throws std::invalid_argument for negative or
/// unsupported degrees.
TetRule tet_quadrature(int degree);
TriRule tri_quadrature(int degree);

}  // namespace hdg
