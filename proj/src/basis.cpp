#include "hdg/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace hdg {

int polynomial_dimension(int dim, int degree) {
  if (degree < 0) return 0;
  if (dim == 2) return (degree + 1) * (degree + 2) / 2;
  if (dim == 3) return (degree + 1) * (degree + 2) * (degree + 3) / 6;
  throw std::invalid_argument("polynomial_dimension: dim must be 2 or 3");
}

SimplexBasis::SimplexBasis(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("SimplexBasis: dim must be 2 or 3");
  }
  if (degree < 0 || degree > 15) {
    throw std::invalid_argument("SimplexBasis: degree must be in 0..15");
  }

  for (int total = 0; total <= degree; ++total) {
    if (dim == 2) {
      for (int b = 0; b <= total; ++b) exponents_.push_back({total - b, b, 0});
    } else {
      for (int c = 0; c <= total; ++c) {
        for (int b = 0; b <= total - c; ++b) {
          exponents_.push_back({total - b - c, b, c});
        }
      }
    }
  }

  // Orthonormalize the monomials: QR of sqrt(w) * monomial table gives R with
  // R^T R = Gram matrix, so phi = m^T R^{-1} is orthonormal.
  const int n = size();
  RMatrix table;
  if (dim == 3) {
    const TetRule rule = tet_quadrature(2 * degree);
    table.resize(rule.size(), n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      RVector m(n);
      monomials(rule.points[q].data(), m.data());
      table.row(q) = std::sqrt(rule.weights[q]) * m.transpose();
    }
  } else {
    const TriRule rule = tri_quadrature(2 * degree);
    table.resize(rule.size(), n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      RVector m(n);
      monomials(rule.points[q].data(), m.data());
      table.row(q) = std::sqrt(rule.weights[q]) * m.transpose();
    }
  }
  Eigen::HouseholderQR<RMatrix> qr(table);
  const RMatrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  coeffs_ = r.triangularView<Eigen::Upper>().solve(RMatrix::Identity(n, n));
}

void SimplexBasis::monomials(const double* xi, double* out) const {
  // Centered at the reference centroid.
  const double c = dim_ == 3 ? 0.25 : 1.0 / 3.0;
  std::array<std::array<double, 16>, 3> pw{};
  for (int d = 0; d < dim_; ++d) {
    const double x = xi[d] - c;
    pw[d][0] = 1.0;
    for (int p = 1; p <= degree_; ++p) pw[d][p] = pw[d][p - 1] * x;
  }
  for (int j = 0; j < size(); ++j) {
    const auto& e = exponents_[j];
    double v = pw[0][e[0]] * pw[1][e[1]];
    if (dim_ == 3) v *= pw[2][e[2]];
    out[j] = v;
  }
}

void SimplexBasis::values(const double* xi, double* out) const {
  const int n = size();
  RVector m(n);
  monomials(xi, m.data());
  Eigen::Map<RVector>(out, n).noalias() = coeffs_.transpose() * m;
}

void SimplexBasis::gradients(const double* xi, double* out) const {
  const int n = size();
  const double c = dim_ == 3 ? 0.25 : 1.0 / 3.0;
  std::array<std::array<double, 16>, 3> pw{};
  for (int d = 0; d < dim_; ++d) {
    const double x = xi[d] - c;
    pw[d][0] = 1.0;
    for (int p = 1; p <= degree_; ++p) pw[d][p] = pw[d][p - 1] * x;
  }
  RMatrix dm(n, dim_);
  for (int j = 0; j < n; ++j) {
    const auto& e = exponents_[j];
    for (int d = 0; d < dim_; ++d) {
      if (e[d] == 0) {
        dm(j, d) = 0.0;
        continue;
      }
      double v = e[d];
      for (int o = 0; o < dim_; ++o) {
        v *= (o == d) ? pw[o][e[o] - 1] : pw[o][e[o]];
      }
      dm(j, d) = v;
    }
  }
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>>(out, n, dim_)
      .noalias() = coeffs_.transpose() * dm;
}

RVector SimplexBasis::values(const Vec3& xi) const {
  if (dim_ != 3) throw std::invalid_argument("SimplexBasis: expected 2D point");
  RVector v(size());
  values(xi.data(), v.data());
  return v;
}

RVector SimplexBasis::values(const Vec2& xi) const {
  if (dim_ != 2) throw std::invalid_argument("SimplexBasis: expected 3D point");
  RVector v(size());
  values(xi.data(), v.data());
  return v;
}

Mat3 symmetric_unit(int c) {
  Mat3 e = Mat3::Zero();
  const auto [i, j] = kSymmetricIndex.at(c);
  e(i, j) = 1.0;
  e(j, i) = 1.0;
  return e;
}

Spaces::Spaces(int k, int quad_degree)
    : k_(k),
      stress_(3, k),
      displacement_(3, k + 1),
      trace_(2, k),
      cell_rule_(tet_quadrature(quad_degree < 0 ? 2 * (k + 1) + 2 : quad_degree)),
      face_rule_(tri_quadrature(quad_degree < 0 ? 2 * (k + 1) + 2 : quad_degree)) {
  if (k < 0) throw std::invalid_argument("Spaces: k must be >= 0");
  const int nq = static_cast<int>(cell_rule_.size());
  stress_values_.resize(nq, stress_.size());
  displacement_values_.resize(nq, displacement_.size());
  stress_grads_.assign(nq, RMatrix(stress_.size(), 3));
  displacement_grads_.assign(nq, RMatrix(displacement_.size(), 3));
  for (int q = 0; q < nq; ++q) {
    const double* xi = cell_rule_.points[q].data();
    RVector v(stress_.size());
    stress_.values(xi, v.data());
    stress_values_.row(q) = v.transpose();
    RVector w(displacement_.size());
    displacement_.values(xi, w.data());
    displacement_values_.row(q) = w.transpose();

    Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> g(stress_.size(), 3);
    stress_.gradients(xi, g.data());
    stress_grads_[q] = g;
    Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> gw(
        displacement_.size(), 3);
    displacement_.gradients(xi, gw.data());
    displacement_grads_[q] = gw;
  }
  const int nf = static_cast<int>(face_rule_.size());
  trace_values_.resize(nf, trace_.size());
  for (int q = 0; q < nf; ++q) {
    RVector v(trace_.size());
    trace_.values(face_rule_.points[q].data(), v.data());
    trace_values_.row(q) = v.transpose();
  }
}

}  // namespace hdg
