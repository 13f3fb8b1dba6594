#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "doctest.h"
#include "hdg/local_ops.hpp"

using namespace hdg;

namespace {

CVector random_cvector(int n, std::mt19937& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  CVector v(n);
  for (auto& x : v) x = Complex(N(rng), N(rng));
  return v;
}

double rel(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

}  // namespace

TEST_CASE("alpha values per variant") {
  const double k = 2.0;
  CHECK(flux_alpha(FluxVariant::first_order, k) == Complex(0.0, 2.0));
  CHECK(flux_alpha(FluxVariant::time_reversed, k) == Complex(0.0, -2.0));
  CHECK(flux_alpha(FluxVariant::kappa_scaled, k) == Complex(0.0, 4.0));
  CHECK(flux_alpha(FluxVariant::conservative, k) == Complex(1.0, 0.0));
  CHECK(parse_flux_variant("time-reversal") == FluxVariant::time_reversed);
  CHECK(parse_flux_variant("second-order") == FluxVariant::conservative);
  CHECK_THROWS(parse_flux_variant("upwind"));
}

TEST_CASE("divergence of constants vanishes; compliance block for k=0") {
  const Mesh mesh = build_structured_cube(1);
  const Material mat = Material::constant_isotropic(1.0, 1.0, 1.0);
  const Spaces s(0);
  const LocalBlocks b = assemble_local_blocks(mesh, s, mat, 2);
  CHECK(b.D.cwiseAbs().maxCoeff() < 1e-14);  // all V functions are constant at k=0
  const double vol = mesh.volume(2);
  for (int c = 0; c < 6; ++c) {
    for (int d = 0; d < 6; ++d) {
      const Mat3 ae = mat.apply_compliance(Vec3::Zero(), symmetric_unit(c));
      const double pairing = (ae.array() * symmetric_unit(d).array()).sum();
      // phi_0 = sqrt(6) on the reference element, so the block is det(J) * pairing
      CHECK(std::abs(b.A(c, d) - 6.0 * vol * pairing) < 1e-14);
    }
  }
  const Spaces s1(1);
  const LocalBlocks b1 = assemble_local_blocks(mesh, s1, mat, 2);
  const int ns = s1.stress_scalars();
  for (int c = 0; c < 6; ++c) CHECK(b1.D.col(c * ns).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Green identity closes the element blocks") {
  const Mesh mesh = build_structured_cube(2);
  const Material mat = Material::variable_preset();
  const Spaces s(2);
  const int e = 17;
  const LocalBlocks b = assemble_local_blocks(mesh, s, mat, e);
  const ElementGeometry geo = mesh.geometry(e);
  const int ns = s.stress_scalars(), nw = s.displacement_scalars();
  const TetRule cell = tet_quadrature(10);
  const TriRule tri = tri_quadrature(10);
  // (sigma, grad w) and <sigma n, w> by independent quadrature
  RMatrix volume = RMatrix::Zero(s.dim_w(), s.dim_v());
  RMatrix boundary = RMatrix::Zero(s.dim_w(), s.dim_v());
  for (std::size_t q = 0; q < cell.size(); ++q) {
    const RVector phi = s.stress_basis().values(cell.points[q]);
    Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> g(nw, 3);
    s.displacement_basis().gradients(cell.points[q].data(), g.data());
    const RMatrix grad = g * geo.inverse;
    const double w = cell.weights[q] * geo.det;
    for (int c = 0; c < 6; ++c)
      for (int i = 0; i < ns; ++i)
        for (int r = 0; r < 3; ++r)
          for (int a = 0; a < nw; ++a)
            volume(r * nw + a, c * ns + i) += w * phi[i] * (symmetric_unit(c).row(r) * grad.row(a).transpose())(0);
  }
  for (int lf = 0; lf < 4; ++lf) {
    const Vec3 nrm = mesh.outward_normal(e, lf);
    const FaceGeometry fg = mesh.face_geometry(mesh.element_faces(e)[lf].face);
    for (std::size_t q = 0; q < tri.size(); ++q) {
      const Vec3 xi = geo.to_reference(fg.to_physical(tri.points[q]));
      const RVector phi = s.stress_basis().values(xi);
      const RVector psi = s.displacement_basis().values(xi);
      const double w = tri.weights[q] * 2 * fg.area;
      for (int c = 0; c < 6; ++c) {
        const Vec3 en = symmetric_unit(c) * nrm;
        for (int r = 0; r < 3; ++r)
          boundary.block(r * nw, c * ns, nw, ns) += (w * en[r]) * psi * phi.transpose();
      }
    }
  }
  CHECK((b.D + volume - boundary).cwiseAbs().maxCoeff() <= 1e-12 * boundary.cwiseAbs().maxCoeff());
}

TEST_CASE("block symmetry, definiteness and the tau scaling") {
  const Mesh mesh = build_structured_cube(2);
  const Material mat = Material::variable_preset();
  const Spaces s(1);
  const LocalBlocks b = assemble_local_blocks(mesh, s, mat, 5);
  for (const RMatrix* m : {&b.A, &b.M, &b.T22, &b.T11}) {
    CHECK((*m - m->transpose()).cwiseAbs().maxCoeff() <= 1e-13 * m->cwiseAbs().maxCoeff());
  }
  auto min_eig = [](const RMatrix& m) { return Eigen::SelfAdjointEigenSolver<RMatrix>(m).eigenvalues().minCoeff(); };
  CHECK(min_eig(b.A) > 0.0);
  CHECK(min_eig(b.M) > 0.0);
  CHECK(min_eig(b.T22) > 0.0);
  CHECK(min_eig(b.T11) >= -1e-12 * b.T11.norm());
  CHECK(b.tau == doctest::Approx(1.0 / mesh.h(5)).epsilon(1e-15));

  // mu^T T22 mu equals h^-1 ||mu||^2 over dK
  std::mt19937 rng(2);
  std::normal_distribution<double> N(0.0, 1.0);
  RVector mu(b.T22.rows());
  for (auto& x : mu) x = N(rng);
  double norm2 = 0.0;
  const int dm = s.dim_m(), nm = s.trace_scalars();
  for (int lf = 0; lf < 4; ++lf) {
    const double area = mesh.face_geometry(mesh.element_faces(5)[lf].face).area;
    for (std::size_t q = 0; q < s.face_rule().size(); ++q) {
      for (int r = 0; r < 3; ++r) {
        const double v = s.trace_table().row(q).dot(mu.segment(lf * dm + r * nm, nm));
        norm2 += s.face_rule().weights[q] * 2 * area * v * v;
      }
    }
  }
  CHECK(mu.dot(b.T22 * mu) == doctest::Approx(norm2 / mesh.h(5)).epsilon(1e-13));
}

TEST_CASE("factorization reproduces the identity; zero data gives zero") {
  const Mesh mesh = build_structured_cube(1);
  const Material mat = Material::variable_preset();
  const Spaces s(2);
  std::mt19937 rng(4);
  for (FluxVariant v : {FluxVariant::first_order, FluxVariant::time_reversed, FluxVariant::kappa_scaled,
                        FluxVariant::conservative}) {
    const LocalBlocks b = assemble_local_blocks(mesh, s, mat, 1);
    const LocalFactorization f = factorize_local(b, 1.3, v);
    const CMatrix l = local_matrix(b, 1.3, f.alpha);
    const CVector r = random_cvector(static_cast<int>(l.rows()), rng);
    CHECK((l * f.solve(r) - r).norm() <= 1e-11 * r.norm());
    const CondensedElement c = condense(f, b);
    const CVector x = recover(f, c, CVector::Zero(b.T22.rows()), load_lift(f, b, CVector::Zero(s.dim_w())));
    CHECK(x.norm() == 0.0);
    CHECK(f.condition_estimate() > 1.0);
  }
}

TEST_CASE("conservative variant at kappa = 0 factorizes everywhere and stays real") {
  const Mesh mesh = build_structured_cube(2);
  const Material mat = Material::constant_isotropic(1.0, 1.0, 1.0);
  const Spaces s(1);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const LocalBlocks b = assemble_local_blocks(mesh, s, mat, e);
    const LocalFactorization f = factorize_local(b, 0.0, FluxVariant::conservative);
    const CondensedElement c = condense(f, b);
    CHECK(c.schur.imag().cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("condensation agrees with the first-order hybridization formula") {
  const Mesh mesh = build_structured_cube(1);
  const Material mat = Material::variable_preset();
  const Spaces s(1);
  const double kappa = 1.7;
  const LocalBlocks b = assemble_local_blocks(mesh, s, mat, 3);
  const CondensedElement c = condense(factorize_local(b, kappa, FluxVariant::first_order), b);

  const int nv = s.dim_v(), nw = s.dim_w();
  CMatrix big(nv + nw, nv + nw);
  big.topLeftCorner(nv, nv) = kI * kappa * b.A.cast<Complex>();
  big.topRightCorner(nv, nw) = -b.D.transpose().cast<Complex>();
  big.bottomLeftCorner(nw, nv) = b.D.cast<Complex>();
  big.bottomRightCorner(nw, nw) = kI * kappa * b.M.cast<Complex>() + b.T11.cast<Complex>();
  CMatrix right(nv + nw, b.T22.cols()), left(b.T22.rows(), nv + nw);
  right << b.N.transpose().cast<Complex>(), -b.T12.cast<Complex>();
  left << b.N.cast<Complex>(), b.T12.transpose().cast<Complex>();
  const CMatrix first = left * big.fullPivLu().solve(right) + b.T22.cast<Complex>();
  CHECK(rel(c.schur, kI * kappa * first) <= 1e-11);
}

TEST_CASE("local solve agrees with a dense solve of the uncondensed element system") {
  const Mesh mesh = build_structured_cube(1);
  const Material mat = Material::variable_preset();
  const Spaces s(1);
  std::mt19937 rng(8);
  const LocalBlocks b = assemble_local_blocks(mesh, s, mat, 0);
  const double kappa = 0.8;
  const LocalFactorization f = factorize_local(b, kappa, FluxVariant::kappa_scaled);
  const CondensedElement c = condense(f, b);
  const CVector uh = random_cvector(static_cast<int>(b.T22.rows()), rng);
  const CVector load = random_cvector(s.dim_w(), rng);
  const CVector x = recover(f, c, uh, load_lift(f, b, load));

  const int nl = s.dim_v() + s.dim_w(), nf = static_cast<int>(uh.size());
  CMatrix full = CMatrix::Zero(nl + nf, nl + nf);
  full.topLeftCorner(nl, nl) = local_matrix(b, kappa, f.alpha);
  full.topRightCorner(nl, nf) = -local_trace_coupling(b, f.alpha);
  full.bottomRightCorner(nf, nf) = CMatrix::Identity(nf, nf);
  CVector rhs = CVector::Zero(nl + nf);
  rhs.segment(s.dim_v(), s.dim_w()) = -load;
  rhs.tail(nf) = uh;
  const CVector dense = full.fullPivLu().solve(rhs);
  CHECK((dense.head(nl) - x).norm() <= 1e-11 * x.norm());
}

TEST_CASE("recovery is exact for linear displacements") {
  const Mesh mesh = build_structured_cube(2);
  const Material mat = Material::constant_isotropic(1.0, 1.0, 1.0);
  const Spaces s(1);
  const double kappa = 1.0;
  Mat3 g;
  g << 0.3, -1.0, 0.2, 0.5, 0.1, 0.7, -0.4, 0.9, -0.2;
  const Vec3 u0(1.0, -2.0, 0.5);
  const VectorField u = [&](const Vec3& x) { return CVec3((u0 + g * x).cast<Complex>()); };
  const Mat3 sigma = mat.apply_stiffness(Vec3::Zero(), Mat3(0.5 * (g + g.transpose())));
  // div sigma = 0, so f = kappa^2 rho u
  const VectorField f = [&](const Vec3& x) { return CVec3(kappa * kappa * u(x)); };
  for (FluxVariant v : {FluxVariant::first_order, FluxVariant::conservative}) {
    for (int e : {0, 11, 40}) {
      const LocalBlocks b = assemble_local_blocks(mesh, s, mat, e);
      const LocalFactorization fact = factorize_local(b, kappa, v);
      const CondensedElement c = condense(fact, b);
      CVector trace(b.T22.rows());
      for (int lf = 0; lf < 4; ++lf) {
        trace.segment(lf * s.dim_m(), s.dim_m()) = project_trace(mesh, s, mesh.element_faces(e)[lf].face, u);
      }
      const CVector x = recover(fact, c, trace, load_lift(fact, b, local_load(mesh, s, e, f)));
      const CVector sv = x.head(s.dim_v()), uv = x.tail(s.dim_w());
      const ElementGeometry geo = mesh.geometry(e);
      for (const Vec3 xi : {Vec3(0.1, 0.2, 0.3), Vec3(0.25, 0.25, 0.25)}) {
        CHECK((evaluate_displacement(s, uv, xi) - u(geo.to_physical(xi))).norm() < 1e-11);
        CHECK((evaluate_stress(s, sv, xi) - sigma.cast<Complex>()).norm() < 1e-11 * sigma.norm());
      }
      // plugging back into the local equations
      CVector rhs = local_trace_coupling(b, fact.alpha) * trace;
      rhs.tail(s.dim_w()) -= local_load(mesh, s, e, f);
      CHECK((local_matrix(b, kappa, fact.alpha) * x - rhs).norm() <= 1e-10 * rhs.norm());
    }
  }
}

TEST_CASE("first-order local block has no nullspace at small kappa h") {
  const Mesh mesh = build_structured_cube(1);
  const Material mat = Material::variable_preset();
  const Spaces s(1);
  const LocalBlocks b = assemble_local_blocks(mesh, s, mat, 4);
  const double kappa = 0.05 / b.h;
  const CMatrix l = local_matrix(b, kappa, flux_alpha(FluxVariant::first_order, kappa));
  Eigen::JacobiSVD<CMatrix> svd(l, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  CHECK(sv[sv.size() - 1] > 1e-8 * sv[0]);
  // the tau-term of the smallest singular vector is not zero either
  const CVector candidate = svd.matrixV().col(sv.size() - 1);
  const CVector u = candidate.tail(s.dim_w());
  const double stab = std::real(u.dot(b.T11.cast<Complex>() * u));
  CHECK(stab >= 0.0);
}

TEST_CASE("degenerate blocks raise a singular-local-solver error naming the element") {
  const Mesh mesh = build_structured_cube(1);
  const Spaces s(1);
  LocalBlocks b = assemble_local_blocks(mesh, s, Material::constant_isotropic(1, 1, 1), 3);
  b.A.setZero();
  b.D.setZero();
  try {
    factorize_local(b, 1.0, FluxVariant::first_order);
    FAIL("expected SingularLocalSolver");
  } catch (const SingularLocalSolver& err) {
    CHECK(err.element() == 3);
  }
}
