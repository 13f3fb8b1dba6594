#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "hdg/basis.hpp"
#include "hdg/materials.hpp"

using namespace hdg;

namespace {

Mat3 random_symmetric(std::mt19937& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = N(rng);
  return 0.5 * (m + m.transpose());
}

Vec3 random_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  return Vec3(U(rng), U(rng), U(rng));
}

// Frobenius-consistent 6x6 representation of a linear map on symmetric matrices.
Eigen::Matrix<double, 6, 6> voigt(const std::function<Mat3(const Mat3&)>& op) {
  Eigen::Matrix<double, 6, 6> out;
  for (int c = 0; c < 6; ++c) {
    const Mat3 e = symmetric_unit(c) / std::sqrt(symmetric_unit_norm2(c));
    const Mat3 image = op(e);
    for (int d = 0; d < 6; ++d) {
      const Mat3 f = symmetric_unit(d) / std::sqrt(symmetric_unit_norm2(d));
      out(d, c) = (image.array() * f.array()).sum();
    }
  }
  return out;
}

}  // namespace

TEST_CASE("stiffness examples") {
  const Material m = Material::constant_isotropic(1.0, 1.0, 1.0);
  const Vec3 x = Vec3::Zero();
  CHECK((m.apply_stiffness(x, Mat3(Mat3::Identity())) - 5.0 * Mat3(Mat3::Identity())).norm() < 1e-15);
  Mat3 off = Mat3::Zero();
  off(0, 1) = off(1, 0) = 1.0;
  CHECK((m.apply_stiffness(x, off) - 2.0 * off).norm() < 1e-15);
  const Material v = Material::variable_preset();
  CHECK((v.apply_stiffness(Vec3(1, 1, 1), Mat3(Mat3::Identity())) - 14.68 * Mat3(Mat3::Identity())).norm() < 1e-13);
  Mat3 asym = Mat3::Zero();
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(m.apply_stiffness(x, asym), std::invalid_argument);
}

TEST_CASE("compliance inverts stiffness") {
  const Material m = Material::constant_isotropic(1.0, 1.0, 1.0);
  const Vec3 x = Vec3::Zero();
  CHECK((m.apply_compliance(x, Mat3(Mat3::Identity())) - 0.2 * Mat3(Mat3::Identity())).norm() < 1e-15);
  // numerical inverse of the 6x6 stiffness representation
  const auto c6 = voigt([&](const Mat3& e) { return m.apply_stiffness(x, e); });
  const auto a6 = voigt([&](const Mat3& e) { return m.apply_compliance(x, e); });
  CHECK((a6 - c6.inverse()).norm() < 1e-14);

  std::mt19937 rng(11);
  Mat3 dev = random_symmetric(rng);
  dev -= dev.trace() / 3.0 * Mat3::Identity();
  CHECK((m.apply_compliance(x, dev) - 0.5 * dev).norm() < 1e-14);

  const Material v = Material::variable_preset();
  for (int t = 0; t < 100; ++t) {
    const Vec3 p = random_point(rng);
    const Mat3 xi = random_symmetric(rng);
    CHECK((v.apply_compliance(p, v.apply_stiffness(p, xi)) - xi).norm() <= 1e-12 * xi.norm());
  }
  CHECK_THROWS(Material::constant_isotropic(1.0, 0.0, 1.0));
  CHECK_THROWS(Material::constant_isotropic(-1.0, 1.0, 1.0));
}

TEST_CASE("symmetry, positivity and the compliance bound") {
  const Material v = Material::variable_preset();
  std::mt19937 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Vec3 p = random_point(rng);
    const Mat3 xi = random_symmetric(rng), chi = random_symmetric(rng);
    const double lhs = (v.apply_stiffness(p, xi).array() * chi.array()).sum();
    const double rhs = (xi.array() * v.apply_stiffness(p, chi).array()).sum();
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs) + 1e-14);
    const double mu = v.isotropic(p)->mu;
    const double energy = (v.apply_stiffness(p, xi).array() * xi.array()).sum();
    CHECK(energy >= 2.0 * 3.0 * (xi.array() * xi.array()).sum() * (1 - 1e-14));
    CHECK(mu >= 3.0);
    const double ca = v.compliance_bound(p);
    CHECK((v.apply_compliance(p, xi).array() * xi.array()).sum() <= ca * (xi.array() * xi.array()).sum() * (1 + 1e-14));
    const auto a6 = voigt([&](const Mat3& e) { return v.apply_compliance(p, e); });
    const double top = Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>>(a6).eigenvalues().maxCoeff();
    CHECK(std::abs(top - ca) < 1e-14);
    const double rho = v.density(p);
    CHECK(rho >= 1.0);
    CHECK(rho <= 4.0);
  }
  CHECK(v.density(Vec3(1, 1, 1)) == doctest::Approx(4.0));
}

TEST_CASE("wavespeeds") {
  auto [cp, cs] = Material::constant_isotropic(1.0, 1.0, 1.0).wavespeeds(Vec3::Zero());
  CHECK(cp == doctest::Approx(std::sqrt(3.0)));
  CHECK(cs == doctest::Approx(1.0));
  std::tie(cp, cs) = Material::constant_isotropic(1.0, 1.0, 4.0).wavespeeds(Vec3::Zero());
  CHECK(cp == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(cs == doctest::Approx(0.5));
  std::tie(cp, cs) = Material::variable_preset().wavespeeds(Vec3::Zero());
  CHECK(cp == doctest::Approx(std::sqrt(8.0)));
  CHECK(cs == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("variable preset gradients match finite differences") {
  const Material v = Material::variable_preset();
  const Vec3 p(0.3, 0.6, 0.8);
  const auto s = *v.isotropic(p);
  const double h = 1e-6;
  for (int d = 0; d < 3; ++d) {
    Vec3 a = p, b = p;
    a[d] += h;
    b[d] -= h;
    CHECK(std::abs((v.isotropic(a)->lambda - v.isotropic(b)->lambda) / (2 * h) - s.grad_lambda[d]) < 1e-8);
    CHECK(std::abs((v.isotropic(a)->mu - v.isotropic(b)->mu) / (2 * h) - s.grad_mu[d]) < 1e-8);
    CHECK(std::abs((v.density(a) - v.density(b)) / (2 * h) - s.grad_rho[d]) < 1e-8);
  }
}
