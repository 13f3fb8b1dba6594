#include "hdg/materials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdg {

namespace {

void require_symmetric(const Mat3& xi, const char* who) {
  if (relative_asymmetry(xi) > 1e-12) {
    throw std::invalid_argument(std::string(who) + ": matrix is not symmetric");
  }
}

void require_moduli(double lambda, double mu) {
  if (!(mu > 0.0) || !(2.0 * mu + 3.0 * lambda > 0.0)) {
    throw std::invalid_argument("material: degenerate moduli (need mu > 0, 2mu+3lambda > 0)");
  }
}

}  // namespace

double relative_asymmetry(const Mat3& m) {
  const double scale = std::max(m.norm(), 1e-300);
  return (m - m.transpose()).norm() / scale;
}

double relative_asymmetry(const CMat3& m) {
  const double scale = std::max(m.norm(), 1e-300);
  return (m - m.transpose()).norm() / scale;
}

Material Material::constant_isotropic(double lambda, double mu, double rho) {
  require_moduli(lambda, mu);
  if (!(rho > 0.0)) throw std::invalid_argument("material: density must be positive");
  Material m;
  m.kind_ = Kind::constant_isotropic;
  m.lambda_ = lambda;
  m.mu_ = mu;
  m.rho_ = rho;
  return m;
}

Material Material::variable_preset() {
  Material m;
  m.kind_ = Kind::variable_preset;
  return m;
}

Material Material::custom(CustomLaw law) {
  if (!law.density || !law.stiffness || !law.compliance || !law.compliance_bound) {
    throw std::invalid_argument("material: custom law needs all four callables");
  }
  Material m;
  m.kind_ = Kind::custom;
  m.custom_ = std::move(law);
  return m;
}

std::string Material::name() const {
  switch (kind_) {
    case Kind::constant_isotropic: return "constant";
    case Kind::variable_preset: return "variable";
    case Kind::custom: return "custom";
  }
  return "?";
}

std::optional<IsotropicSample> Material::isotropic(const Vec3& x) const {
  IsotropicSample s;
  switch (kind_) {
    case Kind::constant_isotropic:
      s.lambda = lambda_;
      s.mu = mu_;
      s.rho = rho_;
      return s;
    case Kind::variable_preset: {
      const double x1 = x[0], x2 = x[1], x3 = x[2];
      s.rho = 1.0 + x.squaredNorm();
      s.lambda = 2.0 + 0.2 * x1 * x1 + 0.3 * x2 * x2 + 0.04 * x3 * x3;
      s.mu = 3.0 + 0.5 * x2 * x2 + 0.03 * x3 * x3;
      s.grad_rho = 2.0 * x;
      s.grad_lambda = Vec3(0.4 * x1, 0.6 * x2, 0.08 * x3);
      s.grad_mu = Vec3(0.0, 1.0 * x2, 0.06 * x3);
      return s;
    }
    case Kind::custom: return std::nullopt;
  }
  return std::nullopt;
}

double Material::density(const Vec3& x) const {
  if (kind_ == Kind::custom) return custom_.density(x);
  return isotropic(x)->rho;
}

Mat3 Material::apply_stiffness(const Vec3& x, const Mat3& xi) const {
  require_symmetric(xi, "apply_stiffness");
  if (kind_ == Kind::custom) return custom_.stiffness(x, xi);
  const IsotropicSample s = *isotropic(x);
  return 2.0 * s.mu * xi + s.lambda * xi.trace() * Mat3::Identity();
}

CMat3 Material::apply_stiffness(const Vec3& x, const CMat3& xi) const {
  const CMat3 re = apply_stiffness(x, Mat3(xi.real())).cast<Complex>();
  const CMat3 im = apply_stiffness(x, Mat3(xi.imag())).cast<Complex>();
  return re + kI * im;
}

Mat3 Material::apply_compliance(const Vec3& x, const Mat3& xi) const {
  require_symmetric(xi, "apply_compliance");
  if (kind_ == Kind::custom) return custom_.compliance(x, xi);
  const IsotropicSample s = *isotropic(x);
  require_moduli(s.lambda, s.mu);
  const double two_mu = 2.0 * s.mu;
  return xi / two_mu -
         (s.lambda / (two_mu * (two_mu + 3.0 * s.lambda))) * xi.trace() * Mat3::Identity();
}

CMat3 Material::apply_compliance(const Vec3& x, const CMat3& xi) const {
  const CMat3 re = apply_compliance(x, Mat3(xi.real())).cast<Complex>();
  const CMat3 im = apply_compliance(x, Mat3(xi.imag())).cast<Complex>();
  return re + kI * im;
}

double Material::compliance_bound(const Vec3& x) const {
  if (kind_ == Kind::custom) return custom_.compliance_bound(x);
  const IsotropicSample s = *isotropic(x);
  require_moduli(s.lambda, s.mu);
  return std::max(1.0 / (2.0 * s.mu), 1.0 / (2.0 * s.mu + 3.0 * s.lambda));
}

std::pair<double, double> Material::wavespeeds(const Vec3& x) const {
  const auto s = isotropic(x);
  if (!s) throw std::invalid_argument("wavespeeds: defined for isotropic materials only");
  if (!(s->rho > 0.0) || !(s->mu > 0.0) || !(s->lambda + 2.0 * s->mu > 0.0)) {
    throw std::invalid_argument("wavespeeds: degenerate moduli or density");
  }
  return {std::sqrt((s->lambda + 2.0 * s->mu) / s->rho), std::sqrt(s->mu / s->rho)};
}

}  // namespace hdg
