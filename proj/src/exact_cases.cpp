#include "hdg/exact_cases.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace hdg {
namespace {

constexpr double kPi = 3.14159265358979323846;

DisplacementJet varcoeff_jet(const Vec3& p) {
  const double x = p[0], y = p[1], z = p[2];
  DisplacementJet j;
  const double cx = std::cos(kPi * x), sx = std::sin(kPi * x);
  const double cy = std::cos(kPi * y), sy = std::sin(kPi * y);
  const double cz = std::cos(kPi * z), sz = std::sin(kPi * z);
  const double pi2 = kPi * kPi;

  // u1 = cos(pi x) sin(pi y) cos(pi z)
  j.value[0] = cx * sy * cz;
  j.gradient.row(0) << -kPi * sx * sy * cz, kPi * cx * cy * cz, -kPi * cx * sy * sz;
  CMat3& h1 = j.hessian[0];
  h1(0, 0) = -pi2 * cx * sy * cz;
  h1(1, 1) = -pi2 * cx * sy * cz;
  h1(2, 2) = -pi2 * cx * sy * cz;
  h1(0, 1) = h1(1, 0) = -pi2 * sx * cy * cz;
  h1(0, 2) = h1(2, 0) = pi2 * sx * sy * sz;
  h1(1, 2) = h1(2, 1) = -pi2 * cx * cy * sz;

  // u2 = 5x^2yz + 4xyz + 3xyz^2 + 17
  j.value[1] = 5 * x * x * y * z + 4 * x * y * z + 3 * x * y * z * z + 17;
  j.gradient.row(1) << 10 * x * y * z + 4 * y * z + 3 * y * z * z,
      5 * x * x * z + 4 * x * z + 3 * x * z * z, 5 * x * x * y + 4 * x * y + 6 * x * y * z;
  CMat3& h2 = j.hessian[1];
  h2(0, 0) = 10 * y * z;
  h2(1, 1) = 0.0;
  h2(2, 2) = 6 * x * y;
  h2(0, 1) = h2(1, 0) = 10 * x * z + 4 * z + 3 * z * z;
  h2(0, 2) = h2(2, 0) = 10 * x * y + 4 * y + 6 * y * z;
  h2(1, 2) = h2(2, 1) = 5 * x * x + 4 * x + 6 * x * z;

  // u3 = cos(2y) cos(3y) cos(z) = g(y) cos(z)
  const double c2 = std::cos(2 * y), s2 = std::sin(2 * y), c3 = std::cos(3 * y), s3 = std::sin(3 * y);
  const double g = c2 * c3;
  const double g1 = -2 * s2 * c3 - 3 * c2 * s3;
  const double g2 = -13 * c2 * c3 + 12 * s2 * s3;
  const double cz1 = std::cos(z), sz1 = std::sin(z);
  j.value[2] = g * cz1;
  j.gradient.row(2) << 0.0, g1 * cz1, -g * sz1;
  CMat3& h3 = j.hessian[2];
  h3(1, 1) = g2 * cz1;
  h3(2, 2) = -g * cz1;
  h3(1, 2) = h3(2, 1) = -g1 * sz1;
  return j;
}

struct PlaneWave {
  Complex amplitude;
  Vec3 polarization;
  Vec3 direction;
  double wavenumber;  // kappa / c

  DisplacementJet operator()(const Vec3& x) const {
    const Complex ik = -kI * wavenumber;
    const Complex phase = std::exp(ik * direction.dot(x));
    DisplacementJet j;
    for (int i = 0; i < 3; ++i) {
      const Complex ui = amplitude * polarization[i] * phase;
      j.value[i] = ui;
      for (int a = 0; a < 3; ++a) {
        j.gradient(i, a) = ui * ik * direction[a];
        for (int b = 0; b < 3; ++b) j.hessian[i](a, b) = ui * ik * ik * direction[a] * direction[b];
      }
    }
    return j;
  }
};

struct Polynomial {
  // per component: coefficient for each exponent triple
  std::vector<std::array<int, 3>> exponents;
  std::array<std::vector<Complex>, 3> coeffs;

  static double pw(double x, int e) { return e <= 0 ? 1.0 : std::pow(x, e); }

  DisplacementJet operator()(const Vec3& x) const {
    DisplacementJet j;
    for (std::size_t m = 0; m < exponents.size(); ++m) {
      const auto& e = exponents[m];
      const double v = pw(x[0], e[0]) * pw(x[1], e[1]) * pw(x[2], e[2]);
      Vec3 d;
      Mat3 dd;
      for (int a = 0; a < 3; ++a) {
        std::array<int, 3> ea = e;
        const double fa = ea[a];
        ea[a] -= 1;
        d[a] = fa == 0 ? 0.0 : fa * pw(x[0], ea[0]) * pw(x[1], ea[1]) * pw(x[2], ea[2]);
        for (int b = 0; b < 3; ++b) {
          std::array<int, 3> eb = ea;
          const double fb = eb[b];
          eb[b] -= 1;
          dd(a, b) = (fa == 0 || fb <= 0) ? 0.0 : fa * fb * pw(x[0], eb[0]) * pw(x[1], eb[1]) * pw(x[2], eb[2]);
        }
      }
      for (int i = 0; i < 3; ++i) {
        const Complex c = coeffs[i][m];
        j.value[i] += c * v;
        j.gradient.row(i) += c * d.transpose().cast<Complex>();
        j.hessian[i] += c * dd.cast<Complex>();
      }
    }
    return j;
  }
};

void require_unit(const Vec3& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(what) + " must be a unit vector");
  }
}

}  // namespace

Vec3 default_shear_polarization() { return Vec3(1.0, -1.0, 0.0) / std::sqrt(2.0); }

CMat3 ExactCase::stress(const Vec3& x) const {
  const CMat3 g = jet(x).gradient;
  return material.apply_stiffness(x, CMat3(0.5 * (g + g.transpose())));
}

CVec3 ExactCase::divergence(const Vec3& x) const {
  const auto iso = material.isotropic(x);
  if (!iso) throw std::invalid_argument("exact cases need an isotropic material");
  const DisplacementJet j = jet(x);
  const CMat3& g = j.gradient;
  const Complex div = g.trace();
  CVec3 grad_div = CVec3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) grad_div[i] += j.hessian[l](l, i);
  CVec3 out;
  for (int i = 0; i < 3; ++i) {
    Complex s = iso->grad_lambda[i] * div + iso->lambda * grad_div[i];
    for (int l = 0; l < 3; ++l) {
      s += iso->grad_mu[l] * (g(i, l) + g(l, i)) + iso->mu * (j.hessian[i](l, l) + j.hessian[l](i, l));
    }
    out[i] = s;
  }
  return out;
}

CVec3 ExactCase::load(const Vec3& x) const {
  return divergence(x) + (kappa * kappa * material.density(x)) * jet(x).value;
}

VectorField ExactCase::displacement_field() const {
  return [c = *this](const Vec3& x) { return c.displacement(x); };
}

StressField ExactCase::stress_field() const {
  return [c = *this](const Vec3& x) { return c.stress(x); };
}

ProblemData ExactCase::data() const {
  ProblemData d;
  d.kappa = kappa;
  const ExactCase c = *this;
  d.load = [c](const Vec3& x) { return c.load(x); };
  d.dirichlet = [c](const Vec3& x) { return c.displacement(x); };
  d.neumann = [c](const Vec3& x, const Vec3& n) { return CVec3(c.stress(x) * n.cast<Complex>()); };
  d.impedance = [c](const Vec3& x, const Vec3& n) {
    return CVec3(c.stress(x) * n.cast<Complex>() - kI * c.kappa * c.displacement(x));
  };
  return d;
}

ExactCase make_case(const std::string& tag, double kappa, const CaseParams& p) {
  if (kappa < 0.0) throw std::invalid_argument("kappa must be nonnegative");
  ExactCase c;
  c.tag = tag;
  c.kappa = kappa;
  if (tag == "varcoeff") {
    c.material = Material::variable_preset();
    c.jet = varcoeff_jet;
    return c;
  }
  if (tag == "pwave" || tag == "swave") {
    c.material = Material::constant_isotropic(p.lambda, p.mu, p.rho);
    const Vec3& d = p.direction;
    require_unit(d, "propagation direction");
    Vec3 e = p.polarization;
    if (e.isZero(0.0)) e = tag == "pwave" ? d : default_shear_polarization();
    require_unit(e, "polarization");
    const auto [cp, cs] = c.material.wavespeeds(Vec3::Zero());
    if (tag == "pwave") {
      if ((e - d).norm() > 1e-12) throw std::invalid_argument("pressure wave needs polarization = direction");
      c.jet = PlaneWave{p.amplitude, e, d, kappa / cp};
    } else {
      if (std::abs(e.dot(d)) > 1e-12) throw std::invalid_argument("shear wave needs polarization orthogonal to direction");
      c.jet = PlaneWave{p.amplitude, e, d, kappa / cs};
    }
    return c;
  }
  if (tag == "polynomial") {
    if (p.degree < 0) throw std::invalid_argument("polynomial degree must be nonnegative");
    c.material = Material::constant_isotropic(p.lambda, p.mu, p.rho);
    Polynomial poly;
    for (int t = 0; t <= p.degree; ++t)
      for (int a = t; a >= 0; --a)
        for (int b = t - a; b >= 0; --b) poly.exponents.push_back({a, b, t - a - b});
    std::mt19937 rng(p.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (auto& comp : poly.coeffs) {
      for (std::size_t m = 0; m < poly.exponents.size(); ++m) comp.emplace_back(U(rng), U(rng));
    }
    c.jet = poly;
    return c;
  }
  throw std::invalid_argument("unknown exact case '" + tag + "'");
}

}  // namespace hdg
