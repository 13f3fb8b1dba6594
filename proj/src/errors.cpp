#include "hdg/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hdg {
namespace {

void check_match(const Mesh& mesh, const Spaces& spaces, const SolutionFields& sol) {
  if (sol.k != spaces.k() || static_cast<int>(sol.stress.size()) != mesh.num_elements() ||
      static_cast<int>(sol.displacement.size()) != mesh.num_elements() ||
      static_cast<int>(sol.trace.size()) != mesh.num_faces()) {
    throw std::invalid_argument("solution does not match the mesh or polynomial degree");
  }
  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (sol.stress[e].size() != spaces.dim_v() || sol.displacement[e].size() != spaces.dim_w()) {
      throw std::invalid_argument("solution coefficient size does not match the spaces");
    }
  }
}

// Frobenius pairing with conjugation on the second argument.
Complex frob_conj(const CMat3& a, const CMat3& b) { return (a.array() * b.conjugate().array()).sum(); }

}  // namespace

int error_quadrature_degree(int k) { return 2 * (k + 2) + 4; }

ErrorReport compute_errors(const Mesh& mesh, const Spaces& spaces, const SolutionFields& sol,
                           const ExactCase& exact, int quad_degree) {
  check_match(mesh, spaces, sol);
  const TetRule rule = tet_quadrature(quad_degree < 0 ? error_quadrature_degree(spaces.k()) : quad_degree);
  ErrorReport rep;
  rep.n = mesh.n();
  rep.k = spaces.k();
  rep.h = mesh.max_h();
  rep.kappa = sol.kappa;
  rep.variant = sol.variant;
  double eu = 0.0, es = 0.0, nu = 0.0, ns = 0.0, skel = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = mesh.geometry(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 x = geo.to_physical(rule.points[q]);
      const double w = rule.weights[q] * geo.det;
      const CVec3 u = exact.displacement(x);
      const CMat3 s = exact.stress(x);
      eu += w * (u - evaluate_displacement(spaces, sol.displacement[e], rule.points[q])).squaredNorm();
      es += w * (s - evaluate_stress(spaces, sol.stress[e], rule.points[q])).squaredNorm();
      nu += w * u.squaredNorm();
      ns += w * s.squaredNorm();
    }
    const double tau = 1.0 / mesh.h(e);
    for (const ElementFace& ef : mesh.element_faces(e)) {
      const CVector pu = project_trace(mesh, spaces, ef.face, exact.displacement_field());
      skel += tau * 2.0 * mesh.face_geometry(ef.face).area * (pu - sol.trace[ef.face]).squaredNorm();
    }
  }
  rep.err_u = std::sqrt(eu);
  rep.err_sigma = std::sqrt(es);
  rep.norm_u = std::sqrt(nu);
  rep.norm_sigma = std::sqrt(ns);
  rep.rel_err_u = rep.norm_u > 0 ? rep.err_u / rep.norm_u : rep.err_u;
  rep.rel_err_sigma = rep.norm_sigma > 0 ? rep.err_sigma / rep.norm_sigma : rep.err_sigma;
  rep.err_skeleton = std::sqrt(skel);
  return rep;
}

std::vector<Rate> eoc(const std::vector<double>& h, const std::vector<double>& errors) {
  if (h.size() != errors.size() || h.size() < 2) {
    throw std::invalid_argument("eoc needs at least two levels");
  }
  std::vector<Rate> out;
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (h[i] == h[i - 1]) throw std::invalid_argument("eoc needs distinct mesh sizes");
    Rate r;
    if (errors[i] <= 0.0 || errors[i - 1] <= 0.0) {
      r.saturated = true;
      r.value = std::numeric_limits<double>::quiet_NaN();
    } else {
      r.value = std::log(errors[i - 1] / errors[i]) / std::log(h[i - 1] / h[i]);
    }
    out.push_back(r);
  }
  return out;
}

EnergyIdentity energy_identity(const Mesh& mesh, const Spaces& spaces, const SolutionFields& sol,
                               const ExactCase& exact) {
  check_match(mesh, spaces, sol);
  if (sol.variant != FluxVariant::first_order || sol.kappa <= 0.0) {
    throw std::invalid_argument("energy identity is stated for the first-order variant with kappa > 0");
  }
  const double kappa = sol.kappa;
  const Complex to_first = kI / kappa;  // sigma = (i / kappa) sigma~
  const int dm = spaces.dim_m();
  const TetRule& rule = spaces.cell_rule();
  const TriRule& frule = spaces.face_rule();
  const Material& mat = exact.material;

  std::vector<CVector> pm_u(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) pm_u[f] = project_trace(mesh, spaces, f, exact.displacement_field());

  Complex lhs = 0.0, rhs = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = mesh.geometry(e);
    const LocalBlocks b = assemble_local_blocks(mesh, spaces, mat, e);
    const CVector pi_s = to_first * project_stress(mesh, spaces, e, exact.stress_field());
    const CVector pi_u = project_displacement(mesh, spaces, e, exact.displacement_field());
    const CVector es = pi_s - to_first * sol.stress[e];
    const CVector eu = pi_u - sol.displacement[e];

    // LHS from the discrete blocks
    const Complex a_norm = es.dot(b.A.cast<Complex>() * es);
    const Complex rho_norm = eu.dot(b.M.cast<Complex>() * eu);
    Complex jump = 0.0;
    std::array<CVector, 4> jump_coeffs;
    for (int lf = 0; lf < 4; ++lf) {
      const int f = mesh.element_faces(e)[lf].face;
      const double mass = b.face_mass[lf];
      const CVector pm_eu = b.trace[lf].cast<Complex>() * eu / mass;
      jump_coeffs[lf] = pm_eu - (pm_u[f] - sol.trace[f]);
      jump += b.tau * mass * jump_coeffs[lf].squaredNorm();
    }
    lhs += kI * kappa * (a_norm - rho_norm) + jump;

    // RHS by quadrature of the projection errors
    Complex vol = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3& xi = rule.points[q];
      const Vec3 x = geo.to_physical(xi);
      const double w = rule.weights[q] * geo.det;
      const CMat3 eps_s = to_first * exact.stress(x) - evaluate_stress(spaces, pi_s, xi);
      const CMat3 es_x = evaluate_stress(spaces, es, xi);
      const CVec3 eps_u = exact.displacement(x) - evaluate_displacement(spaces, pi_u, xi);
      const CVec3 eu_x = evaluate_displacement(spaces, eu, xi);
      vol += w * (kI * kappa * frob_conj(mat.apply_compliance(x, eps_s), es_x) -
                  kI * kappa * mat.density(x) * (eps_u.conjugate().cwiseProduct(eu_x)).sum());
    }
    Complex surf = 0.0;
    for (int lf = 0; lf < 4; ++lf) {
      const int f = mesh.element_faces(e)[lf].face;
      const FaceGeometry fg = mesh.face_geometry(f);
      const Vec3 nrm = mesh.outward_normal(e, lf);
      const CVector ehat = pm_u[f] - sol.trace[f];
      CVector pm_eps = CVector::Zero(dm);  // P_M eps_u on this face
      for (std::size_t q = 0; q < frule.size(); ++q) {
        const Vec2& st = frule.points[q];
        const Vec3 x = fg.to_physical(st);
        const Vec3 xi = geo.to_reference(x);
        const double w = frule.weights[q] * 2.0 * fg.area;
        const CMat3 eps_s = to_first * exact.stress(x) - evaluate_stress(spaces, pi_s, xi);
        const CVec3 eu_x = evaluate_displacement(spaces, eu, xi);
        const CVec3 ehat_x = evaluate_trace(spaces, ehat, st);
        surf += w * ((eps_s.conjugate() * nrm.cast<Complex>()).cwiseProduct(eu_x - ehat_x)).sum();
      }
      pm_eps = project_trace(mesh, spaces, f, exact.displacement_field()) -
               b.trace[lf].cast<Complex>() * pi_u / b.face_mass[lf];
      // <tau P_M conj(eps_u), P_M e_u - e^> with orthonormal face coefficients
      surf += b.tau * b.face_mass[lf] * (pm_eps.conjugate().cwiseProduct(jump_coeffs[lf])).sum();
    }
    rhs -= vol + surf;
  }
  return {lhs, rhs};
}

}  // namespace hdg
