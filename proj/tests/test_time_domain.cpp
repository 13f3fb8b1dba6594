#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hdg/time_domain.hpp"

using namespace hdg;

namespace {

const Mesh& mixed_mesh() {
  static const Mesh mesh = tag_boundary(build_structured_cube(1), BoundaryConfig::mixed);
  return mesh;
}

RVector random_vector(int n, std::mt19937& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  RVector v(n);
  for (auto& x : v) x = N(rng);
  return v;
}

const TransientFlux kFluxes[] = {TransientFlux::accumulating, TransientFlux::dissipative,
                                 TransientFlux::conservative};

}  // namespace

TEST_CASE("flux names") {
  CHECK(parse_transient_flux("dissipative") == TransientFlux::dissipative);
  CHECK(to_string(TransientFlux::accumulating) == "accumulating");
  CHECK_THROWS(parse_transient_flux("upwind"));
}

TEST_CASE("zero data stays zero; energy is quadratic") {
  const Spaces s(1);
  const Material mat = Material::variable_preset();
  std::mt19937 rng(1);
  for (TransientFlux f : kFluxes) {
    const SemidiscreteSystem sys = assemble_semidiscrete(mixed_mesh(), s, mat, f);
    State st = make_state(sys, RVector::Zero(sys.state_size()));
    CHECK(energy(sys, st) == 0.0);
    const Stepper stepper(sys, 0.05);
    for (int i = 0; i < 10; ++i) st = stepper.step(st);
    CHECK(differential_variables(sys, st).norm() == 0.0);

    const RVector y = random_vector(sys.state_size(), rng);
    const double e1 = energy(sys, make_state(sys, y));
    CHECK(energy(sys, make_state(sys, -2.5 * y)) == doctest::Approx(6.25 * e1).epsilon(1e-13));
  }
}

TEST_CASE("slaved fields satisfy the stress and transmission equations") {
  const Spaces s(1);
  const Material mat = Material::variable_preset();
  std::mt19937 rng(2);
  for (TransientFlux f : kFluxes) {
    const SemidiscreteSystem sys = assemble_semidiscrete(mixed_mesh(), s, mat, f);
    const State st = make_state(sys, random_vector(sys.state_size(), rng));
    const RVector r_a = sys.A * st.sigma + sys.D.transpose() * st.u - sys.N.transpose() * st.trace;
    CHECK(r_a.norm() <= 1e-11 * (sys.D.transpose() * st.u).norm());
    RVector r_c;
    if (f == TransientFlux::conservative) {
      r_c = sys.N * st.sigma - sys.T12.transpose() * st.u + sys.T22 * st.trace;
    } else {
      r_c = sys.N * st.sigma + sys.sign() * (sys.T12.transpose() * st.v - sys.T22 * st.trace_rate);
    }
    CHECK(r_c.norm() <= 1e-10 * (sys.N * st.sigma).norm());
  }
}

TEST_CASE("Fourier transform of the transient operators gives the time-harmonic ones") {
  const Spaces s(1);
  const Material mat = Material::variable_preset();
  for (TransientFlux f : kFluxes) {
    const SemidiscreteSystem sys = assemble_semidiscrete(mixed_mesh(), s, mat, f);
    for (double kappa : {0.7, 2.0}) {
      ProblemData data;
      data.kappa = kappa;
      const MonolithicSystem mono = assemble_monolithic(mixed_mesh(), s, mat, data, frequency_variant(f),
                                                        MonolithicForm::second_order);
      const SparseMatrix diff = frequency_operator(sys, kappa) - mono.matrix;
      CHECK(diff.norm() <= 1e-12 * mono.matrix.norm());
    }
  }
}

TEST_CASE("semidiscrete energy laws on random states") {
  const Spaces s(1);
  const Material mat = Material::variable_preset();
  std::mt19937 rng(3);
  for (TransientFlux f : kFluxes) {
    const SemidiscreteSystem sys = assemble_semidiscrete(mixed_mesh(), s, mat, f);
    for (int t = 0; t < 20; ++t) {
      const State st = make_state(sys, random_vector(sys.state_size(), rng));
      const double rate = energy_rate(sys, st);
      if (f == TransientFlux::conservative) {
        CHECK(std::abs(rate) <= 1e-10 * energy(sys, st));
      } else {
        const double expected = sys.sign() * interface_dissipation(sys, st);
        CHECK(std::abs(rate - expected) <= 1e-10 * std::abs(expected));
        CHECK(interface_dissipation(sys, st) >= 0.0);
      }
    }
  }
}

TEST_CASE("energy matches direct quadrature of the fields") {
  const Spaces s(1);
  const Material mat = Material::variable_preset();
  const Mesh& mesh = mixed_mesh();
  const SemidiscreteSystem sys = assemble_semidiscrete(mesh, s, mat, TransientFlux::dissipative);
  std::mt19937 rng(4);
  const State st = make_state(sys, random_vector(sys.state_size(), rng));
  // same rule as the assembly, so only the block algebra is under test
  const TetRule& rule = s.cell_rule();
  double direct = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry geo = mesh.geometry(e);
    const CVector sig = st.sigma.segment(e * sys.dim_v, sys.dim_v).cast<Complex>();
    const CVector vel = st.v.segment(e * sys.dim_w, sys.dim_w).cast<Complex>();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec3 x = geo.to_physical(rule.points[q]);
      const Mat3 sg = evaluate_stress(s, sig, rule.points[q]).real();
      const Vec3 v = evaluate_displacement(s, vel, rule.points[q]).real();
      const double w = rule.weights[q] * geo.det;
      direct += w * (0.5 * (mat.apply_compliance(x, sg).array() * sg.array()).sum() + 0.5 * mat.density(x) * v.squaredNorm());
    }
  }
  CHECK(energy(sys, st) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("dissipative flux never gains energy under time stepping") {
  const Spaces s(1);
  const Material mat = Material::constant_isotropic(1, 1, 1);
  const SemidiscreteSystem sys = assemble_semidiscrete(mixed_mesh(), s, mat, TransientFlux::dissipative);
  const VectorField u0 = [](const Vec3& x) { return CVec3(std::sin(3.0 * x[0]) * x[2] * (1 - x[2]), 0.0, x[1] * x[2]); };
  State st = initial_state(sys, mixed_mesh(), s, u0, {});
  const Stepper stepper(sys, 0.02);
  double prev = energy(sys, st);
  CHECK(prev > 0.0);
  for (int i = 0; i < 100; ++i) {
    st = stepper.step(st);
    const double e = energy(sys, st);
    CHECK(e <= prev * (1 + 1e-10));
    prev = e;
  }
}

TEST_CASE("energy trace CSV") {
  const Spaces s(1);
  const SemidiscreteSystem sys =
      assemble_semidiscrete(mixed_mesh(), s, Material::constant_isotropic(1, 1, 1), TransientFlux::conservative);
  std::mt19937 rng(5);
  std::ostringstream out;
  write_energy_trace(out, sys, make_state(sys, random_vector(sys.state_size(), rng)), 0.1, 3);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,E,dEdt,flux");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find(",conservative") != std::string::npos);
  }
  CHECK(rows == 4);
}

TEST_CASE("impedance boundaries are rejected in the transient system") {
  const Spaces s(1);
  const Mesh imp = tag_boundary(build_structured_cube(1), BoundaryConfig::impedance);
  CHECK_THROWS_AS(assemble_semidiscrete(imp, s, Material::constant_isotropic(1, 1, 1), TransientFlux::conservative),
                  std::invalid_argument);
}
