// Command-line driver: convergence ladders, fixed-h*kappa studies, solution
// dumps and transient energy traces.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hdg/experiment.hpp"
#include "hdg/time_domain.hpp"

namespace {

int run_transient(const std::string& flux_name, int k, int n, const std::string& bc, double dt, int steps,
                  const std::string& out_path) {
  using namespace hdg;
  const Mesh mesh = tag_boundary(build_structured_cube(n), parse_boundary_config(bc));
  const Spaces spaces(k);
  const SemidiscreteSystem sys =
      assemble_semidiscrete(mesh, spaces, Material::variable_preset(), parse_transient_flux(flux_name));
  // a smooth bump that vanishes on z = 0 and z = 1
  const VectorField u0 = [](const Vec3& x) {
    const double bump = std::sin(3.14159265358979 * x[2]);
    return CVec3(bump * x[0], 0.5 * bump, bump * x[1] * x[1]);
  };
  const State st = initial_state(sys, mesh, spaces, u0, {});
  std::cerr << "# initial trace: u^ = P_M u0 on free faces, du^/dt from the transmission condition\n";
  if (out_path.empty()) {
    write_energy_trace(std::cout, sys, st, dt, steps);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    write_energy_trace(out, sys, st, dt, steps);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HDG solver for time-harmonic linear elasticity with symmetric stress"};
  app.set_version_flag("--version", "hdg-elastic 0.1");
  app.failure_message(CLI::FailureMessage::help);
  app.fallthrough();

  hdg::ExperimentConfig cfg;
  std::string test = "varcoeff", variant = "first-order", bc, check = "none", out_path, dump_path;
  bool no_timing = false, serial = false;
  app.add_option("--test", test, "Experiment")
      ->check(CLI::IsMember({"varcoeff", "pwave", "swave", "hk-const", "polynomial"}));
  app.add_option("--variant", variant, "Flux variant")
      ->check(CLI::IsMember({"first-order", "time-reversal", "kappa-scaled", "second-order"}));
  app.add_option("--k", cfg.k, "Polynomial degree k (stress P_k, displacement P_k+1)")->check(CLI::Range(0, 6));
  app.add_option("--n", cfg.levels, "Mesh ladder, e.g. 1,2,3,4")->delimiter(',')->check(CLI::PositiveNumber);
  app.add_option("--kappa", cfg.kappa, "Frequency")->check(CLI::NonNegativeNumber);
  app.add_option("--hk", cfg.hk, "h*kappa for --test hk-const")->check(CLI::PositiveNumber);
  app.add_option("--bc", bc, "Boundary configuration (default depends on the test)")
      ->check(CLI::IsMember({"mixed", "all-dirichlet", "impedance"}));
  app.add_option("--check", check, "Extra verification")->check(CLI::IsMember({"energy-identity", "none"}));
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  app.add_flag("--oracle-monolithic", cfg.oracle_monolithic, "Cross-check against the uncondensed solve");
  app.add_flag("--no-timing", no_timing, "Write zero timings so the CSV is reproducible bit for bit");
  app.add_flag("--serial", serial, "Use the serial element loops");
  app.add_option("--quad-degree", cfg.quad_degree, "Assembly quadrature exactness (default 2(k+1)+2)");
  app.add_option("--mesh", cfg.mesh_file, "Imported mesh file instead of the structured ladder");
  app.add_option("--dump", dump_path, "Write the finest-level solution coefficients here");
  app.add_option("--seed", cfg.params.seed, "Seed of the polynomial case");

  std::string transient;
  double dt = 0.01;
  int steps = 200;
  auto* trans = app.add_subcommand("transient", "Energy trace of the unforced transient system");
  trans->add_option("--flux", transient, "accumulating | dissipative | conservative")->required()
      ->check(CLI::IsMember({"accumulating", "dissipative", "conservative"}));
  trans->add_option("--dt", dt, "Time step")->check(CLI::PositiveNumber);
  trans->add_option("--steps", steps, "Number of steps")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*trans) {
      const int n = cfg.levels.empty() ? 1 : cfg.levels.front();
      return run_transient(transient, cfg.k, n, bc.empty() ? "mixed" : bc, dt, steps, out_path);
    }
    cfg.test = test;
    cfg.variant = hdg::parse_flux_variant(variant);
    if (!bc.empty()) cfg.bc = hdg::parse_boundary_config(bc);
    cfg.check_energy_identity = check == "energy-identity";
    cfg.timing = !no_timing;
    cfg.policy = serial ? hdg::ExecutionPolicy::serial : hdg::ExecutionPolicy::parallel;

    const hdg::ExperimentResult result = hdg::run_experiment(cfg, &std::cerr);
    if (out_path.empty()) {
      hdg::write_csv(std::cout, result);
      hdg::print_summary(std::cerr, result);
    } else {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot open " + out_path);
      hdg::write_csv(out, result);
      hdg::print_summary(std::cout, result);
    }
    if (!dump_path.empty()) {
      // rerun the finest level to keep the experiment loop free of large state
      const hdg::ExperimentRow& last = result.rows.back();
      const hdg::Mesh mesh = cfg.mesh_file.empty()
                                 ? hdg::tag_boundary(hdg::build_structured_cube(last.n), result.bc)
                                 : hdg::tag_boundary(hdg::read_mesh_file(cfg.mesh_file), result.bc);
      const hdg::Spaces spaces(cfg.k, cfg.quad_degree);
      const hdg::ExactCase exact = hdg::experiment_case(cfg, mesh.max_h());
      hdg::AssemblyOptions options;
      options.variant = cfg.variant;
      options.policy = cfg.policy;
      const hdg::SolutionFields sol = hdg::solve_problem(mesh, spaces, exact.material, exact.data(), options);
      std::ofstream out(dump_path);
      if (!out) throw std::runtime_error("cannot open " + dump_path);
      hdg::write_solution(out, {last.n, cfg.k, exact.kappa, variant, hdg::to_string(result.bc)}, sol);
    }
    return result.checks_passed ? 0 : 1;
  } catch (const hdg::SingularGlobalSystem& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
