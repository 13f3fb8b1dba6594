#include "hdg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hdg {
namespace {

constexpr double kEnergyIdentityTol = 1e-8;
constexpr double kMonolithicTol = 1e-9;
// Quadrature for the energy identity solve: the identity holds up to the
// consistency error of the quadrature, which has to sit far below 1e-8.
constexpr int kIdentityQuadrature = 16;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string rate_text(const std::optional<Rate>& r) {
  if (!r) return "";
  if (r->saturated) return "saturated";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", r->value);
  return buf;
}

}  // namespace

BoundaryConfig default_boundary(const std::string& test) {
  if (test == "pwave" || test == "swave") return BoundaryConfig::all_dirichlet;
  if (test == "hk-const") return BoundaryConfig::impedance;
  if (test == "varcoeff" || test == "polynomial") return BoundaryConfig::mixed;
  throw std::invalid_argument("unknown test '" + test + "'");
}

ExactCase experiment_case(const ExperimentConfig& config, double h) {
  if (config.test == "hk-const") return make_case("pwave", config.hk / h, config.params);
  if (config.test == "polynomial") {
    CaseParams p = config.params;
    p.degree = config.k + 1;
    return make_case("polynomial", config.kappa, p);
  }
  return make_case(config.test, config.kappa, config.params);
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log) {
  static const char* kTests[] = {"varcoeff", "pwave", "swave", "hk-const", "polynomial"};
  if (std::find(std::begin(kTests), std::end(kTests), config.test) == std::end(kTests)) {
    throw std::invalid_argument("unknown test '" + config.test + "'");
  }
  if (config.k < 0) throw std::invalid_argument("k must be nonnegative");
  if (config.mesh_file.empty() && config.levels.empty()) throw std::invalid_argument("empty mesh ladder");
  for (int n : config.levels) {
    if (n < 1) throw std::invalid_argument("mesh levels must be positive");
  }
  if (config.check_energy_identity && config.variant != FluxVariant::first_order) {
    throw std::invalid_argument("the energy identity check needs the first-order variant");
  }

  ExperimentResult result;
  result.config = config;
  result.bc = config.bc.value_or(default_boundary(config.test));
  const Spaces spaces(config.k, config.quad_degree);

  std::vector<Mesh> meshes;
  if (!config.mesh_file.empty()) {
    meshes.push_back(tag_boundary(read_mesh_file(config.mesh_file), result.bc));
  } else {
    for (int n : config.levels) meshes.push_back(tag_boundary(build_structured_cube(n), result.bc));
  }

  for (const Mesh& mesh : meshes) {
    ExperimentRow row;
    row.test = config.test;
    row.variant = to_string(config.variant);
    row.k = config.k;
    row.n = mesh.n();
    row.h = mesh.max_h();
    const ExactCase exact = experiment_case(config, row.h);
    row.kappa = exact.kappa;
    const ProblemData data = exact.data();
    AssemblyOptions options;
    options.variant = config.variant;
    options.policy = config.policy;

    auto start = std::chrono::steady_clock::now();
    const HybridSystem system = assemble_global(mesh, spaces, exact.material, data, options);
    row.assemble_s = seconds_since(start);
    start = std::chrono::steady_clock::now();
    SolveReport report;
    const CVector skeleton = solve(system, &report);
    const SolutionFields sol = reconstruct(mesh, spaces, exact.material, data, system, skeleton, config.policy);
    row.solve_s = seconds_since(start);
    if (!config.timing) row.assemble_s = row.solve_s = 0.0;
    row.residual = report.residual;
    row.residual_bound = report.residual_bound;
    row.errors = compute_errors(mesh, spaces, sol, exact);
    row.dofs_skeleton = system.dofs.size;
    row.dofs_total = mesh.num_elements() * (spaces.dim_v() + spaces.dim_w()) + system.dofs.size;

    if (config.check_energy_identity) {
      const Spaces fine(config.k, std::max(kIdentityQuadrature, spaces.quad_degree()));
      const SolutionFields diag = solve_problem(mesh, fine, exact.material, data, options);
      row.energy_gap = energy_identity(mesh, fine, diag, exact).relative_gap();
      if (!(*row.energy_gap <= kEnergyIdentityTol)) {
        result.checks_passed = false;
        result.failures.push_back("energy identity gap " + number(*row.energy_gap) + " at n=" +
                                  std::to_string(row.n));
      }
    }
    if (config.oracle_monolithic) {
      const MonolithicForm form = config.variant == FluxVariant::first_order && exact.kappa > 0.0
                                      ? MonolithicForm::first_order
                                      : MonolithicForm::second_order;
      const SolutionFields mono = solve_monolithic(mesh, spaces, exact.material, data, config.variant, form);
      row.monolithic_gap = relative_difference(sol, mono);
      if (!(*row.monolithic_gap <= kMonolithicTol)) {
        result.checks_passed = false;
        result.failures.push_back("monolithic mismatch " + number(*row.monolithic_gap) + " at n=" +
                                  std::to_string(row.n));
      }
    }
    if (!result.rows.empty()) {
      const ExperimentRow& prev = result.rows.back();
      if (prev.h != row.h) {
        row.eoc_u = eoc({prev.h, row.h}, {prev.errors.err_u, row.errors.err_u})[0];
        row.eoc_sigma = eoc({prev.h, row.h}, {prev.errors.err_sigma, row.errors.err_sigma})[0];
      }
    }
    if (log) {
      *log << "n=" << row.n << " h=" << row.h << " kappa=" << row.kappa << " err_u=" << row.errors.err_u
           << " err_sigma=" << row.errors.err_sigma << '\n';
    }
    result.rows.push_back(row);
  }
  return result;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << "test,variant,k,n,h,kappa,err_u,err_sigma,rel_err_u,rel_err_sigma,eoc_u,eoc_sigma,"
         "dofs_skeleton,dofs_total,assemble_s,solve_s\n";
  for (const ExperimentRow& r : result.rows) {
    out << r.test << ',' << r.variant << ',' << r.k << ',' << r.n << ',' << number(r.h) << ','
        << number(r.kappa) << ',' << number(r.errors.err_u) << ',' << number(r.errors.err_sigma) << ','
        << number(r.errors.rel_err_u) << ',' << number(r.errors.rel_err_sigma) << ',' << rate_text(r.eoc_u)
        << ',' << rate_text(r.eoc_sigma) << ',' << r.dofs_skeleton << ',' << r.dofs_total << ','
        << number(r.assemble_s) << ',' << number(r.solve_s) << '\n';
  }
}

void print_summary(std::ostream& out, const ExperimentResult& result) {
  const ExperimentConfig& c = result.config;
  char line[256];
  out << "test " << c.test << ", variant " << to_string(c.variant) << ", k " << c.k << ", bc "
      << to_string(result.bc) << ", quadrature degree " << Spaces(c.k, c.quad_degree).quad_degree() << '\n';
  std::snprintf(line, sizeof line, "%4s %10s %10s %12s %12s %12s %12s %8s %8s\n", "n", "h", "kappa", "err_u",
                "err_sigma", "rel_u", "rel_sigma", "eoc_u", "eoc_s");
  out << line;
  for (const ExperimentRow& r : result.rows) {
    std::snprintf(line, sizeof line, "%4d %10.4f %10.4f %12.4e %12.4e %12.4e %12.4e %8s %8s\n", r.n, r.h, r.kappa,
                  r.errors.err_u, r.errors.err_sigma, r.errors.rel_err_u, r.errors.rel_err_sigma,
                  rate_text(r.eoc_u).c_str(), rate_text(r.eoc_sigma).c_str());
    out << line;
  }
  for (const ExperimentRow& r : result.rows) {
    if (r.energy_gap) out << "energy identity n=" << r.n << ": relative gap " << *r.energy_gap << '\n';
    if (r.monolithic_gap) out << "monolithic oracle n=" << r.n << ": relative difference " << *r.monolithic_gap << '\n';
  }
  if (!result.rows.empty()) {
    const ExperimentRow& last = result.rows.back();
    out << "skeleton/element dof ratio on the finest mesh: "
        << static_cast<double>(last.dofs_skeleton) / (last.dofs_total - last.dofs_skeleton) << '\n';
  }
  for (const auto& f : result.failures) out << "CHECK FAILED: " << f << '\n';
}

}  // namespace hdg
