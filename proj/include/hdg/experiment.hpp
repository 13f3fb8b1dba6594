#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hdg/errors.hpp"

namespace hdg {

struct ExperimentConfig {
  std::string test = "varcoeff";  // varcoeff | pwave | swave | hk-const | polynomial
  FluxVariant variant = FluxVariant::first_order;
  int k = 1;
  std::vector<int> levels{1, 2, 3, 4};
  double kappa = 1.0;
  double hk = 0.17320508075688773;  // sqrt(3) / 10
  std::optional<BoundaryConfig> bc;  // default depends on the test
  bool check_energy_identity = false;
  bool oracle_monolithic = false;
  bool timing = true;
  ExecutionPolicy policy = ExecutionPolicy::parallel;
  int quad_degree = -1;
  CaseParams params;
  std::string mesh_file;  // replaces the structured ladder with one imported mesh
};

/// mixed for varcoeff and polynomial, all-Dirichlet for plane waves,
/// impedance for hk-const.
BoundaryConfig default_boundary(const std::string& test);

struct ExperimentRow {
  std::string test;
  std::string variant;
  int k = 0;
  int n = 0;
  double h = 0.0;
  double kappa = 0.0;
  ErrorReport errors;
  std::optional<Rate> eoc_u, eoc_sigma;
  int dofs_skeleton = 0;
  int dofs_total = 0;  // element (V + W) dofs plus skeleton dofs
  double assemble_s = 0.0;
  double solve_s = 0.0;
  double residual = 0.0;
  double residual_bound = 0.0;
  std::optional<double> energy_gap;      // relative, --check energy-identity
  std::optional<double> monolithic_gap;  // relative, --oracle-monolithic
};

struct ExperimentResult {
  ExperimentConfig config;
  BoundaryConfig bc = BoundaryConfig::mixed;
  std::vector<ExperimentRow> rows;
  bool checks_passed = true;
  std::vector<std::string> failures;
};

/// Runs the ladder level by level. Energy identity check tolerance: 1e-8
/// relative; monolithic oracle: 1e-9 relative.
ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Builds the exact case of a test at one level (hk-const scales kappa).
ExactCase experiment_case(const ExperimentConfig& config, double h);

void write_csv(std::ostream& out, const ExperimentResult& result);
void print_summary(std::ostream& out, const ExperimentResult& result);

}  // namespace hdg
