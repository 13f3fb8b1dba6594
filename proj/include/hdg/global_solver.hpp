#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "hdg/local_ops.hpp"

namespace hdg {

using SparseMatrix = Eigen::SparseMatrix<Complex>;
/// Boundary datum evaluated at a point with the outward unit normal.
using BoundaryField = std::function<CVec3(const Vec3& x, const Vec3& normal)>;

/// Data of the time-harmonic problem. Empty callables mean zero data.
struct ProblemData {
  double kappa = 1.0;
  VectorField load;          // f~
  VectorField dirichlet;     // g_D
  BoundaryField neumann;     // g~_N = sigma~ n
  BoundaryField impedance;   // g~_R = sigma~ n - i kappa u
};

/// Skeleton numbering: faces in mesh order, Dirichlet faces excluded, each
/// face owning a contiguous block of Spaces::dim_m() dofs.
struct DofMap {
  std::vector<int> face_offset;  // -1 on Dirichlet faces
  int face_dofs = 0;
  int size = 0;

  static DofMap build(const Mesh& mesh, const Spaces& spaces);
};

struct AssemblyOptions {
  FluxVariant variant = FluxVariant::first_order;
  ExecutionPolicy policy = ExecutionPolicy::parallel;
};

struct HybridSystem {
  DofMap dofs;
  SparseMatrix matrix;
  CVector rhs;
  /// Per face: P_M g_D on Dirichlet faces, empty elsewhere.
  std::vector<CVector> dirichlet_trace;
  double kappa = 0.0;
  FluxVariant variant = FluxVariant::first_order;
  /// Smallest reciprocal condition estimate over the local blocks.
  double min_local_rcond = 0.0;
  int worst_local_element = -1;
};

/// Face L2 projection of g_D on every Dirichlet face (empty vectors elsewhere).
std::vector<CVector> solve_dirichlet_trace(const Mesh& mesh, const Spaces& spaces,
                                           const VectorField& dirichlet);

HybridSystem assemble_global(const Mesh& mesh, const Spaces& spaces, const Material& material,
                             const ProblemData& data, const AssemblyOptions& options);

struct SolveReport {
  double residual = 0.0;       // ||A x - b||
  double residual_bound = 0.0; // 1e-10 (||A|| ||x|| + ||b||)
  double rcond = 0.0;          // 1-norm reciprocal condition estimate
  int refinement_steps = 0;
};

/// Sparse LU solve with one step of iterative refinement if the residual
/// contract is missed. Throws SingularGlobalSystem when the factorization
/// fails or the condition estimate drops below 1e-12.
CVector solve_sparse(const SparseMatrix& matrix, const CVector& rhs, SolveReport* report = nullptr);

/// Skeleton solution over the non-Dirichlet dofs.
CVector solve(const HybridSystem& system, SolveReport* report = nullptr);

struct SolutionFields {
  int k = 0;
  double kappa = 0.0;
  FluxVariant variant = FluxVariant::first_order;
  std::vector<CVector> stress;        // sigma~ per element (V coefficients)
  std::vector<CVector> displacement;  // u per element (W coefficients)
  std::vector<CVector> trace;         // u^ per face (M coefficients)

  /// sigma = (i / kappa) sigma~ on one element; requires kappa > 0.
  CVector first_order_stress(int element) const;
};

/// Face traces of all faces from the skeleton solution and Dirichlet data.
std::vector<CVector> expand_trace(const HybridSystem& system, const CVector& skeleton);

/// Local recovery on every element.
SolutionFields reconstruct(const Mesh& mesh, const Spaces& spaces, const Material& material,
                           const ProblemData& data, const HybridSystem& system,
                           const CVector& skeleton,
                           ExecutionPolicy policy = ExecutionPolicy::parallel);

/// assemble + solve + reconstruct.
SolutionFields solve_problem(const Mesh& mesh, const Spaces& spaces, const Material& material,
                             const ProblemData& data, const AssemblyOptions& options,
                             HybridSystem* system_out = nullptr, SolveReport* report = nullptr);

enum class MonolithicForm {
  second_order,  // uncondensed (sigma~, u, u^) system with alpha from the variant
  first_order    // (sigma, u, u^) system of the first-order formulation, alpha = i kappa
};

/// Uncondensed global system. Unknowns: per element (stress, displacement)
/// at element * cell, then every face's trace (Dirichlet included) at
/// face0 + face * dim_m. Dirichlet traces are constrained by face mass rows.
struct MonolithicSystem {
  SparseMatrix matrix;
  CVector rhs;
  MonolithicForm form = MonolithicForm::second_order;
  FluxVariant variant = FluxVariant::first_order;
  double kappa = 0.0;
  int cell = 0;
  int face0 = 0;
};

MonolithicSystem assemble_monolithic(const Mesh& mesh, const Spaces& spaces, const Material& material,
                                     const ProblemData& data, FluxVariant variant, MonolithicForm form);

/// Uncondensed global solve used as an oracle. Dirichlet traces are unknowns
/// constrained by face mass rows. For the first-order form the stress is
/// converted back to sigma~ = -i kappa sigma.
SolutionFields solve_monolithic(const Mesh& mesh, const Spaces& spaces, const Material& material,
                                const ProblemData& data, FluxVariant variant, MonolithicForm form);

struct ResidualReport {
  double local = 0.0;         // max relative residual of the element equations
  double transmission = 0.0;  // relative residual of the face equations
  double boundary = 0.0;      // relative residual on Neumann/impedance faces
};

/// Plugs a solution back into the discrete equations.
ResidualReport discrete_residuals(const Mesh& mesh, const Spaces& spaces, const Material& material,
                                  const ProblemData& data, const SolutionFields& solution);

/// Relative difference max over fields of ||a - b|| / max(||b||, tiny).
double relative_difference(const SolutionFields& a, const SolutionFields& b);

struct SolutionHeader {
  int n = 0;
  int k = 0;
  double kappa = 0.0;
  std::string variant;
  std::string bc;
};

/// Text dump: header line, then one line per element (stress then
/// displacement coefficients) and one per face (trace coefficients).
void write_solution(std::ostream& out, const SolutionHeader& header,
                    const SolutionFields& solution);
SolutionFields read_solution(std::istream& in, SolutionHeader* header = nullptr);

}  // namespace hdg
