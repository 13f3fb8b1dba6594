#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/LU>
#include <Eigen/SparseCore>

#include "hdg/global_solver.hpp"

namespace hdg {

/// Interface flux of the transient semidiscretization:
///   accumulating  sigma^ n = sigma~ n + tau (P_M du/dt - du^/dt)
///   dissipative   sigma^ n = sigma~ n - tau (P_M du/dt - du^/dt)
///   conservative  sigma^ n = sigma~ n - tau (P_M u - u^)
enum class TransientFlux { accumulating, dissipative, conservative };

std::string to_string(TransientFlux flux);
TransientFlux parse_transient_flux(const std::string& name);

using RSparse = Eigen::SparseMatrix<double>;

/// Globally assembled real operators. Dirichlet traces are held at zero;
/// boundary faces that are not Dirichlet carry homogeneous Neumann data.
/// Dense matrices are used for the eliminated dynamics, which limits the
/// system to desk-scale meshes.
struct SemidiscreteSystem {
  TransientFlux flux = TransientFlux::conservative;
  int k = 0;
  int num_elements = 0;
  int num_faces = 0;
  int dim_v = 0, dim_w = 0, dim_m = 0;
  std::vector<int> free_face_offset;  // -1 on Dirichlet faces

  // Global blocks over (sigma~, u, free u^), element-major for sigma~ and u.
  RMatrix A, D, N, M, T11, T12, T22;

  /// E0 X + E1 dX/dt + E2 d2X/dt2 = 0 over the monolithic layout
  /// (per element sigma~ and u, then every face's trace).
  RSparse E0, E1, E2;

  /// Linear dynamics y' = J y. Accumulating/dissipative: y = (u, v, u^);
  /// conservative: y = (u, v) with u^ slaved.
  RMatrix J;

  // sigma~ = Su u + Sh u^
  RMatrix Su, Sh;
  // conservative: u^ = Hu u
  RMatrix Hu;
  // accumulating/dissipative: du^/dt = Wv v + Wu u + Wh u^
  RMatrix Wv, Wu, Wh;

  int nu() const { return static_cast<int>(M.rows()); }
  int nhat() const { return static_cast<int>(T22.rows()); }
  int state_size() const { return static_cast<int>(J.rows()); }
  double sign() const { return flux == TransientFlux::accumulating ? 1.0 : -1.0; }
};

SemidiscreteSystem assemble_semidiscrete(const Mesh& mesh, const Spaces& spaces,
                                         const Material& material, TransientFlux flux,
                                         ExecutionPolicy policy = ExecutionPolicy::parallel);

/// Every field of the state; sigma and trace (and trace_rate) are slaved to
/// the differential variables.
struct State {
  double t = 0.0;
  RVector u, v, sigma, trace, trace_rate;
};

/// State from the differential variables y, recomputing the slaved fields.
State make_state(const SemidiscreteSystem& system, const RVector& y, double t = 0.0);
RVector differential_variables(const SemidiscreteSystem& system, const State& state);

/// u = Pi_W u0, v = Pi_W v0, u^ = P_M u0 on free faces (accumulating and
/// dissipative fluxes; slaved for the conservative one). du^/dt follows
/// from the transmission condition.
State initial_state(const SemidiscreteSystem& system, const Mesh& mesh, const Spaces& spaces,
                    const VectorField& u0, const VectorField& v0);

/// 1/2 |sigma~|_A^2 + 1/2 |v|_rho^2 (+ 1/2 |P_M u - u^|_tau^2, conservative).
double energy(const SemidiscreteSystem& system, const State& state);

/// dE/dt along the vector field by the chain rule.
double energy_rate(const SemidiscreteSystem& system, const State& state);

/// |P_M v - du^/dt|_tau^2 over all element boundaries.
double interface_dissipation(const SemidiscreteSystem& system, const State& state);

/// Trapezoidal (Newmark beta = 1/4, gamma = 1/2) stepper; the step matrix is
/// factorized once per dt.
class Stepper {
 public:
  Stepper(const SemidiscreteSystem& system, double dt);
  State step(const State& state) const;
  double dt() const { return dt_; }

 private:
  const SemidiscreteSystem* system_;
  double dt_;
  RMatrix explicit_part_;
  Eigen::PartialPivLU<RMatrix> implicit_part_;
};

State step(const SemidiscreteSystem& system, const State& state, double dt);

/// E0 - i kappa E1 - kappa^2 E2: the time-harmonic operator under exp(-i kappa t).
SparseMatrix frequency_operator(const SemidiscreteSystem& system, double kappa);

/// Variant whose frequency-domain operator the transient flux reproduces.
FluxVariant frequency_variant(TransientFlux flux);

/// CSV energy trace with columns t,E,dEdt,flux over `steps` steps.
void write_energy_trace(std::ostream& out, const SemidiscreteSystem& system, State state,
                        double dt, int steps);

}  // namespace hdg
