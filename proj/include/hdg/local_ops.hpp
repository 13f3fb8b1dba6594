#pragma once

#include <array>
#include <string>

#include <Eigen/LU>

#include "hdg/basis.hpp"
#include "hdg/materials.hpp"
#include "hdg/mesh.hpp"
#include "hdg/projection.hpp"

namespace hdg {

/// Numerical flux family sigma^ n = sigma~ n - alpha * tau (P_M u - u^).
enum class FluxVariant { first_order, time_reversed, kappa_scaled, conservative };

/// alpha = i kappa, -i kappa, i kappa^2, 1 respectively.
Complex flux_alpha(FluxVariant variant, double kappa);
std::string to_string(FluxVariant variant);
/// Accepts the CLI names (first-order, time-reversal, kappa-scaled,
/// second-order) and the enum spellings.
FluxVariant parse_flux_variant(const std::string& name);

/// Real element matrices. Face-indexed blocks stack the four local faces in
/// order, each with Spaces::dim_m() dofs expressed in the global face frame.
///   A   (nV x nV)   (A sigma, xi)_K
///   D   (nW x nV)   (div sigma, w)_K
///   N   (4nM x nV)  <sigma n, mu>_{dK}
///   M   (nW x nW)   (rho u, w)_K
///   T11 (nW x nW)   <tau P_M u, P_M w>_{dK}
///   T12 (nW x 4nM)  <tau u^, w>_{dK}
///   T22 (4nM x 4nM) <tau u^, mu>_{dK}
struct LocalBlocks {
  int element = -1;
  double h = 0.0;
  double tau = 0.0;
  RMatrix A, D, N, M, T11, T12, T22;
  /// trace[f](j, a) = <w_a, mu_j>_F on local face f; P_M w = trace[f] w / mass.
  std::array<RMatrix, 4> trace;
  std::array<double, 4> face_mass{};  // 2 * area: face mass is face_mass * I
};

LocalBlocks assemble_local_blocks(const Mesh& mesh, const Spaces& spaces,
                                  const Material& material, int element);

/// (f, w)_K for every W basis function.
CVector local_load(const Mesh& mesh, const Spaces& spaces, int element,
                   const VectorField& load);

/// Local operator of the second-order form acting on (sigma~, u):
///   [ A   D^T                  ]
///   [ -D  alpha T11 - kappa^2 M ]
CMatrix local_matrix(const LocalBlocks& blocks, double kappa, Complex alpha);

/// Face coupling of the local problem: L x = B u^ - [0; F] with
/// B = [N^T; alpha T12].
CMatrix local_trace_coupling(const LocalBlocks& blocks, Complex alpha);

/// Rows of the transmission condition contributed by the element:
/// <sigma^ n, mu> = Flux x + alpha T22 u^ with Flux = [N, -alpha T12^T].
CMatrix local_flux_operator(const LocalBlocks& blocks, Complex alpha);

struct LocalFactorization {
  int element = -1;
  double kappa = 0.0;
  Complex alpha;
  Eigen::PartialPivLU<CMatrix> lu;
  /// Reciprocal 1-norm condition estimate of the local block.
  double rcond = 0.0;
  /// min |U_ii| / max |L_ij|.
  double pivot_ratio = 0.0;

  double condition_estimate() const { return 1.0 / rcond; }
  CVector solve(const CVector& rhs) const { return lu.solve(rhs); }
};

/// Dense LU of the local block. Throws SingularLocalSolver (naming the
/// element) when the smallest pivot falls below 1e-14 times the block norm.
LocalFactorization factorize_local(const LocalBlocks& blocks, double kappa,
                                   FluxVariant variant);
LocalFactorization factorize_local(const LocalBlocks& blocks, double kappa,
                                   Complex alpha);

/// Element contribution to the skeleton system.
struct CondensedElement {
  CMatrix schur;  // (4nM x 4nM): Flux L^{-1} B + alpha T22
  CMatrix lift;   // (nV+nW x 4nM): L^{-1} B
  CMatrix flux;   // (4nM x nV+nW): Flux
};

CondensedElement condense(const LocalFactorization& factorization,
                          const LocalBlocks& blocks);

/// L^{-1} [0; F]: the part of the local solution driven by the volume load.
CVector load_lift(const LocalFactorization& factorization, const LocalBlocks& blocks,
                  const CVector& load);

/// Local solution (sigma~_K, u_K) stacked, from the element's four face
/// traces (stacked like the face blocks) and its load vector.
CVector recover(const LocalFactorization& factorization, const CondensedElement& condensed,
                const CVector& local_trace, const CVector& load_lift);

}  // namespace hdg
