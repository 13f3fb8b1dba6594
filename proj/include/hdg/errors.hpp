#pragma once

#include <vector>

#include "hdg/exact_cases.hpp"

namespace hdg {

struct ErrorReport {
  int n = 0;
  int k = 0;
  double h = 0.0;
  double kappa = 0.0;
  FluxVariant variant = FluxVariant::first_order;
  double err_u = 0.0;       // ||u - u_h||
  double err_sigma = 0.0;   // ||sigma~ - sigma~_h||
  double norm_u = 0.0;
  double norm_sigma = 0.0;
  double rel_err_u = 0.0;
  double rel_err_sigma = 0.0;
  double err_skeleton = 0.0;  // ||P_M u - u^_h||_tau over all element boundaries
};

/// Error quadrature exactness used unless overridden: 2(k+2) + 4.
int error_quadrature_degree(int k);

/// Throws std::invalid_argument on mesh/degree mismatch.
ErrorReport compute_errors(const Mesh& mesh, const Spaces& spaces, const SolutionFields& solution,
                           const ExactCase& exact, int quad_degree = -1);

struct Rate {
  double value = 0.0;
  bool saturated = false;  // fine error is zero: no rate can be read
};

/// EOC between consecutive levels, log(e_c / e_f) / log(h_c / h_f). Needs at
/// least two levels with distinct h.
std::vector<Rate> eoc(const std::vector<double>& h, const std::vector<double>& errors);

/// Both sides of the error energy identity for the first-order variant,
///   i kappa (|e_s|_A^2 - |e_u|_rho^2) + |P_M e_u - e^|_tau^2
///     = -[ i kappa ((A eps_s, conj e_s) - (rho conj eps_u, e_u))
///          + <conj(eps_s) n, e_u - e^> + <tau P_M conj(eps_u), P_M e_u - e^> ],
/// with e_s = Pi_V sigma - sigma_h, e_u = Pi_W u - u_h, e^ = P_M u - u^_h,
/// eps_s = sigma - Pi_V sigma, eps_u = u - Pi_W u, sigma = (i / kappa) sigma~.
/// Inner products are bilinear, conjugation is explicit.
struct EnergyIdentity {
  Complex lhs;
  Complex rhs;
  double relative_gap() const { return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300); }
};

/// `spaces` must be the ones the solution was computed with; the identity is
/// exact only up to quadrature consistency error, so callers solve with a
/// raised quadrature degree.
EnergyIdentity energy_identity(const Mesh& mesh, const Spaces& spaces, const SolutionFields& solution,
                               const ExactCase& exact);

}  // namespace hdg
