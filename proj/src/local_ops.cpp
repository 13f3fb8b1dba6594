#include "hdg/local_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace hdg {

Complex flux_alpha(FluxVariant variant, double kappa) {
  switch (variant) {
    case FluxVariant::first_order: return kI * kappa;
    case FluxVariant::time_reversed: return -kI * kappa;
    case FluxVariant::kappa_scaled: return kI * kappa * kappa;
    case FluxVariant::conservative: return Complex(1.0, 0.0);
  }
  return Complex(1.0, 0.0);
}

std::string to_string(FluxVariant variant) {
  switch (variant) {
    case FluxVariant::first_order: return "first-order";
    case FluxVariant::time_reversed: return "time-reversal";
    case FluxVariant::kappa_scaled: return "kappa-scaled";
    case FluxVariant::conservative: return "second-order";
  }
  return "?";
}

FluxVariant parse_flux_variant(const std::string& name) {
  if (name == "first-order" || name == "first_order") return FluxVariant::first_order;
  if (name == "time-reversal" || name == "time_reversed" || name == "time-reversed") {
    return FluxVariant::time_reversed;
  }
  if (name == "kappa-scaled" || name == "kappa_scaled") return FluxVariant::kappa_scaled;
  if (name == "second-order" || name == "conservative") return FluxVariant::conservative;
  throw std::invalid_argument("unknown flux variant '" + name + "'");
}

LocalBlocks assemble_local_blocks(const Mesh& mesh, const Spaces& spaces,
                                  const Material& material, int element) {
  const ElementGeometry geo = mesh.geometry(element);
  const int ns = spaces.stress_scalars();
  const int nw = spaces.displacement_scalars();
  const int nm = spaces.trace_scalars();
  const int dim_v = spaces.dim_v(), dim_w = spaces.dim_w(), dim_m = spaces.dim_m();

  LocalBlocks b;
  b.element = element;
  b.h = mesh.h(element);
  b.tau = 1.0 / b.h;
  b.A = RMatrix::Zero(dim_v, dim_v);
  b.D = RMatrix::Zero(dim_w, dim_v);
  b.M = RMatrix::Zero(dim_w, dim_w);
  b.N = RMatrix::Zero(4 * dim_m, dim_v);
  b.T11 = RMatrix::Zero(dim_w, dim_w);
  b.T12 = RMatrix::Zero(dim_w, 4 * dim_m);
  b.T22 = RMatrix::Zero(4 * dim_m, 4 * dim_m);

  std::array<Mat3, 6> units;
  for (int c = 0; c < 6; ++c) units[c] = symmetric_unit(c);

  const TetRule& rule = spaces.cell_rule();
  const RMatrix& phi = spaces.stress_table();
  const RMatrix& psi = spaces.displacement_table();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Vec3 x = geo.to_physical(rule.points[q]);
    const double w = rule.weights[q] * geo.det;

    // compliance pairing of the unit symmetric matrices
    Eigen::Matrix<double, 6, 6> pairing;
    for (int c = 0; c < 6; ++c) {
      const Mat3 ae = material.apply_compliance(x, units[c]);
      for (int d = 0; d < 6; ++d) pairing(c, d) = (ae.array() * units[d].array()).sum();
    }
    const RVector phi_q = phi.row(q).transpose();
    const RMatrix outer = w * phi_q * phi_q.transpose();
    for (int c = 0; c < 6; ++c) {
      for (int d = 0; d < 6; ++d) {
        if (pairing(c, d) != 0.0) b.A.block(c * ns, d * ns, ns, ns) += pairing(c, d) * outer;
      }
    }

    const double rho = material.density(x);
    const RVector psi_q = psi.row(q).transpose();
    const RMatrix mass_w = (w * rho) * psi_q * psi_q.transpose();
    for (int r = 0; r < 3; ++r) b.M.block(r * nw, r * nw, nw, nw) += mass_w;

    // div(phi_i E_c) = E_c grad(phi_i)
    const RMatrix grad = spaces.stress_gradient_table(static_cast<int>(q)) * geo.inverse;
    for (int c = 0; c < 6; ++c) {
      for (int i = 0; i < ns; ++i) {
        const Vec3 div = units[c] * grad.row(i).transpose();
        for (int r = 0; r < 3; ++r) {
          if (div[r] == 0.0) continue;
          b.D.col(c * ns + i).segment(r * nw, nw) += (w * div[r]) * psi_q;
        }
      }
    }
  }

  const TriRule& frule = spaces.face_rule();
  const RMatrix& mu = spaces.trace_table();
  RVector phi_f(ns), psi_f(nw);
  for (int lf = 0; lf < 4; ++lf) {
    const ElementFace ef = mesh.element_faces(element)[lf];
    const FaceGeometry fg = mesh.face_geometry(ef.face);
    const Vec3 normal = ef.sign * mesh.face(ef.face).normal;
    const double face_mass = 2.0 * fg.area;
    b.face_mass[lf] = face_mass;
    RMatrix trace = RMatrix::Zero(dim_m, dim_w);
    const int off = lf * dim_m;
    for (std::size_t q = 0; q < frule.size(); ++q) {
      const Vec3 x = fg.to_physical(frule.points[q]);
      const Vec3 xi = geo.to_reference(x);
      const double w = frule.weights[q] * face_mass;
      spaces.stress_basis().values(xi.data(), phi_f.data());
      spaces.displacement_basis().values(xi.data(), psi_f.data());
      const RVector mu_q = mu.row(q).transpose();
      for (int c = 0; c < 6; ++c) {
        const Vec3 en = units[c] * normal;
        for (int r = 0; r < 3; ++r) {
          if (en[r] == 0.0) continue;
          b.N.block(off + r * nm, c * ns, nm, ns) += (w * en[r]) * mu_q * phi_f.transpose();
        }
      }
      const RMatrix tr = w * mu_q * psi_f.transpose();
      for (int r = 0; r < 3; ++r) trace.block(r * nm, r * nw, nm, nw) += tr;
    }
    b.T12.middleCols(off, dim_m) = b.tau * trace.transpose();
    b.T22.block(off, off, dim_m, dim_m) = (b.tau * face_mass) * RMatrix::Identity(dim_m, dim_m);
    b.T11 += (b.tau / face_mass) * trace.transpose() * trace;
    b.trace[lf] = std::move(trace);
  }
  return b;
}

CVector local_load(const Mesh& mesh, const Spaces& spaces, int element,
                   const VectorField& load) {
  const ElementGeometry geo = mesh.geometry(element);
  const TetRule& rule = spaces.cell_rule();
  const RMatrix& psi = spaces.displacement_table();
  const int nw = spaces.displacement_scalars();
  CVector f = CVector::Zero(spaces.dim_w());
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const CVec3 value = load(geo.to_physical(rule.points[q]));
    const double w = rule.weights[q] * geo.det;
    for (int r = 0; r < 3; ++r) {
      f.segment(r * nw, nw) += (w * value[r]) * psi.row(q).transpose().cast<Complex>();
    }
  }
  return f;
}

CMatrix local_matrix(const LocalBlocks& b, double kappa, Complex alpha) {
  const int nv = static_cast<int>(b.A.rows());
  const int nw = static_cast<int>(b.M.rows());
  CMatrix l(nv + nw, nv + nw);
  l.topLeftCorner(nv, nv) = b.A.cast<Complex>();
  l.topRightCorner(nv, nw) = b.D.transpose().cast<Complex>();
  l.bottomLeftCorner(nw, nv) = -b.D.cast<Complex>();
  l.bottomRightCorner(nw, nw) = alpha * b.T11.cast<Complex>() - (kappa * kappa) * b.M.cast<Complex>();
  return l;
}

CMatrix local_trace_coupling(const LocalBlocks& b, Complex alpha) {
  const int nv = static_cast<int>(b.A.rows());
  const int nw = static_cast<int>(b.M.rows());
  CMatrix coupling(nv + nw, b.T22.cols());
  coupling.topRows(nv) = b.N.transpose().cast<Complex>();
  coupling.bottomRows(nw) = alpha * b.T12.cast<Complex>();
  return coupling;
}

CMatrix local_flux_operator(const LocalBlocks& b, Complex alpha) {
  const int nv = static_cast<int>(b.A.rows());
  const int nw = static_cast<int>(b.M.rows());
  CMatrix flux(b.T22.rows(), nv + nw);
  flux.leftCols(nv) = b.N.cast<Complex>();
  flux.rightCols(nw) = -alpha * b.T12.transpose().cast<Complex>();
  return flux;
}

LocalFactorization factorize_local(const LocalBlocks& blocks, double kappa,
                                   FluxVariant variant) {
  return factorize_local(blocks, kappa, flux_alpha(variant, kappa));
}

LocalFactorization factorize_local(const LocalBlocks& blocks, double kappa,
                                   Complex alpha) {
  const CMatrix l = local_matrix(blocks, kappa, alpha);
  LocalFactorization f{blocks.element, kappa, alpha, Eigen::PartialPivLU<CMatrix>(l), 0.0, 0.0};
  const double scale = l.cwiseAbs().maxCoeff();
  const double min_pivot = f.lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  f.pivot_ratio = scale > 0.0 ? min_pivot / scale : 0.0;
  if (!(f.pivot_ratio >= 1e-14)) {
    throw SingularLocalSolver(
        blocks.element, "singular local solver on element " + std::to_string(blocks.element) +
                            " (pivot ratio " + std::to_string(f.pivot_ratio) + ")");
  }
  f.rcond = f.lu.rcond();
  return f;
}

CondensedElement condense(const LocalFactorization& factorization,
                          const LocalBlocks& blocks) {
  const Complex alpha = factorization.alpha;
  CondensedElement c;
  c.lift = factorization.lu.solve(local_trace_coupling(blocks, alpha));
  c.flux = local_flux_operator(blocks, alpha);
  c.schur = c.flux * c.lift + alpha * blocks.T22.cast<Complex>();
  return c;
}

CVector load_lift(const LocalFactorization& factorization, const LocalBlocks& blocks,
                  const CVector& load) {
  const int nv = static_cast<int>(blocks.A.rows());
  CVector rhs = CVector::Zero(nv + load.size());
  rhs.tail(load.size()) = load;
  return factorization.lu.solve(rhs);
}

CVector recover(const LocalFactorization& /*factorization*/, const CondensedElement& condensed,
                const CVector& local_trace, const CVector& lifted_load) {
  return condensed.lift * local_trace - lifted_load;
}

}  // namespace hdg
