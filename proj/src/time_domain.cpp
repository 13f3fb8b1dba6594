#include "hdg/time_domain.hpp"

#include <Eigen/Cholesky>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "hdg/parallel.hpp"

namespace hdg {
namespace {

using RTriplet = Eigen::Triplet<double>;

void add_dense(std::vector<RTriplet>& out, int r0, int c0, const RMatrix& block, double scale = 1.0) {
  for (int j = 0; j < block.cols(); ++j) {
    for (int i = 0; i < block.rows(); ++i) {
      if (block(i, j) != 0.0) out.emplace_back(r0 + i, c0 + j, scale * block(i, j));
    }
  }
}

// Dense dynamics stay practical only at desk scale.
constexpr int kMaxDenseSize = 12000;

}  // namespace

std::string to_string(TransientFlux flux) {
  switch (flux) {
    case TransientFlux::accumulating: return "accumulating";
    case TransientFlux::dissipative: return "dissipative";
    case TransientFlux::conservative: return "conservative";
  }
  return "?";
}

TransientFlux parse_transient_flux(const std::string& name) {
  if (name == "accumulating") return TransientFlux::accumulating;
  if (name == "dissipative") return TransientFlux::dissipative;
  if (name == "conservative") return TransientFlux::conservative;
  throw std::invalid_argument("unknown transient flux '" + name + "'");
}

FluxVariant frequency_variant(TransientFlux flux) {
  switch (flux) {
    case TransientFlux::accumulating: return FluxVariant::first_order;
    case TransientFlux::dissipative: return FluxVariant::time_reversed;
    case TransientFlux::conservative: return FluxVariant::conservative;
  }
  return FluxVariant::conservative;
}

SemidiscreteSystem assemble_semidiscrete(const Mesh& mesh, const Spaces& spaces,
                                         const Material& material, TransientFlux flux,
                                         ExecutionPolicy policy) {
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).tag == BoundaryTag::impedance) {
      throw std::invalid_argument("transient system supports Dirichlet and Neumann boundaries only");
    }
  }
  SemidiscreteSystem sys;
  sys.flux = flux;
  sys.k = spaces.k();
  sys.num_elements = mesh.num_elements();
  sys.num_faces = mesh.num_faces();
  sys.dim_v = spaces.dim_v();
  sys.dim_w = spaces.dim_w();
  sys.dim_m = spaces.dim_m();
  const int ne = sys.num_elements, nv = sys.dim_v, nw = sys.dim_w, dm = sys.dim_m;
  const DofMap dofs = DofMap::build(mesh, spaces);
  sys.free_face_offset = dofs.face_offset;
  const int ns = ne * nv, nu = ne * nw, nh = dofs.size;
  const int state = (flux == TransientFlux::conservative ? 2 * nu : 2 * nu + nh);
  if (state > kMaxDenseSize) {
    throw std::invalid_argument("mesh too large for the dense transient system");
  }

  std::vector<LocalBlocks> blocks(ne);
  for_each_index(0, ne, policy, [&](int e) { blocks[e] = assemble_local_blocks(mesh, spaces, material, e); });

  sys.A = RMatrix::Zero(ns, ns);
  sys.D = RMatrix::Zero(nu, ns);
  sys.M = RMatrix::Zero(nu, nu);
  sys.T11 = RMatrix::Zero(nu, nu);
  sys.N = RMatrix::Zero(nh, ns);
  sys.T12 = RMatrix::Zero(nu, nh);
  sys.T22 = RMatrix::Zero(nh, nh);
  RMatrix a_inv = RMatrix::Zero(ns, ns);

  const double s = sys.sign();
  const bool conservative = flux == TransientFlux::conservative;
  const int cell = nv + nw, face0 = ne * cell, total = face0 + mesh.num_faces() * dm;
  std::vector<RTriplet> e0, e1, e2;

  for (int e = 0; e < ne; ++e) {
    const LocalBlocks& b = blocks[e];
    sys.A.block(e * nv, e * nv, nv, nv) = b.A;
    a_inv.block(e * nv, e * nv, nv, nv) = b.A.llt().solve(RMatrix::Identity(nv, nv));
    sys.D.block(e * nw, e * nv, nw, nv) = b.D;
    sys.M.block(e * nw, e * nw, nw, nw) = b.M;
    sys.T11.block(e * nw, e * nw, nw, nw) = b.T11;

    const int r0 = e * cell;
    add_dense(e0, r0, r0, b.A);
    add_dense(e0, r0, r0 + nv, b.D.transpose());
    add_dense(e0, r0 + nv, r0, b.D, -1.0);
    add_dense(e2, r0 + nv, r0 + nv, b.M);
    if (conservative) {
      add_dense(e0, r0 + nv, r0 + nv, b.T11);
    } else {
      add_dense(e1, r0 + nv, r0 + nv, b.T11, -s);
    }
    for (int a = 0; a < 4; ++a) {
      const int f = mesh.element_faces(e)[a].face;
      const int fr = face0 + f * dm;
      const RMatrix n_block = b.N.middleRows(a * dm, dm);
      const RMatrix t12_block = b.T12.middleCols(a * dm, dm);
      const RMatrix t22_block = b.T22.block(a * dm, a * dm, dm, dm);
      add_dense(e0, r0, fr, n_block.transpose(), -1.0);
      if (conservative) {
        add_dense(e0, r0 + nv, fr, t12_block, -1.0);
      } else {
        add_dense(e1, r0 + nv, fr, t12_block, s);
      }
      if (mesh.face(f).tag == BoundaryTag::dirichlet) continue;
      add_dense(e0, fr, r0, n_block);
      if (conservative) {
        add_dense(e0, fr, r0 + nv, t12_block.transpose(), -1.0);
        add_dense(e0, fr, fr, t22_block);
      } else {
        add_dense(e1, fr, r0 + nv, t12_block.transpose(), s);
        add_dense(e1, fr, fr, t22_block, -s);
      }
      const int off = dofs.face_offset[f];
      sys.N.block(off, e * nv, dm, nv) += n_block;
      sys.T12.block(e * nw, off, nw, dm) += t12_block;
      sys.T22.block(off, off, dm, dm) += t22_block;
    }
  }
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).tag != BoundaryTag::dirichlet) continue;
    const int fr = face0 + f * dm;
    const double mass = 2.0 * mesh.face_geometry(f).area;
    for (int i = 0; i < dm; ++i) e0.emplace_back(fr + i, fr + i, mass);
  }
  for (auto [mat, trip] : {std::pair{&sys.E0, &e0}, std::pair{&sys.E1, &e1}, std::pair{&sys.E2, &e2}}) {
    mat->resize(total, total);
    mat->setFromTriplets(trip->begin(), trip->end());
  }

  // sigma~ = A^{-1} (N^T u^ - D^T u)
  sys.Su = -a_inv * sys.D.transpose();
  sys.Sh = a_inv * sys.N.transpose();
  const Eigen::LLT<RMatrix> m_llt(sys.M);
  const RMatrix I = RMatrix::Identity(nu, nu);

  if (conservative) {
    const RMatrix S = sys.N * sys.Sh + sys.T22;
    const RMatrix R = -sys.N * sys.Su + sys.T12.transpose();
    const Eigen::PartialPivLU<RMatrix> s_lu(S);
    if (nh > 0 && !(s_lu.rcond() > 1e-14)) throw Error("singular trace elimination block");
    sys.Hu = nh > 0 ? RMatrix(s_lu.solve(R)) : RMatrix(RMatrix::Zero(0, nu));
    const RMatrix K = -sys.D * sys.Su + sys.T11 - R.transpose() * sys.Hu;
    sys.J = RMatrix::Zero(2 * nu, 2 * nu);
    sys.J.topRightCorner(nu, nu) = I;
    sys.J.bottomLeftCorner(nu, nu) = -m_llt.solve(K);
  } else {
    const RVector t22_diag = sys.T22.diagonal();
    if (nh > 0 && !(t22_diag.minCoeff() > 0.0)) throw Error("singular trace mass");
    const RVector inv = t22_diag.cwiseInverse();
    sys.Wv = inv.asDiagonal() * sys.T12.transpose();
    sys.Wu = s * (inv.asDiagonal() * (sys.N * sys.Su));
    sys.Wh = s * (inv.asDiagonal() * (sys.N * sys.Sh));
    const RMatrix vu = sys.D * sys.Su - s * sys.T12 * sys.Wu;
    const RMatrix vv = s * (sys.T11 - sys.T12 * sys.Wv);
    const RMatrix vh = sys.D * sys.Sh - s * sys.T12 * sys.Wh;
    sys.J = RMatrix::Zero(2 * nu + nh, 2 * nu + nh);
    sys.J.block(0, nu, nu, nu) = I;
    sys.J.block(nu, 0, nu, nu) = m_llt.solve(vu);
    sys.J.block(nu, nu, nu, nu) = m_llt.solve(vv);
    sys.J.block(nu, 2 * nu, nu, nh) = m_llt.solve(vh);
    sys.J.block(2 * nu, 0, nh, nu) = sys.Wu;
    sys.J.block(2 * nu, nu, nh, nu) = sys.Wv;
    sys.J.block(2 * nu, 2 * nu, nh, nh) = sys.Wh;
  }
  return sys;
}

State make_state(const SemidiscreteSystem& sys, const RVector& y, double t) {
  if (y.size() != sys.state_size()) throw std::invalid_argument("state size mismatch");
  const int nu = sys.nu(), nh = sys.nhat();
  State st;
  st.t = t;
  st.u = y.head(nu);
  st.v = y.segment(nu, nu);
  if (sys.flux == TransientFlux::conservative) {
    st.trace = sys.Hu * st.u;
    st.trace_rate = sys.Hu * st.v;
  } else {
    st.trace = y.tail(nh);
    st.trace_rate = sys.Wv * st.v + sys.Wu * st.u + sys.Wh * st.trace;
  }
  st.sigma = sys.Su * st.u + sys.Sh * st.trace;
  return st;
}

RVector differential_variables(const SemidiscreteSystem& sys, const State& st) {
  RVector y(sys.state_size());
  const int nu = sys.nu();
  y.head(nu) = st.u;
  y.segment(nu, nu) = st.v;
  if (sys.flux != TransientFlux::conservative) y.tail(sys.nhat()) = st.trace;
  return y;
}

State initial_state(const SemidiscreteSystem& sys, const Mesh& mesh, const Spaces& spaces,
                    const VectorField& u0, const VectorField& v0) {
  const int nu = sys.nu(), nw = sys.dim_w, dm = sys.dim_m;
  RVector y = RVector::Zero(sys.state_size());
  for (int e = 0; e < sys.num_elements; ++e) {
    if (u0) y.segment(e * nw, nw) = project_displacement(mesh, spaces, e, u0).real();
    if (v0) y.segment(nu + e * nw, nw) = project_displacement(mesh, spaces, e, v0).real();
  }
  if (sys.flux != TransientFlux::conservative && u0) {
    for (int f = 0; f < sys.num_faces; ++f) {
      const int off = sys.free_face_offset[f];
      if (off >= 0) y.segment(2 * nu + off, dm) = project_trace(mesh, spaces, f, u0).real();
    }
  }
  return make_state(sys, y);
}

double energy(const SemidiscreteSystem& sys, const State& st) {
  double e = 0.5 * st.sigma.dot(sys.A * st.sigma) + 0.5 * st.v.dot(sys.M * st.v);
  if (sys.flux == TransientFlux::conservative) {
    e += 0.5 * (st.u.dot(sys.T11 * st.u) - 2.0 * st.u.dot(sys.T12 * st.trace) +
                st.trace.dot(sys.T22 * st.trace));
  }
  return e;
}

double energy_rate(const SemidiscreteSystem& sys, const State& st) {
  const RVector ydot = sys.J * differential_variables(sys, st);
  const int nu = sys.nu();
  const RVector vdot = ydot.segment(nu, nu);
  const RVector sigma_dot = sys.Su * st.v + sys.Sh * st.trace_rate;
  double rate = st.sigma.dot(sys.A * sigma_dot) + st.v.dot(sys.M * vdot);
  if (sys.flux == TransientFlux::conservative) {
    rate += st.u.dot(sys.T11 * st.v) - st.v.dot(sys.T12 * st.trace) -
            st.u.dot(sys.T12 * st.trace_rate) + st.trace.dot(sys.T22 * st.trace_rate);
  }
  return rate;
}

double interface_dissipation(const SemidiscreteSystem& sys, const State& st) {
  return st.v.dot(sys.T11 * st.v) - 2.0 * st.v.dot(sys.T12 * st.trace_rate) +
         st.trace_rate.dot(sys.T22 * st.trace_rate);
}

Stepper::Stepper(const SemidiscreteSystem& system, double dt) : system_(&system), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const RMatrix I = RMatrix::Identity(system.state_size(), system.state_size());
  explicit_part_ = I + 0.5 * dt * system.J;
  implicit_part_.compute(I - 0.5 * dt * system.J);
  if (!(implicit_part_.rcond() > 1e-14)) throw Error("time step matrix is singular");
}

State Stepper::step(const State& state) const {
  const RVector y = differential_variables(*system_, state);
  return make_state(*system_, implicit_part_.solve(explicit_part_ * y), state.t + dt_);
}

State step(const SemidiscreteSystem& system, const State& state, double dt) {
  return Stepper(system, dt).step(state);
}

SparseMatrix frequency_operator(const SemidiscreteSystem& sys, double kappa) {
  SparseMatrix out = sys.E0.cast<Complex>();
  out += (-kI * kappa) * SparseMatrix(sys.E1.cast<Complex>());
  out += Complex(-kappa * kappa, 0.0) * SparseMatrix(sys.E2.cast<Complex>());
  return out;
}

void write_energy_trace(std::ostream& out, const SemidiscreteSystem& sys, State state, double dt,
                        int steps) {
  const Stepper stepper(sys, dt);
  const auto precision = out.precision(17);
  out << "t,E,dEdt,flux\n";
  for (int i = 0;; ++i) {
    out << state.t << ',' << energy(sys, state) << ',' << energy_rate(sys, state) << ','
        << to_string(sys.flux) << '\n';
    if (i == steps) break;
    state = stepper.step(state);
  }
  out.precision(precision);
}

}  // namespace hdg
