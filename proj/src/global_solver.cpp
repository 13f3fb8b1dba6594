#include "hdg/global_solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/SparseLU>

#include "hdg/parallel.hpp"

namespace hdg {
namespace {

using Triplet = Eigen::Triplet<Complex>;

// <g(x, n), mu> on a boundary face, n the outward normal.
CVector face_load(const Mesh& mesh, const Spaces& spaces, int f, const BoundaryField& g) {
  const int nm = spaces.trace_scalars();
  CVector out = CVector::Zero(spaces.dim_m());
  if (!g) return out;
  const FaceGeometry fg = mesh.face_geometry(f);
  const Vec3 normal = mesh.face(f).normal;
  const TriRule& rule = spaces.face_rule();
  const RMatrix& mu = spaces.trace_table();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const CVec3 value = g(fg.to_physical(rule.points[q]), normal);
    const double w = rule.weights[q] * 2.0 * fg.area;
    for (int r = 0; r < 3; ++r) {
      out.segment(r * nm, nm) += (w * value[r]) * mu.row(q).transpose().cast<Complex>();
    }
  }
  return out;
}

BoundaryField boundary_datum(const ProblemData& data, BoundaryTag tag) {
  if (tag == BoundaryTag::neumann) return data.neumann;
  if (tag == BoundaryTag::impedance) return data.impedance;
  return {};
}

CVector element_load(const Mesh& mesh, const Spaces& spaces, int e, const ProblemData& data) {
  if (!data.load) return CVector::Zero(spaces.dim_w());
  return local_load(mesh, spaces, e, data.load);
}

CVector gather_trace(const Mesh& mesh, const std::vector<CVector>& traces, int e, int dm) {
  CVector out(4 * dm);
  for (int lf = 0; lf < 4; ++lf) {
    out.segment(lf * dm, dm) = traces[mesh.element_faces(e)[lf].face];
  }
  return out;
}

double one_norm(const SparseMatrix& a) {
  double best = 0.0;
  for (int j = 0; j < a.outerSize(); ++j) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) sum += std::abs(it.value());
    best = std::max(best, sum);
  }
  return best;
}

template <class Solver>
double inverse_one_norm_estimate(Solver& lu, int n) {
  // Hager's estimator on the complex 1-norm.
  CVector x = CVector::Constant(n, Complex(1.0 / n, 0.0));
  double estimate = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const CVector y = lu.solve(x);
    estimate = y.cwiseAbs().sum();
    CVector sign(n);
    for (int i = 0; i < n; ++i) {
      const double m = std::abs(y[i]);
      sign[i] = m > 0.0 ? y[i] / m : Complex(1.0, 0.0);
    }
    const CVector z = lu.adjoint().solve(sign);
    int j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= std::real(z.dot(x))) break;
    x.setZero();
    x[j] = 1.0;
  }
  CVector alt(n);
  for (int i = 0; i < n; ++i) {
    alt[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + static_cast<double>(i) / std::max(n - 1, 1));
  }
  const double alt_estimate = 2.0 * lu.solve(alt).cwiseAbs().sum() / (3.0 * n);
  return std::max(estimate, alt_estimate);
}

}  // namespace

DofMap DofMap::build(const Mesh& mesh, const Spaces& spaces) {
  DofMap map;
  map.face_dofs = spaces.dim_m();
  map.face_offset.assign(mesh.num_faces(), -1);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).tag == BoundaryTag::dirichlet) continue;
    map.face_offset[f] = map.size;
    map.size += map.face_dofs;
  }
  return map;
}

std::vector<CVector> solve_dirichlet_trace(const Mesh& mesh, const Spaces& spaces,
                                           const VectorField& dirichlet) {
  std::vector<CVector> out(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).tag != BoundaryTag::dirichlet) continue;
    out[f] = dirichlet ? project_trace(mesh, spaces, f, dirichlet)
                       : CVector::Zero(spaces.dim_m()).eval();
  }
  return out;
}

HybridSystem assemble_global(const Mesh& mesh, const Spaces& spaces, const Material& material,
                             const ProblemData& data, const AssemblyOptions& options) {
  HybridSystem sys;
  sys.kappa = data.kappa;
  sys.variant = options.variant;
  sys.dofs = DofMap::build(mesh, spaces);
  sys.dirichlet_trace = solve_dirichlet_trace(mesh, spaces, data.dirichlet);
  sys.rhs = CVector::Zero(sys.dofs.size);
  sys.min_local_rcond = 1.0;
  const int dm = spaces.dim_m();

  struct Contribution {
    CMatrix schur;
    CVector rhs;
    double rcond = 0.0;
  };

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_elements()) * 16 * dm * dm);
  // Elements are condensed in parallel chunks; the scatter runs in element
  // order so the assembled matrix is independent of the thread count.
  const int chunk = 64;
  std::vector<Contribution> local(chunk);
  for (int start = 0; start < mesh.num_elements(); start += chunk) {
    const int stop = std::min(start + chunk, mesh.num_elements());
    for_each_index(start, stop, options.policy, [&](int e) {
      const LocalBlocks blocks = assemble_local_blocks(mesh, spaces, material, e);
      const LocalFactorization fact = factorize_local(blocks, data.kappa, options.variant);
      const CondensedElement cond = condense(fact, blocks);
      Contribution& c = local[e - start];
      c.schur = cond.schur;
      c.rhs = cond.flux * load_lift(fact, blocks, element_load(mesh, spaces, e, data));
      c.rcond = fact.rcond;
    });
    for (int e = start; e < stop; ++e) {
      const Contribution& c = local[e - start];
      if (c.rcond < sys.min_local_rcond) {
        sys.min_local_rcond = c.rcond;
        sys.worst_local_element = e;
      }
      const auto& faces = mesh.element_faces(e);
      for (int a = 0; a < 4; ++a) {
        const int row0 = sys.dofs.face_offset[faces[a].face];
        if (row0 < 0) continue;
        sys.rhs.segment(row0, dm) += c.rhs.segment(a * dm, dm);
        for (int b = 0; b < 4; ++b) {
          const int fb = faces[b].face;
          const int col0 = sys.dofs.face_offset[fb];
          const auto block = c.schur.block(a * dm, b * dm, dm, dm);
          if (col0 < 0) {
            sys.rhs.segment(row0, dm) -= block * sys.dirichlet_trace[fb];
            continue;
          }
          for (int j = 0; j < dm; ++j) {
            for (int i = 0; i < dm; ++i) {
              if (block(i, j) != Complex(0.0, 0.0)) triplets.emplace_back(row0 + i, col0 + j, block(i, j));
            }
          }
        }
      }
    }
  }

  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.tag != BoundaryTag::neumann && face.tag != BoundaryTag::impedance) continue;
    const int row0 = sys.dofs.face_offset[f];
    sys.rhs.segment(row0, dm) += face_load(mesh, spaces, f, boundary_datum(data, face.tag));
    if (face.tag == BoundaryTag::impedance && data.kappa != 0.0) {
      const Complex value = -kI * data.kappa * 2.0 * mesh.face_geometry(f).area;
      for (int i = 0; i < dm; ++i) triplets.emplace_back(row0 + i, row0 + i, value);
    }
  }

  sys.matrix.resize(sys.dofs.size, sys.dofs.size);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

CVector solve_sparse(const SparseMatrix& matrix, const CVector& rhs, SolveReport* report) {
  SolveReport local_report;
  SolveReport& rep = report ? *report : local_report;
  rep = SolveReport{};
  const int n = static_cast<int>(matrix.rows());
  if (n == 0) return CVector();
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(matrix);
  lu.factorize(matrix);
  if (lu.info() != Eigen::Success) {
    throw SingularGlobalSystem("global skeleton matrix is singular (" + lu.lastErrorMessage() +
                               "); kappa^2 may be a discrete eigenvalue, try another kappa");
  }
  const double anorm = one_norm(matrix);
  rep.rcond = anorm > 0.0 ? 1.0 / (anorm * inverse_one_norm_estimate(lu, n)) : 0.0;
  if (!(rep.rcond >= 1e-12)) {
    std::ostringstream msg;
    msg << "global skeleton matrix is nearly singular (rcond " << rep.rcond
        << "); kappa^2 is close to a discrete eigenvalue, try another kappa";
    throw SingularGlobalSystem(msg.str());
  }
  CVector x = lu.solve(rhs);
  const double frob = matrix.norm();
  auto check = [&] {
    rep.residual = (matrix * x - rhs).norm();
    rep.residual_bound = 1e-10 * (frob * x.norm() + rhs.norm());
    return rep.residual <= rep.residual_bound;
  };
  if (!check()) {
    x += lu.solve(rhs - matrix * x);
    rep.refinement_steps = 1;
    check();
  }
  return x;
}

CVector solve(const HybridSystem& system, SolveReport* report) {
  return solve_sparse(system.matrix, system.rhs, report);
}

CVector SolutionFields::first_order_stress(int element) const {
  if (kappa == 0.0) throw std::invalid_argument("first-order stress needs kappa > 0");
  return (kI / kappa) * stress.at(element);
}

std::vector<CVector> expand_trace(const HybridSystem& system, const CVector& skeleton) {
  std::vector<CVector> out(system.dofs.face_offset.size());
  for (std::size_t f = 0; f < out.size(); ++f) {
    const int off = system.dofs.face_offset[f];
    out[f] = off < 0 ? system.dirichlet_trace[f] : skeleton.segment(off, system.dofs.face_dofs).eval();
  }
  return out;
}

SolutionFields reconstruct(const Mesh& mesh, const Spaces& spaces, const Material& material,
                           const ProblemData& data, const HybridSystem& system,
                           const CVector& skeleton, ExecutionPolicy policy) {
  SolutionFields sol;
  sol.k = spaces.k();
  sol.kappa = system.kappa;
  sol.variant = system.variant;
  sol.trace = expand_trace(system, skeleton);
  sol.stress.resize(mesh.num_elements());
  sol.displacement.resize(mesh.num_elements());
  const int nv = spaces.dim_v();
  const int dm = spaces.dim_m();
  for_each_index(0, mesh.num_elements(), policy, [&](int e) {
    const LocalBlocks blocks = assemble_local_blocks(mesh, spaces, material, e);
    const LocalFactorization fact = factorize_local(blocks, system.kappa, system.variant);
    CVector rhs = local_trace_coupling(blocks, fact.alpha) * gather_trace(mesh, sol.trace, e, dm);
    rhs.tail(spaces.dim_w()) -= element_load(mesh, spaces, e, data);
    const CVector x = fact.solve(rhs);
    sol.stress[e] = x.head(nv);
    sol.displacement[e] = x.tail(spaces.dim_w());
  });
  return sol;
}

SolutionFields solve_problem(const Mesh& mesh, const Spaces& spaces, const Material& material,
                             const ProblemData& data, const AssemblyOptions& options,
                             HybridSystem* system_out, SolveReport* report) {
  HybridSystem sys = assemble_global(mesh, spaces, material, data, options);
  const CVector skeleton = solve(sys, report);
  SolutionFields sol = reconstruct(mesh, spaces, material, data, sys, skeleton, options.policy);
  if (system_out) *system_out = std::move(sys);
  return sol;
}

MonolithicSystem assemble_monolithic(const Mesh& mesh, const Spaces& spaces, const Material& material,
                                     const ProblemData& data, FluxVariant variant, MonolithicForm form) {
  const bool first = form == MonolithicForm::first_order;
  if (first && data.kappa <= 0.0) {
    throw std::invalid_argument("first-order monolithic form needs kappa > 0");
  }
  const double kappa = data.kappa;
  const Complex alpha = first ? kI * kappa : flux_alpha(variant, kappa);
  const int nv = spaces.dim_v(), nw = spaces.dim_w(), dm = spaces.dim_m();
  const int ne = mesh.num_elements();
  MonolithicSystem sys;
  sys.form = form;
  sys.variant = first ? FluxVariant::first_order : variant;
  sys.kappa = kappa;
  sys.cell = nv + nw;
  sys.face0 = ne * sys.cell;
  const int n = sys.face0 + mesh.num_faces() * dm;

  std::vector<Triplet> triplets;
  sys.rhs = CVector::Zero(n);
  auto add_block = [&](int r0, int c0, const CMatrix& block) {
    for (int j = 0; j < block.cols(); ++j) {
      for (int i = 0; i < block.rows(); ++i) {
        if (block(i, j) != Complex(0.0, 0.0)) triplets.emplace_back(r0 + i, c0 + j, block(i, j));
      }
    }
  };

  for (int e = 0; e < ne; ++e) {
    const LocalBlocks b = assemble_local_blocks(mesh, spaces, material, e);
    const CVector load = element_load(mesh, spaces, e, data);
    const auto& faces = mesh.element_faces(e);
    const int r0 = e * sys.cell;
    CMatrix local(sys.cell, sys.cell), coupling(sys.cell, 4 * dm), flux(4 * dm, sys.cell);
    if (first) {
      local.topLeftCorner(nv, nv) = kI * kappa * b.A.cast<Complex>();
      local.topRightCorner(nv, nw) = -b.D.transpose().cast<Complex>();
      local.bottomLeftCorner(nw, nv) = b.D.cast<Complex>();
      local.bottomRightCorner(nw, nw) = kI * kappa * b.M.cast<Complex>() + b.T11.cast<Complex>();
      coupling.topRows(nv) = b.N.transpose().cast<Complex>();
      coupling.bottomRows(nw) = -b.T12.cast<Complex>();
      flux.leftCols(nv) = -b.N.cast<Complex>();
      flux.rightCols(nw) = -b.T12.transpose().cast<Complex>();
      sys.rhs.segment(r0 + nv, nw) = (kI / kappa) * load;
    } else {
      local = local_matrix(b, kappa, alpha);
      coupling = -local_trace_coupling(b, alpha);
      flux = local_flux_operator(b, alpha);
      sys.rhs.segment(r0 + nv, nw) = -load;
    }
    const Complex t22 = first ? Complex(1.0, 0.0) : alpha;
    add_block(r0, r0, local);
    for (int a = 0; a < 4; ++a) {
      const int f = faces[a].face;
      const int fr = sys.face0 + f * dm;
      add_block(r0, fr, coupling.middleCols(a * dm, dm));
      if (mesh.face(f).tag == BoundaryTag::dirichlet) continue;
      add_block(fr, r0, flux.middleRows(a * dm, dm));
      add_block(fr, fr, t22 * b.T22.block(a * dm, a * dm, dm, dm).cast<Complex>());
    }
  }

  const Complex data_scale = first ? -kI / kappa : Complex(1.0, 0.0);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    const int fr = sys.face0 + f * dm;
    const double mass = 2.0 * mesh.face_geometry(f).area;
    if (face.tag == BoundaryTag::dirichlet) {
      add_block(fr, fr, CMatrix::Identity(dm, dm) * Complex(mass, 0.0));
      if (data.dirichlet) {
        const VectorField g = data.dirichlet;
        sys.rhs.segment(fr, dm) = face_load(mesh, spaces, f, [&](const Vec3& x, const Vec3&) { return g(x); });
      }
      continue;
    }
    if (face.tag == BoundaryTag::neumann || face.tag == BoundaryTag::impedance) {
      sys.rhs.segment(fr, dm) = data_scale * face_load(mesh, spaces, f, boundary_datum(data, face.tag));
    }
    if (face.tag == BoundaryTag::impedance && kappa != 0.0) {
      const Complex value = first ? Complex(-mass, 0.0) : -kI * kappa * mass;
      add_block(fr, fr, CMatrix::Identity(dm, dm) * value);
    }
  }

  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

SolutionFields solve_monolithic(const Mesh& mesh, const Spaces& spaces, const Material& material,
                                const ProblemData& data, FluxVariant variant, MonolithicForm form) {
  const MonolithicSystem sys = assemble_monolithic(mesh, spaces, material, data, variant, form);
  const CVector x = solve_sparse(sys.matrix, sys.rhs);
  const int nv = spaces.dim_v(), nw = spaces.dim_w(), dm = spaces.dim_m();
  SolutionFields sol;
  sol.k = spaces.k();
  sol.kappa = sys.kappa;
  sol.variant = sys.variant;
  sol.stress.resize(mesh.num_elements());
  sol.displacement.resize(mesh.num_elements());
  sol.trace.resize(mesh.num_faces());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    sol.stress[e] = x.segment(e * sys.cell, nv);
    if (form == MonolithicForm::first_order) sol.stress[e] *= -kI * sys.kappa;
    sol.displacement[e] = x.segment(e * sys.cell + nv, nw);
  }
  for (int f = 0; f < mesh.num_faces(); ++f) sol.trace[f] = x.segment(sys.face0 + f * dm, dm);
  return sol;
}

ResidualReport discrete_residuals(const Mesh& mesh, const Spaces& spaces, const Material& material,
                                  const ProblemData& data, const SolutionFields& sol) {
  ResidualReport rep;
  const int nv = spaces.dim_v(), nw = spaces.dim_w(), dm = spaces.dim_m();
  const Complex alpha = flux_alpha(sol.variant, sol.kappa);
  std::vector<CVector> flux_sum(mesh.num_faces(), CVector::Zero(dm));
  std::vector<double> flux_scale(mesh.num_faces(), 0.0);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const LocalBlocks b = assemble_local_blocks(mesh, spaces, material, e);
    CVector x(nv + nw);
    x << sol.stress[e], sol.displacement[e];
    const CVector trace = gather_trace(mesh, sol.trace, e, dm);
    const CVector load = element_load(mesh, spaces, e, data);
    const CVector lx = local_matrix(b, sol.kappa, alpha) * x;
    CVector bu = local_trace_coupling(b, alpha) * trace;
    bu.tail(nw) -= load;
    const double scale = lx.norm() + bu.norm() + load.norm();
    if (scale > 0.0) rep.local = std::max(rep.local, (lx - bu).norm() / scale);

    const CVector flux = local_flux_operator(b, alpha) * x + alpha * (b.T22.cast<Complex>() * trace);
    for (int a = 0; a < 4; ++a) {
      const int f = mesh.element_faces(e)[a].face;
      flux_sum[f] += flux.segment(a * dm, dm);
      flux_scale[f] += flux.segment(a * dm, dm).squaredNorm();
    }
  }
  double inner_num = 0.0, inner_den = 0.0, bnd_num = 0.0, bnd_den = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.tag == BoundaryTag::interior) {
      inner_num += flux_sum[f].squaredNorm();
      inner_den += flux_scale[f];
    } else if (face.tag == BoundaryTag::neumann || face.tag == BoundaryTag::impedance) {
      CVector r = flux_sum[f] - face_load(mesh, spaces, f, boundary_datum(data, face.tag));
      if (face.tag == BoundaryTag::impedance) {
        r -= kI * sol.kappa * 2.0 * mesh.face_geometry(f).area * sol.trace[f];
      }
      bnd_num += r.squaredNorm();
      bnd_den += flux_scale[f];
    }
  }
  rep.transmission = inner_den > 0.0 ? std::sqrt(inner_num / inner_den) : 0.0;
  rep.boundary = bnd_den > 0.0 ? std::sqrt(bnd_num / bnd_den) : 0.0;
  return rep;
}

double relative_difference(const SolutionFields& a, const SolutionFields& b) {
  auto diff = [](const std::vector<CVector>& x, const std::vector<CVector>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("solution size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      num += (x[i] - y[i]).squaredNorm();
      den += y[i].squaredNorm();
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
  };
  return std::max({diff(a.stress, b.stress), diff(a.displacement, b.displacement),
                   diff(a.trace, b.trace)});
}

namespace {

void write_vector(std::ostream& out, const CVector& v) {
  out << v.size();
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << v[i].real() << ' ' << v[i].imag();
  out << '\n';
}

CVector read_vector(std::istream& in) {
  Eigen::Index size = 0;
  if (!(in >> size) || size < 0) throw std::runtime_error("malformed solution vector");
  CVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    double re = 0.0, im = 0.0;
    if (!(in >> re >> im)) throw std::runtime_error("truncated solution vector");
    v[i] = Complex(re, im);
  }
  return v;
}

}  // namespace

void write_solution(std::ostream& out, const SolutionHeader& header, const SolutionFields& sol) {
  const auto precision = out.precision(17);
  out << "hdg-solution 1\n"
      << "n " << header.n << " k " << header.k << " kappa " << header.kappa << " variant "
      << header.variant << " bc " << header.bc << '\n'
      << "elements " << sol.stress.size() << " faces " << sol.trace.size() << '\n';
  for (std::size_t e = 0; e < sol.stress.size(); ++e) {
    write_vector(out, sol.stress[e]);
    write_vector(out, sol.displacement[e]);
  }
  for (const auto& t : sol.trace) write_vector(out, t);
  out.precision(precision);
}

SolutionFields read_solution(std::istream& in, SolutionHeader* header) {
  std::string magic, key;
  int version = 0;
  if (!(in >> magic >> version) || magic != "hdg-solution" || version != 1) {
    throw std::runtime_error("not an hdg-solution file");
  }
  SolutionHeader h;
  in >> key >> h.n >> key >> h.k >> key >> h.kappa >> key >> h.variant >> key >> h.bc;
  std::size_t ne = 0, nf = 0;
  in >> key >> ne >> key >> nf;
  if (!in) throw std::runtime_error("malformed hdg-solution header");
  SolutionFields sol;
  sol.k = h.k;
  sol.kappa = h.kappa;
  sol.variant = parse_flux_variant(h.variant);
  sol.stress.resize(ne);
  sol.displacement.resize(ne);
  sol.trace.resize(nf);
  for (std::size_t e = 0; e < ne; ++e) {
    sol.stress[e] = read_vector(in);
    sol.displacement[e] = read_vector(in);
  }
  for (auto& t : sol.trace) t = read_vector(in);
  if (header) *header = h;
  return sol;
}

}  // namespace hdg
