#include "hdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace hdg {

namespace {

constexpr double kCoordTol = 1e-12;

constexpr std::array<std::array<int, 3>, 4> kLocalFaceVertices{
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

}  // namespace

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::interior: return "interior";
    case BoundaryTag::dirichlet: return "dirichlet";
    case BoundaryTag::neumann: return "neumann";
    case BoundaryTag::impedance: return "impedance";
  }
  return "?";
}

std::string to_string(BoundaryConfig config) {
  switch (config) {
    case BoundaryConfig::mixed: return "mixed";
    case BoundaryConfig::all_dirichlet: return "all-dirichlet";
    case BoundaryConfig::impedance: return "impedance";
  }
  return "?";
}

BoundaryConfig parse_boundary_config(const std::string& name) {
  if (name == "mixed") return BoundaryConfig::mixed;
  if (name == "all-dirichlet" || name == "all_dirichlet") {
    return BoundaryConfig::all_dirichlet;
  }
  if (name == "impedance") return BoundaryConfig::impedance;
  throw std::invalid_argument("unknown boundary configuration '" + name + "'");
}

Mesh::Mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> elements,
           int n)
    : n_(n), vertices_(std::move(vertices)), elements_(std::move(elements)) {
  const int nv = num_vertices();
  for (auto& el : elements_) {
    for (int v : el) {
      if (v < 0 || v >= nv) throw std::invalid_argument("Mesh: vertex index out of range");
    }
    const Vec3& p0 = vertices_[el[0]];
    Mat3 jac;
    for (int d = 0; d < 3; ++d) jac.col(d) = vertices_[el[d + 1]] - p0;
    const double det = jac.determinant();
    if (std::abs(det) < 1e-300) throw std::invalid_argument("Mesh: degenerate element");
    if (det < 0) std::swap(el[2], el[3]);
  }

  std::map<std::array<int, 3>, std::vector<std::pair<int, int>>> incidence;
  for (int e = 0; e < num_elements(); ++e) {
    for (int lf = 0; lf < 4; ++lf) {
      std::array<int, 3> key;
      for (int i = 0; i < 3; ++i) key[i] = elements_[e][kLocalFaceVertices[lf][i]];
      std::sort(key.begin(), key.end());
      incidence[key].emplace_back(e, lf);
    }
  }

  element_faces_.resize(num_elements());
  faces_.reserve(incidence.size());
  for (const auto& [key, owners] : incidence) {
    if (owners.size() > 2) throw std::invalid_argument("Mesh: non-manifold face");
    Face face;
    face.vertices = key;
    face.owner = owners[0].first;
    face.owner_local = owners[0].second;
    if (owners.size() == 2) {
      face.neighbor = owners[1].first;
      face.neighbor_local = owners[1].second;
    } else {
      face.tag = BoundaryTag::dirichlet;
    }
    const Vec3& a = vertices_[key[0]];
    const Vec3 cross = (vertices_[key[1]] - a).cross(vertices_[key[2]] - a);
    face.area = 0.5 * cross.norm();
    Vec3 normal = cross.normalized();
    // orient outward for the owner: away from the opposite vertex
    const Vec3& opposite = vertices_[elements_[face.owner][face.owner_local]];
    if (normal.dot(a - opposite) < 0) normal = -normal;
    face.normal = normal;
    const int f = static_cast<int>(faces_.size());
    element_faces_[face.owner][face.owner_local] = {f, 1};
    if (face.neighbor >= 0) element_faces_[face.neighbor][face.neighbor_local] = {f, -1};
    faces_.push_back(face);
  }

  h_.resize(num_elements());
  for (int e = 0; e < num_elements(); ++e) {
    double h = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        h = std::max(h, (vertices_[elements_[e][i]] - vertices_[elements_[e][j]]).norm());
      }
    }
    h_[e] = h;
  }
}

int Mesh::num_boundary_faces() const {
  return static_cast<int>(std::count_if(faces_.begin(), faces_.end(),
                                        [](const Face& f) { return f.is_boundary(); }));
}

int Mesh::count_faces(BoundaryTag tag) const {
  return static_cast<int>(std::count_if(faces_.begin(), faces_.end(),
                                        [tag](const Face& f) { return f.tag == tag; }));
}

double Mesh::max_h() const { return *std::max_element(h_.begin(), h_.end()); }

ElementGeometry Mesh::geometry(int e) const {
  const auto& el = elements_.at(e);
  ElementGeometry g;
  g.origin = vertices_[el[0]];
  for (int d = 0; d < 3; ++d) g.jacobian.col(d) = vertices_[el[d + 1]] - g.origin;
  g.inverse = g.jacobian.inverse();
  g.det = std::abs(g.jacobian.determinant());
  return g;
}

FaceGeometry Mesh::face_geometry(int f) const {
  const Face& face = faces_.at(f);
  FaceGeometry g;
  g.origin = vertices_[face.vertices[0]];
  g.edge1 = vertices_[face.vertices[1]] - g.origin;
  g.edge2 = vertices_[face.vertices[2]] - g.origin;
  g.area = face.area;
  return g;
}

double Mesh::volume(int e) const { return geometry(e).det / 6.0; }

Vec3 Mesh::centroid(int e) const {
  const auto& el = elements_.at(e);
  return 0.25 * (vertices_[el[0]] + vertices_[el[1]] + vertices_[el[2]] +
                 vertices_[el[3]]);
}

Vec3 Mesh::outward_normal(int e, int local_face) const {
  if (e < 0 || e >= num_elements() || local_face < 0 || local_face > 3) {
    throw std::out_of_range("outward_normal: index out of range");
  }
  const ElementFace& ef = element_faces_[e][local_face];
  return ef.sign * faces_[ef.face].normal;
}

bool Mesh::is_unit_cube() const {
  Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
  for (const Vec3& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return lo.cwiseAbs().maxCoeff() < kCoordTol &&
         (hi - Vec3::Ones()).cwiseAbs().maxCoeff() < kCoordTol;
}

Mesh build_structured_cube(int n) {
  if (n < 1) throw std::invalid_argument("build_structured_cube: n must be >= 1");
  const int np = n + 1;
  auto vid = [np](int i, int j, int k) { return i + np * (j + np * k); };
  std::vector<Vec3> vertices;
  vertices.reserve(np * np * np);
  for (int k = 0; k < np; ++k) {
    for (int j = 0; j < np; ++j) {
      for (int i = 0; i < np; ++i) {
        vertices.emplace_back(double(i) / n, double(j) / n, double(k) / n);
      }
    }
  }
  // Each permutation of the axes gives one monotone path from corner
  // (0,0,0) to (1,1,1); the six paths are the six Kuhn tetrahedra.
  constexpr std::array<std::array<int, 3>, 6> kPerms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<std::array<int, 4>> elements;
  elements.reserve(6 * n * n * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (const auto& perm : kPerms) {
          std::array<int, 3> c{i, j, k};
          std::array<int, 4> tet;
          tet[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[perm[s]];
            tet[s + 1] = vid(c[0], c[1], c[2]);
          }
          elements.push_back(tet);
        }
      }
    }
  }
  return Mesh(std::move(vertices), std::move(elements), n);
}

Mesh tag_boundary(Mesh mesh, BoundaryConfig config) {
  const bool cube = mesh.is_unit_cube();
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (!face.is_boundary()) continue;
    BoundaryTag tag = BoundaryTag::dirichlet;
    switch (config) {
      case BoundaryConfig::all_dirichlet: tag = BoundaryTag::dirichlet; break;
      case BoundaryConfig::impedance: tag = BoundaryTag::impedance; break;
      case BoundaryConfig::mixed: {
        if (!cube) break;
        bool bottom = true, top = true;
        for (int v : face.vertices) {
          const double z = mesh.vertices()[v].z();
          bottom = bottom && std::abs(z) < kCoordTol;
          top = top && std::abs(z - 1.0) < kCoordTol;
        }
        tag = (bottom || top) ? BoundaryTag::dirichlet : BoundaryTag::neumann;
        break;
      }
    }
    mesh.set_tag(f, tag);
  }
  return mesh;
}

Mesh read_mesh(std::istream& in) {
  int nv = 0, ne = 0;
  if (!(in >> nv >> ne) || nv < 4 || ne < 1) {
    throw std::invalid_argument("read_mesh: bad header (expected 'NV NE')");
  }
  std::vector<Vec3> vertices(nv);
  for (auto& v : vertices) {
    if (!(in >> v.x() >> v.y() >> v.z())) throw std::invalid_argument("read_mesh: truncated vertex list");
  }
  std::vector<std::array<int, 4>> elements(ne);
  for (auto& el : elements) {
    if (!(in >> el[0] >> el[1] >> el[2] >> el[3])) {
      throw std::invalid_argument("read_mesh: truncated element list");
    }
  }
  return Mesh(std::move(vertices), std::move(elements));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("read_mesh_file: cannot open " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
  out.precision(17);
  for (const Vec3& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& el : mesh.elements()) {
    out << el[0] << ' ' << el[1] << ' ' << el[2] << ' ' << el[3] << '\n';
  }
}

}  // namespace hdg
