#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "hdg/types.hpp"

namespace hdg {

enum class BoundaryTag { interior, dirichlet, neumann, impedance };
enum class BoundaryConfig { mixed, all_dirichlet, impedance };

std::string to_string(BoundaryTag tag);
std::string to_string(BoundaryConfig config);
BoundaryConfig parse_boundary_config(const std::string& name);

struct Face {
  std::array<int, 3> vertices;  // ascending global indices
  Vec3 normal;                  // unit, outward for the owner
  double area = 0.0;
  BoundaryTag tag = BoundaryTag::interior;
  int owner = -1;
  int owner_local = -1;  // local face index within the owner
  int neighbor = -1;     // -1 on the boundary
  int neighbor_local = -1;

  bool is_boundary() const { return neighbor < 0; }
};

/// Face reference from an element: global face index and the sign that turns
/// the stored face normal into this element's outward normal.
struct ElementFace {
  int face = -1;
  int sign = 1;
};

/// Affine map x = origin + jacobian * xi from the reference tetrahedron.
struct ElementGeometry {
  Vec3 origin;
  Mat3 jacobian;
  Mat3 inverse;
  double det = 0.0;  // |det jacobian| = 6 * volume

  Vec3 to_physical(const Vec3& xi) const { return origin + jacobian * xi; }
  Vec3 to_reference(const Vec3& x) const { return inverse * (x - origin); }
};

/// Face parametrization x = origin + s*edge1 + t*edge2 built from the sorted
/// vertex triple, so every element sharing the face sees the same frame.
struct FaceGeometry {
  Vec3 origin;
  Vec3 edge1;
  Vec3 edge2;
  double area = 0.0;

  Vec3 to_physical(const Vec2& st) const {
    return origin + st[0] * edge1 + st[1] * edge2;
  }
};

/// Conforming tetrahedral mesh. Local face i of an element is the face
/// opposite its local vertex i. Faces are ordered by their sorted vertex
/// triples. Immutable after construction apart from boundary tags.
class Mesh {
 public:
  Mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> elements,
       int n = 0);

  int n() const { return n_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_boundary_faces() const;
  int count_faces(BoundaryTag tag) const;

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 4>>& elements() const { return elements_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int f) const { return faces_.at(f); }
  const std::array<ElementFace, 4>& element_faces(int e) const {
    return element_faces_.at(e);
  }
  double h(int e) const { return h_.at(e); }
  double max_h() const;

  ElementGeometry geometry(int e) const;
  FaceGeometry face_geometry(int f) const;
  double volume(int e) const;
  Vec3 centroid(int e) const;
  Vec3 outward_normal(int e, int local_face) const;

  /// True when every vertex lies in the closed unit cube and the cube corners
  /// are attained.
  bool is_unit_cube() const;

  void set_tag(int f, BoundaryTag tag) { faces_.at(f).tag = tag; }

 private:
  int n_ = 0;
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 4>> elements_;
  std::vector<Face> faces_;
  std::vector<std::array<ElementFace, 4>> element_faces_;
  std::vector<double> h_;
};

/// Unit cube split into n^3 subcubes, each cut into six tetrahedra around the
/// (0,0,0)-(1,1,1) diagonal. Boundary faces are tagged Dirichlet.
Mesh build_structured_cube(int n);

/// Retag the boundary. mixed: z=0 and z=1 Dirichlet, other cube faces
/// Neumann (meshes that are not the unit cube fall back to all Dirichlet).
/// all_dirichlet / impedance: every boundary face gets that tag.
Mesh tag_boundary(Mesh mesh, BoundaryConfig config);

/// Plain text: "NV NE", NV lines "x y z", NE lines "v0 v1 v2 v3" (0-based).
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);

}  // namespace hdg
