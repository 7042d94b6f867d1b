#ifndef VIRTENRICH_MESH_HPP
#define VIRTENRICH_MESH_HPP

#include "virtenrich/polynomial.hpp"
#include "virtenrich/simplex.hpp"

#include <Eigen/Dense>

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace virtenrich {

/// (d+1) x n matrix of 0-based vertex indices, one cell per column.
using CellMatrix = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>;

/// Compressed row adjacency: for entity i, data[offsets[i] .. offsets[i+1]).
struct Adjacency {
  std::vector<Index> offsets{0};
  std::vector<Index> data;

  std::span<const Index> operator[](Index i) const {
    return {data.data() + offsets[i], static_cast<std::size_t>(offsets[i + 1] - offsets[i])};
  }
  Index size() const { return static_cast<Index>(offsets.size()) - 1; }
};

/// Orientation preserving affine map from the reference simplex onto a cell.
struct AffineMap {
  Eigen::MatrixXd jacobian;
  Eigen::VectorXd offset;
  double determinant = 0.0;
  std::vector<Index> vertex_order;  ///< global vertex ids hit by reference vertices 0..d
  bool reordered = false;           ///< true when the input order had to be swapped
};

/// Conforming simplicial mesh in 2 or 3 dimensions.
///
/// Edges and faces are identified by their sorted vertex tuples and numbered in
/// lexicographic order of those tuples. Cells keep their input numbering; their
/// vertex order is the input order with the last two vertices swapped when the
/// input was negatively oriented. Facets are edges in 2D and faces in 3D; the
/// local facet i of a cell is the one opposite local vertex i.
class SimplicialMesh {
 public:
  int dimension() const { return dim_; }
  Index num_vertices() const { return points_.cols(); }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  Index num_faces() const { return static_cast<Index>(faces_.size()); }
  Index num_cells() const { return static_cast<Index>(cell_vertices_.size()) / (dim_ + 1); }
  Index num_facets() const { return dim_ == 2 ? num_edges() : num_faces(); }

  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::VectorXd point(Index v) const { return points_.col(v); }

  std::span<const Index> cell(Index c) const { return span_of(cell_vertices_, c, dim_ + 1); }
  bool reoriented(Index c) const { return reoriented_[c]; }
  /// Cells as given to build_mesh.
  const CellMatrix& input_cells() const { return input_cells_; }

  const std::array<Index, 2>& edge(Index e) const { return edges_[e]; }
  const std::array<Index, 3>& face(Index f) const { return faces_[f]; }
  std::vector<Index> facet(Index f) const;

  /// Local edges; in 2D edge i is opposite local vertex i, in 3D the order is
  /// (01, 02, 03, 12, 13, 23).
  std::span<const Index> cell_edges(Index c) const { return span_of(cell_edges_, c, dim_ == 2 ? 3 : 6); }
  /// Local faces of a tetrahedron, face i opposite local vertex i.
  std::span<const Index> cell_faces(Index c) const { return span_of(cell_faces_, c, 4); }
  std::span<const Index> cell_facets(Index c) const { return dim_ == 2 ? cell_edges(c) : cell_faces(c); }
  /// Local index of a facet within a cell, -1 if absent.
  int local_facet(Index c, Index facet) const;
  /// Local vertex index of a global vertex within a cell, -1 if absent.
  int local_vertex(Index c, Index v) const;

  std::span<const Index> vertex_cells(Index v) const { return vertex_cells_[v]; }
  std::span<const Index> vertex_edges(Index v) const { return vertex_edges_[v]; }
  std::span<const Index> edge_cells(Index e) const { return edge_cells_[e]; }
  std::span<const Index> edge_faces(Index e) const { return edge_faces_[e]; }
  std::span<const Index> face_cells(Index f) const { return face_cells_[f]; }
  std::span<const Index> facet_cells(Index f) const { return dim_ == 2 ? edge_cells(f) : face_cells(f); }
  /// The three edges of a face, edge i opposite the face's i-th sorted vertex.
  std::span<const Index> face_edges(Index f) const { return span_of(face_edges_, f, 3); }

  Index find_edge(Index a, Index b) const;
  Index find_face(Index a, Index b, Index c) const;

  bool boundary_vertex(Index v) const { return boundary_vertex_[v]; }
  bool boundary_edge(Index e) const { return boundary_edge_[e]; }
  bool boundary_face(Index f) const { return boundary_face_[f]; }
  bool boundary_facet(Index f) const { return dim_ == 2 ? boundary_edge(f) : boundary_face(f); }

  double cell_diameter(Index c) const { return cell_diameter_[c]; }
  double edge_length(Index e) const { return edge_length_[e]; }
  double face_diameter(Index f) const { return face_diameter_[f]; }
  double facet_diameter(Index f) const { return dim_ == 2 ? edge_length(f) : face_diameter(f); }
  /// Diameter over inradius.
  double shape_regularity(Index c) const { return shape_regularity_[c]; }
  double max_cell_diameter() const;

  SimplexGeometry cell_geometry(Index c) const;
  /// Parameterized from the lower to the higher vertex index.
  SimplexGeometry edge_geometry(Index e) const;
  /// Parameterized by the sorted vertex triple.
  SimplexGeometry face_geometry(Index f) const;
  SimplexGeometry facet_geometry(Index f) const { return dim_ == 2 ? edge_geometry(f) : face_geometry(f); }

 private:
  friend SimplicialMesh build_mesh(const Eigen::MatrixXd&, const CellMatrix&);

  static std::span<const Index> span_of(const std::vector<Index>& v, Index i, Index stride) {
    return {v.data() + i * stride, static_cast<std::size_t>(stride)};
  }

  int dim_ = 2;
  Eigen::MatrixXd points_;
  CellMatrix input_cells_;
  std::vector<Index> cell_vertices_;
  std::vector<bool> reoriented_;
  std::vector<std::array<Index, 2>> edges_;
  std::vector<std::array<Index, 3>> faces_;
  std::vector<Index> cell_edges_;
  std::vector<Index> cell_faces_;
  std::vector<Index> face_edges_;
  Adjacency vertex_cells_, vertex_edges_, edge_cells_, edge_faces_, face_cells_;
  std::vector<bool> boundary_vertex_, boundary_edge_, boundary_face_;
  std::vector<double> cell_diameter_, edge_length_, face_diameter_, shape_regularity_;
};

/// Builds and validates a mesh. Throws IndexOutOfRange, DegenerateCell or NonConforming.
SimplicialMesh build_mesh(const Eigen::MatrixXd& points, const CellMatrix& cells);

AffineMap affine_map(const SimplicialMesh& mesh, Index cell);

/// Red refinement: 4 children per triangle, 8 per tetrahedron (octahedron split
/// along its shortest diagonal). New vertices are edge midpoints, numbered
/// num_vertices + edge id.
SimplicialMesh refine_uniform(const SimplicialMesh& mesh);
SimplicialMesh refine_uniform(const SimplicialMesh& mesh, int times);

/// Unit square split into two triangles along the diagonal (0,0)-(1,1).
SimplicialMesh unit_square_mesh();
/// Unit cube split into six tetrahedra around the diagonal (0,0,0)-(1,1,1).
SimplicialMesh unit_cube_mesh();
/// The reference triangle / tetrahedron as a one-cell mesh.
SimplicialMesh reference_simplex_mesh(int dimension);

/// x -> scale * x.
SimplicialMesh dilate(const SimplicialMesh& mesh, double scale);
/// Applies a vertex permutation (new id of old vertex v is vertex_map[v]) and a
/// cell permutation (new position of old cell c is cell_map[c]).
SimplicialMesh relabel(const SimplicialMesh& mesh, std::span<const Index> vertex_map, std::span<const Index> cell_map);
/// Relabels vertices by lexicographic coordinate order and cells by sorted vertex tuples.
SimplicialMesh canonical_relabel(const SimplicialMesh& mesh);

/// Plain-text mesh format: `dim d`, then `v x y [z]` and `c i0 i1 i2 [i3]` lines.
SimplicialMesh read_mesh(std::istream& in);
SimplicialMesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const SimplicialMesh& mesh);
std::string mesh_to_string(const SimplicialMesh& mesh);

enum class VertexClass { interior, boundary_smooth, boundary_edge, corner };
enum class EdgeClass { interior, boundary, on_domain_face, on_domain_edge };

std::string_view to_string(VertexClass c);
std::string_view to_string(EdgeClass c);

/// Geometric classification of boundary entities relative to the polygonal /
/// polyhedral domain. In 2D boundary edges are `boundary`; in 3D they are
/// `on_domain_face` or `on_domain_edge`.
struct BoundaryClassification {
  std::vector<VertexClass> vertex;
  std::vector<EdgeClass> edge;
  double tolerance = 1e-9;
};

inline constexpr double kDefaultPlanarTolerance = 1e-9;

/// Angles below tolerance count as straight/coplanar, angles above ten times the
/// tolerance as kinks; anything in between throws AmbiguousGeometry.
BoundaryClassification classify_boundary(const SimplicialMesh& mesh, double tolerance = kDefaultPlanarTolerance);

}  // namespace virtenrich

#endif  // VIRTENRICH_MESH_HPP
