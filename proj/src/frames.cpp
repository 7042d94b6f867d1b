#include "virtenrich/frames.hpp"

#include "virtenrich/error.hpp"

namespace virtenrich {

Eigen::VectorXd edge_tangent(const SimplicialMesh& mesh, Index edge) {
  const auto& e = mesh.edge(edge);
  return (mesh.point(e[1]) - mesh.point(e[0])).normalized();
}

Eigen::VectorXd facet_normal(const SimplicialMesh& mesh, Index cell, Index facet) {
  const int local = mesh.local_facet(cell, facet);
  if (local < 0) throw Error(ErrorCode::IndexOutOfRange, "facet does not belong to cell");
  const std::vector<Index> verts = mesh.facet(facet);
  const Eigen::VectorXd a = mesh.point(verts[0]);
  Eigen::VectorXd n;
  if (mesh.dimension() == 2) {
    const Eigen::Vector2d t = mesh.point(verts[1]) - a;
    n = Eigen::Vector2d(t.y(), -t.x());
  } else {
    const Eigen::Vector3d u = mesh.point(verts[1]) - a;
    const Eigen::Vector3d w = mesh.point(verts[2]) - a;
    n = u.cross(w);
  }
  n.normalize();
  const Eigen::VectorXd opposite = mesh.point(mesh.cell(cell)[local]);
  if (n.dot(a - opposite) < 0.0) n = -n;
  return n;
}

Eigen::VectorXd boundary_normal(const SimplicialMesh& mesh, Index facet) {
  const auto cells = mesh.facet_cells(facet);
  if (cells.size() != 1) throw Error(ErrorCode::IndexOutOfRange, "facet is not on the boundary");
  return facet_normal(mesh, cells[0], facet);
}

Eigen::Vector3d edge_conormal(const SimplicialMesh& mesh, Index face, Index edge) {
  const auto& f = mesh.face(face);
  const auto& e = mesh.edge(edge);
  Index third = -1;
  for (Index v : f)
    if (v != e[0] && v != e[1]) third = v;
  if (third < 0) throw Error(ErrorCode::IndexOutOfRange, "edge does not belong to face");
  const Eigen::Vector3d a = mesh.point(e[0]);
  const Eigen::Vector3d t = (Eigen::Vector3d(mesh.point(e[1])) - a).normalized();
  const Eigen::Vector3d r = a - Eigen::Vector3d(mesh.point(third));
  return (r - r.dot(t) * t).normalized();
}

std::array<Eigen::Vector3d, 2> edge_perp_basis(const SimplicialMesh& mesh, Index edge) {
  const Eigen::Vector3d t = edge_tangent(mesh, edge);
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::Vector3d a = Eigen::Vector3d::Unit(axis);
    if (std::abs(t.dot(a)) >= 0.9) continue;
    const Eigen::Vector3d b1 = (a - t.dot(a) * t).normalized();
    return {b1, t.cross(b1)};
  }
  // Unreachable: a unit vector has |t_i| < 0.9 for some i.
  throw Error(ErrorCode::SingularSystem, "no admissible axis for edge frame");
}

FacetFrame facet_frame(const SimplicialMesh& mesh, Index cell, Index facet) {
  FacetFrame frame;
  frame.cell = cell;
  frame.facet = facet;
  frame.normal = facet_normal(mesh, cell, facet);
  if (mesh.dimension() == 2) {
    frame.tangent = edge_tangent(mesh, facet);
    return frame;
  }
  for (Index e : mesh.face_edges(facet)) {
    frame.edges.push_back(e);
    frame.conormals.push_back(edge_conormal(mesh, facet, e));
    frame.perp_bases.push_back(edge_perp_basis(mesh, e));
  }
  return frame;
}

}  // namespace virtenrich
