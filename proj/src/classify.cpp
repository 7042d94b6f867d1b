#include "virtenrich/error.hpp"
#include "virtenrich/frames.hpp"
#include "virtenrich/mesh.hpp"

#include <cmath>

namespace virtenrich {
namespace {

double angle_between(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double cross;
  if (a.size() == 2) {
    cross = std::abs(a(0) * b(1) - a(1) * b(0));
  } else {
    cross = Eigen::Vector3d(a).cross(Eigen::Vector3d(b)).norm();
  }
  return std::atan2(cross, a.dot(b));
}

// Number of distinct directions among unit normals, comparing with the banded tolerance.
int distinct_directions(const std::vector<Eigen::VectorXd>& normals, double tol, const std::string& where) {
  std::vector<Eigen::VectorXd> reps;
  for (const auto& n : normals) {
    bool matched = false;
    for (const auto& r : reps) {
      const double angle = angle_between(n, r);
      if (angle < tol) {
        matched = true;
        break;
      }
      if (angle <= 10.0 * tol)
        throw Error(ErrorCode::AmbiguousGeometry, where + ": boundary angle " + std::to_string(angle) +
                                                      " rad is inside the tolerance band");
    }
    if (!matched) reps.push_back(n);
  }
  return static_cast<int>(reps.size());
}

}  // namespace

std::string_view to_string(VertexClass c) {
  switch (c) {
    case VertexClass::interior: return "interior";
    case VertexClass::boundary_smooth: return "boundary_smooth";
    case VertexClass::boundary_edge: return "boundary_edge";
    case VertexClass::corner: return "corner";
  }
  return "?";
}

std::string_view to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::interior: return "interior";
    case EdgeClass::boundary: return "boundary";
    case EdgeClass::on_domain_face: return "on_domain_face";
    case EdgeClass::on_domain_edge: return "on_domain_edge";
  }
  return "?";
}

BoundaryClassification classify_boundary(const SimplicialMesh& mesh, double tolerance) {
  if (!(tolerance > 0.0 && tolerance < 0.1))
    throw Error(ErrorCode::AmbiguousGeometry, "tolerance must lie in (0, 0.1)");
  const int d = mesh.dimension();
  const Index nf = mesh.num_facets();
  std::vector<Eigen::VectorXd> normal(nf);
  for (Index f = 0; f < nf; ++f)
    if (mesh.boundary_facet(f)) normal[f] = boundary_normal(mesh, f);

  BoundaryClassification out;
  out.tolerance = tolerance;
  out.vertex.assign(mesh.num_vertices(), VertexClass::interior);
  out.edge.assign(mesh.num_edges(), EdgeClass::interior);

  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (!mesh.boundary_vertex(v)) continue;
    std::vector<Eigen::VectorXd> normals;
    if (d == 2) {
      for (Index e : mesh.vertex_edges(v))
        if (mesh.boundary_edge(e)) normals.push_back(normal[e]);
    } else {
      for (Index c : mesh.vertex_cells(v))
        for (Index f : mesh.cell_faces(c))
          if (mesh.boundary_face(f)) {
            const auto& fv = mesh.face(f);
            if (fv[0] == v || fv[1] == v || fv[2] == v) normals.push_back(normal[f]);
          }
    }
    const int n = distinct_directions(normals, tolerance, "vertex " + std::to_string(v));
    if (n <= 1)
      out.vertex[v] = VertexClass::boundary_smooth;
    else if (d == 2 || n >= 3)
      out.vertex[v] = VertexClass::corner;
    else
      out.vertex[v] = VertexClass::boundary_edge;
  }

  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.boundary_edge(e)) continue;
    if (d == 2) {
      out.edge[e] = EdgeClass::boundary;
      continue;
    }
    std::vector<Eigen::VectorXd> normals;
    for (Index f : mesh.edge_faces(e))
      if (mesh.boundary_face(f)) normals.push_back(normal[f]);
    const int n = distinct_directions(normals, tolerance, "edge " + std::to_string(e));
    out.edge[e] = n <= 1 ? EdgeClass::on_domain_face : EdgeClass::on_domain_edge;
  }
  return out;
}

}  // namespace virtenrich
