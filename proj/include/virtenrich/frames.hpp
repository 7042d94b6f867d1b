#ifndef VIRTENRICH_FRAMES_HPP
#define VIRTENRICH_FRAMES_HPP

#include "virtenrich/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace virtenrich {

/// Unit tangent of an edge, from its lower to its higher vertex index.
Eigen::VectorXd edge_tangent(const SimplicialMesh& mesh, Index edge);

/// Unit normal of a facet pointing out of the given cell.
Eigen::VectorXd facet_normal(const SimplicialMesh& mesh, Index cell, Index facet);

/// Unit normal of a boundary facet pointing out of the domain.
Eigen::VectorXd boundary_normal(const SimplicialMesh& mesh, Index facet);

/// In-plane unit co-normal of an edge of a face, pointing away from the face's
/// third vertex (3D only).
Eigen::Vector3d edge_conormal(const SimplicialMesh& mesh, Index face, Index edge);

/// Orthonormal basis (b1, b2) of the plane orthogonal to an edge (3D only).
/// b1 is Gram-Schmidt of the first coordinate axis with |t . axis| < 0.9 and
/// b2 = t x b1, so the pair depends only on the edge.
std::array<Eigen::Vector3d, 2> edge_perp_basis(const SimplicialMesh& mesh, Index edge);

/// Geometric frame of a facet seen from one of its cells.
struct FacetFrame {
  Index cell = -1;
  Index facet = -1;
  Eigen::VectorXd normal;    ///< outward from the cell
  Eigen::VectorXd tangent;   ///< 2D: edge tangent
  std::vector<Index> edges;  ///< 3D: face edges in face_edges order
  std::vector<Eigen::Vector3d> conormals;
  std::vector<std::array<Eigen::Vector3d, 2>> perp_bases;
};

FacetFrame facet_frame(const SimplicialMesh& mesh, Index cell, Index facet);

}  // namespace virtenrich

#endif  // VIRTENRICH_FRAMES_HPP
