#ifndef VIRTENRICH_SKELETON_HPP
#define VIRTENRICH_SKELETON_HPP

#include "virtenrich/lagrange.hpp"
#include "virtenrich/mesh.hpp"
#include "virtenrich/trace.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace virtenrich {

struct SkeletonOptions {
  /// Pick uniformly among eligible cells instead of the lowest index.
  bool randomize_choices = false;
  std::uint64_t seed = 0;
};

struct SkeletonVertex {
  Eigen::VectorXd w;
  int case_label = 1;         ///< 1: interior, 2: smooth boundary, 3: corner / edge of the domain
  Index cell = -1;            ///< chosen cell for cases 1 and 2
  std::vector<Index> edges;   ///< chosen boundary edges for case 3
};

struct SkeletonEdge {
  Index owner = -1;
  int case_label = 1;
  std::array<Index, 2> faces{-1, -1};  ///< 3D case 3: the two boundary faces
  Polynomial f;                        ///< P_k, single valued
  Polynomial g;                        ///< 2D: P_{k-1}, along the owner's outward normal
  std::array<Polynomial, 2> w;         ///< 3D: components of w_e on edge_perp_basis
};

struct SkeletonFace {
  Index owner = -1;
  Polynomial g;                      ///< P_{k-1} in face reference coordinates, owner's outward normal
  Eigen::VectorXd interior_moments;  ///< Q_{F,k-4} v, normalized
};

struct SkeletonData {
  int dimension = 2;
  int k = 3;
  std::vector<SkeletonVertex> vertices;
  std::vector<SkeletonEdge> edges;
  std::vector<SkeletonFace> faces;
};

std::vector<SkeletonVertex> vertex_vectors(const LagrangeFunction& v, const BoundaryClassification& classes,
                                           const SkeletonOptions& options = {});

/// Edge data f_e and g_e (2D).
std::vector<SkeletonEdge> edge_normal_polys_2d(const LagrangeFunction& v, const std::vector<SkeletonVertex>& w,
                                               const SkeletonOptions& options = {});

/// Edge data f_e and w_e (3D).
std::vector<SkeletonEdge> edge_vector_fields_3d(const LagrangeFunction& v, const std::vector<SkeletonVertex>& w,
                                                const BoundaryClassification& classes,
                                                const SkeletonOptions& options = {});

std::vector<SkeletonFace> face_normal_data_3d(const LagrangeFunction& v, const std::vector<SkeletonVertex>& w,
                                              const std::vector<SkeletonEdge>& edges,
                                              const SkeletonOptions& options = {});

SkeletonData build_skeleton(const LagrangeFunction& v, const BoundaryClassification& classes,
                            const SkeletonOptions& options = {});

/// The trace pair of one cell, with its compatibility report filled in.
CellTracePair cell_trace(const LagrangeFunction& v, const SkeletonData& skeleton, Index cell);

/// w_e evaluated at edge parameter t, as a vector in R^3.
Eigen::Vector3d edge_vector(const SimplicialMesh& mesh, const SkeletonEdge& edge, Index edge_id, double t);

/// Interior moments of v_T on the cell, up to order k - 4.
Eigen::VectorXd cell_interior_moments(const LagrangeFunction& v, Index cell);

}  // namespace virtenrich

#endif  // VIRTENRICH_SKELETON_HPP
