#ifndef VIRTENRICH_TRACE_HPP
#define VIRTENRICH_TRACE_HPP

#include "virtenrich/mesh.hpp"
#include "virtenrich/polynomial.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace virtenrich {

/// Trace data on one edge. `f` is in P_k and `normal` in P_{k-1}, both in the
/// edge parameter t running from the lower to the higher global vertex id.
/// lo/hi are the positions of those vertices in the owning cell (2D) or in the
/// sorted vertex triple of the owning face (3D). In 2D `normal` is g_{v,T}, the
/// derivative along the cell's outward normal; in 3D it is q = w_e . n_{e,F}.
struct EdgeTrace {
  Index edge = -1;
  int lo = 0;
  int hi = 1;
  Polynomial f;
  Polynomial normal;
};

/// Trace data on one face of a tetrahedron, in the face's reference
/// coordinates (sorted vertex triple).
struct FaceTrace {
  Index face = -1;
  std::array<int, 3> cell_vertex{};  ///< cell-local index of each sorted face vertex
  std::array<EdgeTrace, 3> edges;    ///< face_edges order
  Eigen::VectorXd interior_moments;  ///< normalized moments of f_F up to order k - 4
  Polynomial g;                      ///< outward normal derivative, P_{k-1}
};

struct CompatibilityReport {
  double max_residual = 0.0;
  /// Per local vertex (2D) or per local edge (3D, order 01 02 03 12 13 23).
  std::vector<double> residual;
};

/// The boundary pair (f_{v,T}, g_{v,T}) of one cell together with the vertex
/// data and interior moments that complete the local degrees of freedom.
struct CellTracePair {
  Index cell = -1;
  int dimension = 2;
  int k = 3;
  Eigen::VectorXd vertex_values;     ///< local vertex order
  Eigen::MatrixXd vertex_gradients;  ///< d x (d+1), the vectors w_p
  std::vector<EdgeTrace> edges;      ///< 2D: local facets
  std::vector<FaceTrace> faces;      ///< 3D: local facets
  Eigen::VectorXd interior_moments;  ///< normalized Q_{T,k-4} moments
  CompatibilityReport compatibility;
};

/// Residuals of the compatibility conditions in gradient-recovery form: the
/// vector field (df/ds) t + g n must be single valued where facets meet, and f
/// must agree there. Residuals are relative to max(1, max |field|).
CompatibilityReport check_compatibility(const SimplicialMesh& mesh, const CellTracePair& pair);

}  // namespace virtenrich

#endif  // VIRTENRICH_TRACE_HPP
