#ifndef VIRTENRICH_VEM_HPP
#define VIRTENRICH_VEM_HPP

#include "virtenrich/fields.hpp"
#include "virtenrich/lagrange.hpp"
#include "virtenrich/mesh.hpp"
#include "virtenrich/skeleton.hpp"
#include "virtenrich/trace.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace virtenrich {

/// dim of the trace space: 6(k-1) in 2D, 2(k-1)(2k+1) in 3D. Needs k >= 3.
Index trace_space_dim(int k, int d);
/// Trace dimension plus dim P_{k-4} of the cell.
Index vem_space_dim(int k, int d);

/// A global H^2 virtual element function stored by its degrees of freedom.
///
/// Shared entities carry their dofs once. All moments are normalized moments in
/// the entity's reference coordinates (edges from the lower vertex id, faces by
/// sorted vertex triple, cells in their oriented vertex order). Normal data of
/// facets is oriented by the owning cell's outward normal.
struct VemFunction {
  std::shared_ptr<const SimplicialMesh> mesh;
  int k = 3;
  Eigen::VectorXd vertex_values;     ///< one per vertex
  Eigen::MatrixXd vertex_gradients;  ///< d x num_vertices
  Eigen::MatrixXd edge_f;            ///< (k-3) x num_edges, moments of f up to k-4
  /// 2D: (k-2) x num_edges, moments of g up to k-3.
  /// 3D: 2(k-2) x num_edges, moments of the two e-perp components of grad up to k-3.
  Eigen::MatrixXd edge_normal;
  Eigen::MatrixXd face_f;  ///< 3D: dim P_{k-4}(2) x num_faces
  Eigen::MatrixXd face_g;  ///< 3D: dim P_{k-4}(2) x num_faces, owner orientation
  Eigen::MatrixXd cell_moments;  ///< dim P_{k-4}(d) x num_cells
  std::vector<Index> facet_owner;

  int dimension() const { return mesh->dimension(); }
  Index num_dofs() const;
  /// All dofs in storage order (vertices, edges, faces, cells).
  Eigen::VectorXd flatten() const;
};

/// Local view of the dofs of one cell, with facet normal data oriented by the
/// cell's own outward normals. Edge arrays follow cell_edges, face arrays
/// cell_faces.
struct CellDofs {
  Index cell = -1;
  int dimension = 2;
  int k = 3;
  Eigen::VectorXd vertex_values;
  Eigen::MatrixXd vertex_gradients;
  std::vector<Eigen::VectorXd> edge_f;
  std::vector<Eigen::VectorXd> edge_normal;
  std::vector<Eigen::VectorXd> face_f;
  std::vector<Eigen::VectorXd> face_g;
  Eigen::VectorXd interior;

  Index size() const;
  Eigen::VectorXd flatten() const;
};

CellDofs operator-(const CellDofs& a, const CellDofs& b);

CellDofs cell_dofs(const VemFunction& xi, Index cell);

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Dofs of a smooth function seen from one cell (its own outward normals).
CellDofs function_cell_dofs(const SimplicialMesh& mesh, Index cell, int k, const ScalarFn& value,
                            const GradientFn& gradient);
/// Dofs of the cell polynomial v_T.
CellDofs lagrange_cell_dofs(const LagrangeFunction& v, Index cell);

/// Global dofs of a smooth field, normal data oriented by the lowest-index cell.
VemFunction interpolate_dofs(std::shared_ptr<const SimplicialMesh> mesh, int k, const Field& field);

/// E_h v. Quadratic input is first embedded into the cubic space.
VemFunction enrich(const LagrangeFunction& v, const BoundaryClassification& classes,
                   const SkeletonOptions& options = {});
VemFunction enrich(const LagrangeFunction& v);
/// E_h v from an already built skeleton.
VemFunction enrich_from_skeleton(const LagrangeFunction& v, const SkeletonData& skeleton);

/// Trace pair rebuilt from cell dofs.
CellTracePair trace_from_dofs(const SimplicialMesh& mesh, const CellDofs& dofs);

struct ConformityReport {
  bool clean = true;
  std::vector<std::string> violations;
};

/// Shared-entity dofs must agree between neighbouring cells and facet normal
/// data must have opposite signs.
ConformityReport check_conformity(const SimplicialMesh& mesh, const std::vector<CellDofs>& cells,
                                  double tolerance = 1e-12);
ConformityReport check_conformity(const VemFunction& xi, double tolerance = 1e-12);

/// Square root of the scaled dof sum equivalent to ||xi||_{L2(T)}^2.
double dof_l2_norm(const SimplicialMesh& mesh, const CellDofs& dofs);

struct ErrorDofNorms {
  double l2 = 0.0;  ///< dof discrepancy between v_T and E_h v on T
  double h2 = 0.0;  ///< surrogate: l2 / h_T^2
};

ErrorDofNorms error_dof_norms(const LagrangeFunction& v, const VemFunction& ehv, Index cell);

/// One row per stored dof, for export.
struct DofEntry {
  std::string kind;
  Index id = 0;
  std::string slot;
  double value = 0.0;
};

std::vector<DofEntry> dof_table(const VemFunction& xi);

}  // namespace virtenrich

#endif  // VIRTENRICH_VEM_HPP
