#ifndef VIRTENRICH_LAGRANGE_HPP
#define VIRTENRICH_LAGRANGE_HPP

#include "virtenrich/mesh.hpp"
#include "virtenrich/simplex.hpp"

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace virtenrich {

inline constexpr int kMaxLagrangeOrder = 8;

/// The continuous Lagrange P_k space on a mesh.
///
/// Local nodes of a cell follow reference_lattice(d, k) in the cell's reference
/// coordinates. Vertex nodes carry the vertex id; every other node is numbered
/// in order of first appearance when cells are visited in order.
class LagrangeSpace {
 public:
  LagrangeSpace(std::shared_ptr<const SimplicialMesh> mesh, int k);

  const SimplicialMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const SimplicialMesh>& mesh_ptr() const { return mesh_; }
  int order() const { return k_; }
  int dimension() const { return mesh_->dimension(); }
  Index num_dofs() const { return static_cast<Index>(node_points_.size()); }
  Index nodes_per_cell() const { return local_count_; }

  std::span<const Index> cell_dofs(Index c) const {
    return {cell_dofs_.data() + c * local_count_, static_cast<std::size_t>(local_count_)};
  }
  const Eigen::VectorXd& node_point(Index i) const { return node_points_[i]; }
  bool boundary_node(Index i) const { return boundary_node_[i]; }

 private:
  std::shared_ptr<const SimplicialMesh> mesh_;
  int k_;
  Index local_count_;
  std::vector<Index> cell_dofs_;
  std::vector<Eigen::VectorXd> node_points_;
  std::vector<bool> boundary_node_;
};

/// Throws UnsupportedOrder unless 2 <= k <= kMaxLagrangeOrder.
std::shared_ptr<const LagrangeSpace> build_space(std::shared_ptr<const SimplicialMesh> mesh, int k);
std::shared_ptr<const LagrangeSpace> build_space(const SimplicialMesh& mesh, int k);

/// A member of V_h: global nodal values plus the induced cell polynomials.
class LagrangeFunction {
 public:
  LagrangeFunction(std::shared_ptr<const LagrangeSpace> space, Eigen::VectorXd values);

  const LagrangeSpace& space() const { return *space_; }
  const std::shared_ptr<const LagrangeSpace>& space_ptr() const { return space_; }
  const SimplicialMesh& mesh() const { return space_->mesh(); }
  int order() const { return space_->order(); }
  const Eigen::VectorXd& values() const { return values_; }

  /// v_T in the reference coordinates of cell c.
  const PolynomialOnSimplex& cell(Index c) const { return cells_[c]; }
  /// Value and physical gradient of v_T at a physical point.
  double value(Index c, const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(Index c, const Eigen::VectorXd& x) const;

  /// True when every boundary nodal value is zero.
  bool in_h10() const;

 private:
  std::shared_ptr<const LagrangeSpace> space_;
  Eigen::VectorXd values_;
  std::vector<PolynomialOnSimplex> cells_;
};

LagrangeFunction interpolate(std::shared_ptr<const LagrangeSpace> space,
                             const std::function<double(const Eigen::VectorXd&)>& sampler);

LagrangeFunction operator+(const LagrangeFunction& a, const LagrangeFunction& b);
LagrangeFunction operator*(double s, const LagrangeFunction& a);

/// Jump of the normal derivative across an interior facet, as a P_{k-1}
/// polynomial in the facet's reference coordinates. The normal is the outward
/// normal of the lower-index cell. Throws BoundaryFacet on boundary facets.
PolynomialOnSimplex normal_jump(const LagrangeFunction& v, Index facet);

/// sum over facets of h_F^{-1} int_F [dw/dn][dv/dn]. Interior facets only
/// unless include_boundary, which adds the one-sided normal derivatives.
double jump_functional(const LagrangeFunction& w, const LagrangeFunction& v, bool include_boundary = false);

struct HSeminormParts {
  double hessian = 0.0;  ///< sum_T ||D^2 v||^2
  double jump = 0.0;     ///< J(v, v)
  double total() const { return hessian + jump; }
};

HSeminormParts h_seminorm_parts(const LagrangeFunction& v);

/// The same function as a member of the cubic space on the same mesh.
LagrangeFunction embed_quadratic_in_cubic(const LagrangeFunction& v2);

}  // namespace virtenrich

#endif  // VIRTENRICH_LAGRANGE_HPP
