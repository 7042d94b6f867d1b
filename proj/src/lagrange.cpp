#include "virtenrich/lagrange.hpp"

#include "virtenrich/error.hpp"
#include "virtenrich/frames.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace virtenrich {

LagrangeSpace::LagrangeSpace(std::shared_ptr<const SimplicialMesh> mesh, int k) : mesh_(std::move(mesh)), k_(k) {
  if (k < 2 || k > kMaxLagrangeOrder)
    throw Error(ErrorCode::UnsupportedOrder, "Lagrange order " + std::to_string(k) + " outside [2, " +
                                                 std::to_string(kMaxLagrangeOrder) + "]");
  const SimplicialMesh& m = *mesh_;
  const int d = m.dimension();
  local_count_ = poly_dim(d, k);
  const auto exponents = monomial_exponents(d, k);
  const Index nv = m.num_vertices();

  node_points_.resize(nv);
  boundary_node_.assign(nv, false);
  for (Index v = 0; v < nv; ++v) {
    node_points_[v] = m.point(v);
    boundary_node_[v] = m.boundary_vertex(v);
  }

  std::map<std::vector<std::pair<Index, int>>, Index> keys;
  cell_dofs_.resize(m.num_cells() * local_count_);
  for (Index c = 0; c < m.num_cells(); ++c) {
    const auto verts = m.cell(c);
    const SimplexGeometry geometry = m.cell_geometry(c);
    for (Index i = 0; i < local_count_; ++i) {
      // Barycentric multiplicities of the lattice point alpha / k.
      std::vector<std::pair<Index, int>> key;
      int rest = k;
      for (int j = 0; j < d; ++j) {
        if (exponents[i][j] > 0) key.emplace_back(verts[j + 1], exponents[i][j]);
        rest -= exponents[i][j];
      }
      if (rest > 0) key.emplace_back(verts[0], rest);
      std::sort(key.begin(), key.end());

      Index global;
      if (key.size() == 1) {
        global = key[0].first;
      } else {
        auto [it, inserted] = keys.try_emplace(key, static_cast<Index>(node_points_.size()));
        global = it->second;
        if (inserted) {
          Eigen::VectorXd xi(d);
          for (int j = 0; j < d; ++j) xi(j) = static_cast<double>(exponents[i][j]) / k;
          node_points_.push_back(geometry.to_physical(xi));
          bool on_boundary = false;
          if (key.size() == 2) {
            on_boundary = m.boundary_edge(m.find_edge(key[0].first, key[1].first));
          } else if (key.size() == 3 && d == 3) {
            on_boundary = m.boundary_face(m.find_face(key[0].first, key[1].first, key[2].first));
          }
          boundary_node_.push_back(on_boundary);
        }
      }
      cell_dofs_[c * local_count_ + i] = global;
    }
  }
}

std::shared_ptr<const LagrangeSpace> build_space(std::shared_ptr<const SimplicialMesh> mesh, int k) {
  return std::make_shared<const LagrangeSpace>(std::move(mesh), k);
}

std::shared_ptr<const LagrangeSpace> build_space(const SimplicialMesh& mesh, int k) {
  return build_space(std::make_shared<const SimplicialMesh>(mesh), k);
}

LagrangeFunction::LagrangeFunction(std::shared_ptr<const LagrangeSpace> space, Eigen::VectorXd values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_->num_dofs()) throw Error(ErrorCode::IndexOutOfRange, "nodal value count");
  const SimplicialMesh& m = space_->mesh();
  const int d = m.dimension();
  const int k = space_->order();
  cells_.reserve(m.num_cells());
  Eigen::VectorXd local(space_->nodes_per_cell());
  for (Index c = 0; c < m.num_cells(); ++c) {
    const auto dofs = space_->cell_dofs(c);
    for (Index i = 0; i < local.size(); ++i) local(i) = values_(dofs[i]);
    cells_.push_back({m.cell_geometry(c), fit_lattice_values(d, k, local)});
  }
}

double LagrangeFunction::value(Index c, const Eigen::VectorXd& x) const { return cells_[c].value_at(x); }

Eigen::VectorXd LagrangeFunction::gradient(Index c, const Eigen::VectorXd& x) const {
  return cells_[c].gradient(cells_[c].geometry.to_reference(x));
}

bool LagrangeFunction::in_h10() const {
  for (Index i = 0; i < values_.size(); ++i)
    if (space_->boundary_node(i) && values_(i) != 0.0) return false;
  return true;
}

LagrangeFunction interpolate(std::shared_ptr<const LagrangeSpace> space,
                             const std::function<double(const Eigen::VectorXd&)>& sampler) {
  Eigen::VectorXd values(space->num_dofs());
  for (Index i = 0; i < values.size(); ++i) values(i) = sampler(space->node_point(i));
  return LagrangeFunction(std::move(space), std::move(values));
}

LagrangeFunction operator+(const LagrangeFunction& a, const LagrangeFunction& b) {
  if (&a.space() != &b.space()) throw Error(ErrorCode::MeshMismatch, "functions live in different spaces");
  return LagrangeFunction(a.space_ptr(), a.values() + b.values());
}

LagrangeFunction operator*(double s, const LagrangeFunction& a) { return LagrangeFunction(a.space_ptr(), s * a.values()); }

namespace {

// One-sided normal derivative data of a facet: the lower-index cell's outward
// normal, and dv/dn from each incident cell evaluated at facet reference points.
struct FacetSides {
  SimplexGeometry geometry;
  Eigen::VectorXd normal;
  std::vector<Index> cells;
};

FacetSides facet_sides(const SimplicialMesh& mesh, Index facet) {
  FacetSides s;
  s.geometry = mesh.facet_geometry(facet);
  const auto cells = mesh.facet_cells(facet);
  s.cells.assign(cells.begin(), cells.end());
  s.normal = facet_normal(mesh, s.cells[0], facet);
  return s;
}

double jump_at(const LagrangeFunction& v, const FacetSides& s, const Eigen::VectorXd& xi) {
  const Eigen::VectorXd x = s.geometry.to_physical(xi);
  double j = v.gradient(s.cells[0], x).dot(s.normal);
  if (s.cells.size() > 1) j -= v.gradient(s.cells[1], x).dot(s.normal);
  return j;
}

void require_same_space(const LagrangeFunction& a, const LagrangeFunction& b) {
  if (&a.mesh() != &b.mesh() || a.order() != b.order())
    throw Error(ErrorCode::MeshMismatch, "functions live in different spaces");
}

}  // namespace

PolynomialOnSimplex normal_jump(const LagrangeFunction& v, Index facet) {
  const SimplicialMesh& mesh = v.mesh();
  if (facet < 0 || facet >= mesh.num_facets()) throw Error(ErrorCode::IndexOutOfRange, "facet index");
  if (mesh.boundary_facet(facet)) throw Error(ErrorCode::BoundaryFacet, "normal jump requested on a boundary facet");
  const FacetSides s = facet_sides(mesh, facet);
  const Polynomial p = interpolate_reference(mesh.dimension() - 1, v.order() - 1,
                                             [&](const Eigen::VectorXd& xi) { return jump_at(v, s, xi); });
  return {s.geometry, p};
}

double jump_functional(const LagrangeFunction& w, const LagrangeFunction& v, bool include_boundary) {
  require_same_space(w, v);
  const SimplicialMesh& mesh = v.mesh();
  const int exactness = 2 * (v.order() - 1);
  double total = 0.0;
  for (Index f = 0; f < mesh.num_facets(); ++f) {
    if (mesh.boundary_facet(f) && !include_boundary) continue;
    const FacetSides s = facet_sides(mesh, f);
    const double integral = integrate(s.geometry, exactness, [&](const Eigen::VectorXd& xi) {
      return jump_at(w, s, xi) * jump_at(v, s, xi);
    });
    total += integral / mesh.facet_diameter(f);
  }
  return total;
}

HSeminormParts h_seminorm_parts(const LagrangeFunction& v) {
  const SimplicialMesh& mesh = v.mesh();
  HSeminormParts parts;
  const int exactness = 2 * std::max(v.order() - 2, 0);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const PolynomialOnSimplex& vc = v.cell(c);
    parts.hessian += integrate(vc.geometry, exactness,
                               [&](const Eigen::VectorXd& xi) { return vc.hessian(xi).squaredNorm(); });
  }
  parts.jump = jump_functional(v, v);
  return parts;
}

LagrangeFunction embed_quadratic_in_cubic(const LagrangeFunction& v2) {
  if (v2.order() != 2) throw Error(ErrorCode::UnsupportedOrder, "embedding expects a quadratic function");
  auto space3 = build_space(v2.space().mesh_ptr(), 3);
  if (&space3->mesh() != &v2.mesh()) throw Error(ErrorCode::MeshMismatch, "embedding changed the mesh");
  const int d = v2.mesh().dimension();
  const Eigen::MatrixXd& lattice = reference_lattice(d, 3);
  Eigen::VectorXd values(space3->num_dofs());
  for (Index c = 0; c < v2.mesh().num_cells(); ++c) {
    const auto dofs = space3->cell_dofs(c);
    for (Index i = 0; i < lattice.cols(); ++i) values(dofs[i]) = v2.cell(c).poly(lattice.col(i));
  }
  return LagrangeFunction(space3, values);
}

}  // namespace virtenrich
