#include "virtenrich/error.hpp"
#include "virtenrich/simplex.hpp"
#include "virtenrich/vem.hpp"

#include <cmath>

namespace virtenrich {

double dof_l2_norm(const SimplicialMesh& mesh, const CellDofs& dofs) {
  const int d = mesh.dimension();
  const int k = dofs.k;
  const Index c = dofs.cell;
  const double h = mesh.cell_diameter(c);
  const double h2 = h * h;
  double sum = projection_norm_squared(mesh.cell_geometry(c).measure(), d, k - 4, dofs.interior);
  const auto edges = mesh.cell_edges(c);
  if (d == 2) {
    for (int j = 0; j < 3; ++j) {
      const double len = mesh.edge_length(edges[j]);
      sum += h * projection_norm_squared(len, 1, k - 4, dofs.edge_f[j]);
      sum += h * h2 * projection_norm_squared(len, 1, k - 3, dofs.edge_normal[j]);
    }
    for (int i = 0; i < 3; ++i)
      sum += h2 * dofs.vertex_values(i) * dofs.vertex_values(i) + h2 * h2 * dofs.vertex_gradients.col(i).squaredNorm();
    return std::sqrt(sum);
  }
  const auto faces = mesh.cell_faces(c);
  for (int i = 0; i < 4; ++i) {
    const double area = mesh.face_geometry(faces[i]).measure();
    sum += h * projection_norm_squared(area, 2, k - 4, dofs.face_f[i]);
    sum += h * h2 * projection_norm_squared(area, 2, k - 4, dofs.face_g[i]);
  }
  for (int j = 0; j < 6; ++j) {
    const double len = mesh.edge_length(edges[j]);
    sum += h2 * projection_norm_squared(len, 1, k - 4, dofs.edge_f[j]);
    for (int r = 0; r < 2; ++r)
      sum += h2 * h2 * projection_norm_squared(len, 1, k - 3, dofs.edge_normal[j].segment(r * (k - 2), k - 2));
  }
  for (int i = 0; i < 4; ++i)
    sum += h * h2 * dofs.vertex_values(i) * dofs.vertex_values(i) +
           h * h2 * h2 * dofs.vertex_gradients.col(i).squaredNorm();
  return std::sqrt(sum);
}

ErrorDofNorms error_dof_norms(const LagrangeFunction& v, const VemFunction& ehv, Index cell) {
  if (&v.mesh() != ehv.mesh.get()) throw Error(ErrorCode::MeshMismatch, "E_h v lives on a different mesh");
  const PolynomialOnSimplex& vc = v.cell(cell);
  const CellDofs own = function_cell_dofs(
      v.mesh(), cell, ehv.k, [&](const Eigen::VectorXd& x) { return vc.value_at(x); },
      [&](const Eigen::VectorXd& x) { return vc.gradient(vc.geometry.to_reference(x)); });
  ErrorDofNorms out;
  out.l2 = dof_l2_norm(v.mesh(), own - cell_dofs(ehv, cell));
  const double h = v.mesh().cell_diameter(cell);
  out.h2 = out.l2 / (h * h);
  return out;
}

}  // namespace virtenrich
