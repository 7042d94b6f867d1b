#include "virtenrich/energy_projection.hpp"

#include "virtenrich/error.hpp"
#include "virtenrich/frames.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>

namespace virtenrich {
namespace {

// Derivative operators on the coefficients of the graded monomial basis.
struct DerivativeTables {
  std::vector<Eigen::MatrixXd> first;               // D_a
  std::vector<std::vector<Eigen::MatrixXd>> second;  // D_a D_b
  std::vector<Eigen::MatrixXd> grad_laplacian;       // D_c sum_a D_a D_a
  Eigen::MatrixXd bilaplacian;
};

const DerivativeTables& derivative_tables(int d, int k) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<DerivativeTables>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{d, k}];
  if (slot) return *slot;
  auto t = std::make_unique<DerivativeTables>();
  const Index n = poly_dim(d, k);
  const auto exps = monomial_exponents(d, k);
  for (int a = 0; a < d; ++a) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      Exponent e = exps[i];
      if (e[a] == 0) continue;
      const double factor = e[a];
      e[a] -= 1;
      m(monomial_index(d, e), i) = factor;
    }
    t->first.push_back(m);
  }
  Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
  t->second.resize(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      t->second[a].push_back(t->first[a] * t->first[b]);
      if (a == b) laplacian += t->second[a][b];
    }
  for (int c = 0; c < d; ++c) t->grad_laplacian.push_back(t->first[c] * laplacian);
  t->bilaplacian = laplacian * laplacian;
  slot = std::move(t);
  return *slot;
}

struct FacetData {
  SimplexGeometry geometry;
  std::function<double(const Eigen::VectorXd&)> f;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> field;  // (xi, outward normal)
};

Eigen::VectorXd outward_normal(const SimplexGeometry& facet, const Eigen::VectorXd& opposite) {
  Eigen::VectorXd n;
  const Eigen::VectorXd a = facet.vertex(0);
  if (facet.ambient_dimension() == 2) {
    const Eigen::Vector2d t = facet.vertex(1) - a;
    n = Eigen::Vector2d(t.y(), -t.x());
  } else {
    n = Eigen::Vector3d(facet.vertex(1) - a).cross(Eigen::Vector3d(facet.vertex(2) - a));
  }
  n.normalize();
  if (n.dot(a - opposite) < 0.0) n = -n;
  return n;
}

Polynomial project_core(const SimplexGeometry& cell, int k, const Eigen::VectorXd& vertex_values,
                        const Eigen::MatrixXd& vertex_gradients, const Eigen::VectorXd& interior_moments,
                        const std::vector<FacetData>& facets) {
  const int d = cell.dimension();
  const Index n = poly_dim(d, k);
  const DerivativeTables& tables = derivative_tables(d, k);
  const Eigen::VectorXd center = cell.centroid();
  const double h = cell.diameter();
  auto scaled = [&](const Eigen::VectorXd& x) { return monomial_values(d, k, (x - center) / h); };
  auto hessians = [&](const Eigen::VectorXd& mv) {
    std::vector<std::vector<Eigen::VectorXd>> out(d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) out[a].push_back(tables.second[a][b].transpose() * mv / (h * h));
    return out;
  };

  Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  const double cell_scale = cell.measure() / reference_measure(d);
  {
    const QuadratureRule& rule = quadrature_rule(d, 2 * k);
    const Polynomial interior = polynomial_from_moments(d, k - 4, interior_moments);
    for (Index q = 0; q < rule.weights.size(); ++q) {
      const Eigen::VectorXd xi = rule.points.col(q);
      const Eigen::VectorXd mv = scaled(cell.to_physical(xi));
      const double w = rule.weights(q) * cell_scale;
      const auto hess = hessians(mv);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) stiffness.noalias() += w * hess[a][b] * hess[a][b].transpose();
      if (k >= 4) rhs += (w * interior(xi) / std::pow(h, 4)) * (tables.bilaplacian.transpose() * mv);
    }
  }
  for (std::size_t i = 0; i < facets.size(); ++i) {
    const FacetData& facet = facets[i];
    const Eigen::VectorXd normal = outward_normal(facet.geometry, cell.vertex(static_cast<int>(i)));
    const QuadratureRule& rule = quadrature_rule(d - 1, 2 * k);
    const double scale = facet.geometry.measure() / reference_measure(d - 1);
    for (Index q = 0; q < rule.weights.size(); ++q) {
      const Eigen::VectorXd xi = rule.points.col(q);
      const Eigen::VectorXd mv = scaled(facet.geometry.to_physical(xi));
      const double w = rule.weights(q) * scale;
      const Eigen::VectorXd field = facet.field(xi, normal);
      const double f = facet.f(xi);
      const auto hess = hessians(mv);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) rhs += (w * field(a) * normal(b)) * hess[a][b];
      for (int c = 0; c < d; ++c)
        rhs -= (w * f * normal(c) / (h * h * h)) * (tables.grad_laplacian[c].transpose() * mv);
    }
  }

  // The affine kernel: replace the rows of 1, y_1, .., y_d by vertex sums.
  Eigen::MatrixXd system = stiffness;
  system.topRows(d + 1).setZero();
  rhs.head(d + 1).setZero();
  for (int v = 0; v <= d; ++v) {
    const Eigen::VectorXd mv = scaled(cell.vertex(v));
    system.row(0) += mv.transpose();
    rhs(0) += vertex_values(v);
    for (int a = 0; a < d; ++a) {
      system.row(1 + a) += (tables.first[a].transpose() * mv).transpose();
      rhs(1 + a) += h * vertex_gradients(a, v);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularSystem, "energy projection system is singular");
  const Eigen::VectorXd coeffs = lu.solve(rhs);
  const double residual = (system * coeffs - rhs).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-8 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>())))
    throw Error(ErrorCode::SingularSystem, "energy projection residual " + std::to_string(residual));

  return interpolate_reference(d, k, [&](const Eigen::VectorXd& xi) {
    return coeffs.dot(scaled(cell.to_physical(xi)));
  });
}

// Data of a triangle given by edge traces, in 2D coordinates.
Polynomial triangle_projection(const SimplexGeometry& tri, int k, const Eigen::VectorXd& values,
                               const Eigen::MatrixXd& gradients, const Eigen::VectorXd& interior,
                               const std::array<const EdgeTrace*, 3>& edges) {
  std::vector<FacetData> facets;
  for (int i = 0; i < 3; ++i) {
    const EdgeTrace& et = *edges[i];
    Eigen::MatrixXd ends(2, 2);
    ends.col(0) = tri.vertex(et.lo);
    ends.col(1) = tri.vertex(et.hi);
    FacetData fd;
    fd.geometry = SimplexGeometry(ends);
    const double len = (ends.col(1) - ends.col(0)).norm();
    const Eigen::VectorXd tangent = (ends.col(1) - ends.col(0)) / len;
    const Polynomial slope = et.f.derivative(0);
    fd.f = [&et](const Eigen::VectorXd& t) { return et.f(t(0)); };
    fd.field = [&et, slope, tangent, len](const Eigen::VectorXd& t, const Eigen::VectorXd& n) {
      return Eigen::VectorXd(slope(t(0)) / len * tangent + et.normal(t(0)) * n);
    };
    facets.push_back(std::move(fd));
  }
  return project_core(tri, k, values, gradients, interior, facets);
}

// In-plane orthonormal frame of a face: rows are the two axes.
Eigen::Matrix<double, 2, 3> face_axes(const SimplexGeometry& face) {
  const Eigen::Vector3d e1 = Eigen::Vector3d(face.axes().col(0)).normalized();
  Eigen::Vector3d e2 = face.axes().col(1);
  e2 = (e2 - e2.dot(e1) * e1).normalized();
  Eigen::Matrix<double, 2, 3> frame;
  frame.row(0) = e1.transpose();
  frame.row(1) = e2.transpose();
  return frame;
}

}  // namespace

Polynomial face_projection(const SimplicialMesh& mesh, const CellTracePair& pair, int local_face) {
  const FaceTrace& ft = pair.faces[local_face];
  const SimplexGeometry face = mesh.face_geometry(ft.face);
  const Eigen::Matrix<double, 2, 3> frame = face_axes(face);
  Eigen::MatrixXd local(2, 3);
  Eigen::VectorXd values(3);
  Eigen::MatrixXd gradients(2, 3);
  for (int j = 0; j < 3; ++j) {
    local.col(j) = frame * (face.vertex(j) - face.vertex(0));
    values(j) = pair.vertex_values(ft.cell_vertex[j]);
    gradients.col(j) = frame * pair.vertex_gradients.col(ft.cell_vertex[j]);
  }
  return triangle_projection(SimplexGeometry(local), pair.k, values, gradients, ft.interior_moments,
                             {&ft.edges[0], &ft.edges[1], &ft.edges[2]});
}

PolynomialOnSimplex energy_projection(const SimplicialMesh& mesh, const CellTracePair& pair) {
  const SimplexGeometry cell = mesh.cell_geometry(pair.cell);
  if (pair.dimension == 2) {
    return {cell, triangle_projection(cell, pair.k, pair.vertex_values, pair.vertex_gradients, pair.interior_moments,
                                      {&pair.edges[0], &pair.edges[1], &pair.edges[2]})};
  }
  std::vector<FacetData> facets;
  for (int i = 0; i < 4; ++i) {
    const FaceTrace& ft = pair.faces[i];
    FacetData fd;
    fd.geometry = mesh.face_geometry(ft.face);
    const Polynomial proxy = face_projection(mesh, pair, i);
    const Eigen::MatrixXd map = fd.geometry.gradient_map();
    fd.f = [proxy](const Eigen::VectorXd& xi) { return proxy(xi); };
    fd.field = [proxy, map, &ft](const Eigen::VectorXd& xi, const Eigen::VectorXd& n) {
      return Eigen::VectorXd(map * proxy.gradient(xi) + ft.g(xi) * n);
    };
    facets.push_back(std::move(fd));
  }
  return {cell, project_core(cell, pair.k, pair.vertex_values, pair.vertex_gradients, pair.interior_moments, facets)};
}

PolynomialOnSimplex energy_projection(const VemFunction& xi, Index cell) {
  return energy_projection(*xi.mesh, trace_from_dofs(*xi.mesh, cell_dofs(xi, cell)));
}

std::vector<Polynomial> boundary_gradient(const SimplicialMesh& mesh, const CellTracePair& pair, int local_facet,
                                          double tolerance) {
  const CompatibilityReport report = check_compatibility(mesh, pair);
  if (report.max_residual > tolerance)
    throw Error(ErrorCode::IncompatiblePair, "trace pair fails compatibility, residual " +
                                                 std::to_string(report.max_residual));
  const int d = pair.dimension;
  const int k = pair.k;
  const Index facet = mesh.cell_facets(pair.cell)[local_facet];
  const Eigen::VectorXd n = facet_normal(mesh, pair.cell, facet);
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> field;
  Polynomial proxy;
  if (d == 2) {
    const EdgeTrace& et = pair.edges[local_facet];
    const double len = mesh.edge_length(et.edge);
    const Eigen::VectorXd t = edge_tangent(mesh, et.edge);
    const Polynomial slope = et.f.derivative(0);
    field = [&, slope, t, len](const Eigen::VectorXd& s) {
      return Eigen::VectorXd(slope(s(0)) / len * t + et.normal(s(0)) * n);
    };
  } else {
    const FaceTrace& ft = pair.faces[local_facet];
    proxy = face_projection(mesh, pair, local_facet);
    const Eigen::MatrixXd map = mesh.face_geometry(ft.face).gradient_map();
    field = [&, map](const Eigen::VectorXd& xi) { return Eigen::VectorXd(map * proxy.gradient(xi) + ft.g(xi) * n); };
  }
  std::vector<Polynomial> out;
  for (int a = 0; a < d; ++a)
    out.push_back(interpolate_reference(d - 1, k - 1, [&](const Eigen::VectorXd& xi) { return field(xi)(a); }));
  return out;
}

}  // namespace virtenrich
