#include "virtenrich/skeleton.hpp"

#include "virtenrich/edge_systems.hpp"
#include "virtenrich/error.hpp"
#include "virtenrich/frames.hpp"
#include "virtenrich/log.hpp"
#include "virtenrich/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace virtenrich {
namespace {

constexpr double kTripleFloor = 0.05;
constexpr double kDihedralFloor = 1e-8;

class Chooser {
 public:
  explicit Chooser(const SkeletonOptions& options) : random_(options.randomize_choices), rng_(options.seed) {}

  Index pick(const std::vector<Index>& eligible) {
    if (eligible.empty()) return -1;
    if (!random_) return *std::min_element(eligible.begin(), eligible.end());
    return eligible[rng_() % eligible.size()];
  }

 private:
  bool random_;
  std::mt19937_64 rng_;
};

bool contains(std::span<const Index> list, Index x) { return std::find(list.begin(), list.end(), x) != list.end(); }

// Normalized moments up to `degree` along an edge of fn(x), x physical.
template <class F>
Eigen::VectorXd edge_moments(const SimplexGeometry& edge, int degree, int source_degree, F&& fn) {
  return moments(1, degree, std::max(degree, 0) + source_degree,
                 [&](const Eigen::VectorXd& t) { return fn(edge.to_physical(t)); });
}

SkeletonVertex corner_vector(const LagrangeFunction& v, Index p) {
  const SimplicialMesh& mesh = v.mesh();
  const int d = mesh.dimension();
  std::vector<Index> edges;
  for (Index e : mesh.vertex_edges(p))
    if (mesh.boundary_edge(e)) edges.push_back(e);
  std::sort(edges.begin(), edges.end());

  auto tangent_slope = [&](Index e) {
    const Eigen::VectorXd t = edge_tangent(mesh, e);
    return std::pair{t, v.gradient(mesh.edge_cells(e)[0], mesh.point(p)).dot(t)};
  };

  const Index n = static_cast<Index>(edges.size());
  std::vector<std::vector<Index>> candidates;
  if (d == 2) {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) candidates.push_back({edges[i], edges[j]});
  } else {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        for (Index l = j + 1; l < n; ++l) candidates.push_back({edges[i], edges[j], edges[l]});
  }
  for (const auto& chosen : candidates) {
    Eigen::MatrixXd a(d, d);
    Eigen::VectorXd b(d);
    for (int r = 0; r < d; ++r) {
      const auto [t, s] = tangent_slope(chosen[r]);
      a.row(r) = t.transpose();
      b(r) = s;
    }
    if (std::abs(a.determinant()) < kTripleFloor) continue;
    SkeletonVertex out;
    out.case_label = 3;
    out.edges = chosen;
    out.w = a.partialPivLu().solve(b);
    return out;
  }
  throw Error(d == 2 ? ErrorCode::NoEligibleCell : ErrorCode::SingularEdgeSystem,
              "no admissible boundary edge set at vertex " + std::to_string(p));
}

}  // namespace

std::vector<SkeletonVertex> vertex_vectors(const LagrangeFunction& v, const BoundaryClassification& classes,
                                           const SkeletonOptions& options) {
  const SimplicialMesh& mesh = v.mesh();
  if (static_cast<Index>(classes.vertex.size()) != mesh.num_vertices())
    throw Error(ErrorCode::MeshMismatch, "classification does not match the mesh");
  Chooser chooser(options);
  std::vector<SkeletonVertex> out(mesh.num_vertices());
  for (Index p = 0; p < mesh.num_vertices(); ++p) {
    const VertexClass cls = classes.vertex[p];
    if (cls == VertexClass::boundary_edge || cls == VertexClass::corner) {
      out[p] = corner_vector(v, p);
      continue;
    }
    std::vector<Index> eligible;
    if (cls == VertexClass::interior) {
      if (mesh.boundary_vertex(p)) throw Error(ErrorCode::NoEligibleCell, "boundary vertex classed interior");
      eligible.assign(mesh.vertex_cells(p).begin(), mesh.vertex_cells(p).end());
    } else {
      for (Index c : mesh.vertex_cells(p)) {
        bool ok = false;
        if (mesh.dimension() == 2) {
          for (Index e : mesh.cell_edges(c)) ok = ok || (mesh.boundary_edge(e) && contains(mesh.edge(e), p));
        } else {
          for (Index f : mesh.cell_faces(c)) ok = ok || (mesh.boundary_face(f) && contains(mesh.face(f), p));
        }
        if (ok) eligible.push_back(c);
      }
    }
    const Index cell = chooser.pick(eligible);
    if (cell < 0) throw Error(ErrorCode::NoEligibleCell, "no eligible cell at vertex " + std::to_string(p));
    out[p].case_label = cls == VertexClass::interior ? 1 : 2;
    out[p].cell = cell;
    out[p].w = v.gradient(cell, mesh.point(p));
  }
  return out;
}

namespace {

// f_e: endpoint values, endpoint slopes w_p . t_e and moments of v up to k - 4.
Polynomial edge_f(const LagrangeFunction& v, const std::vector<SkeletonVertex>& w, Index e) {
  const SimplicialMesh& mesh = v.mesh();
  const int k = v.order();
  const auto& ev = mesh.edge(e);
  const SimplexGeometry geometry = mesh.edge_geometry(e);
  const Eigen::VectorXd t = edge_tangent(mesh, e);
  const Index cell = mesh.edge_cells(e)[0];
  const Eigen::VectorXd mu =
      edge_moments(geometry, k - 4, k, [&](const Eigen::VectorXd& x) { return v.value(cell, x); });
  return hermite_moment_edge(k, mesh.edge_length(e), v.values()(ev[0]), v.values()(ev[1]), w[ev[0]].w.dot(t),
                             w[ev[1]].w.dot(t), mu);
}

// Degree k-1 edge polynomial with endpoint values a . w_p and moments of a . grad v_T.
Polynomial edge_component(const LagrangeFunction& v, const std::vector<SkeletonVertex>& w, Index e, Index cell,
                          const Eigen::VectorXd& direction) {
  const SimplicialMesh& mesh = v.mesh();
  const int k = v.order();
  const auto& ev = mesh.edge(e);
  const Eigen::VectorXd mu = edge_moments(mesh.edge_geometry(e), k - 3, k - 1, [&](const Eigen::VectorXd& x) {
    return v.gradient(cell, x).dot(direction);
  });
  return endpoint_moment_edge(k - 1, w[ev[0]].w.dot(direction), w[ev[1]].w.dot(direction), mu);
}

}  // namespace

std::vector<SkeletonEdge> edge_normal_polys_2d(const LagrangeFunction& v, const std::vector<SkeletonVertex>& w,
                                               const SkeletonOptions& options) {
  const SimplicialMesh& mesh = v.mesh();
  if (mesh.dimension() != 2) throw Error(ErrorCode::MeshMismatch, "edge_normal_polys_2d needs a 2D mesh");
  Chooser chooser(options);
  std::vector<SkeletonEdge> out(mesh.num_edges());
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    SkeletonEdge& edge = out[e];
    edge.owner = chooser.pick({mesh.edge_cells(e).begin(), mesh.edge_cells(e).end()});
    edge.case_label = mesh.boundary_edge(e) ? 2 : 1;
    edge.f = edge_f(v, w, e);
    edge.g = edge_component(v, w, e, edge.owner, facet_normal(mesh, edge.owner, e));
  }
  return out;
}

std::vector<SkeletonEdge> edge_vector_fields_3d(const LagrangeFunction& v, const std::vector<SkeletonVertex>& w,
                                                const BoundaryClassification& classes,
                                                const SkeletonOptions& options) {
  const SimplicialMesh& mesh = v.mesh();
  if (mesh.dimension() != 3) throw Error(ErrorCode::MeshMismatch, "edge_vector_fields_3d needs a 3D mesh");
  if (static_cast<Index>(classes.edge.size()) != mesh.num_edges())
    throw Error(ErrorCode::MeshMismatch, "classification does not match the mesh");
  const int k = v.order();
  Chooser chooser(options);
  std::vector<SkeletonEdge> out(mesh.num_edges());
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    SkeletonEdge& edge = out[e];
    edge.f = edge_f(v, w, e);
    const auto basis = edge_perp_basis(mesh, e);
    std::vector<Index> boundary_faces;
    for (Index f : mesh.edge_faces(e))
      if (mesh.boundary_face(f)) boundary_faces.push_back(f);

    const EdgeClass cls = classes.edge[e];
    if (cls == EdgeClass::interior || cls == EdgeClass::on_domain_face) {
      std::vector<Index> eligible;
      if (cls == EdgeClass::interior) {
        eligible.assign(mesh.edge_cells(e).begin(), mesh.edge_cells(e).end());
      } else {
        for (Index f : boundary_faces) eligible.push_back(mesh.face_cells(f)[0]);
      }
      edge.case_label = cls == EdgeClass::interior ? 1 : 2;
      edge.owner = chooser.pick(eligible);
      if (edge.owner < 0) throw Error(ErrorCode::NoEligibleCell, "no eligible cell at edge " + std::to_string(e));
      for (int r = 0; r < 2; ++r) edge.w[r] = edge_component(v, w, e, edge.owner, basis[r]);
      continue;
    }

    // Edge of the domain: moments of w_e . n_{e,F_j} follow the tangential gradients on the two boundary faces.
    edge.case_label = 3;
    if (boundary_faces.size() < 2) throw Error(ErrorCode::NoEligibleCell, "edge of the domain without two faces");
    edge.owner = mesh.edge_cells(e)[0];
    Eigen::Matrix2d a;
    std::array<Polynomial, 2> sigma;
    bool found = false;
    for (std::size_t i = 0; i < boundary_faces.size() && !found; ++i)
      for (std::size_t j = i + 1; j < boundary_faces.size() && !found; ++j) {
        const std::array<Index, 2> pair{boundary_faces[i], boundary_faces[j]};
        for (int r = 0; r < 2; ++r) {
          const Eigen::Vector3d n = edge_conormal(mesh, pair[r], e);
          for (int c = 0; c < 2; ++c) a(r, c) = basis[c].dot(n);
        }
        if (std::abs(a.determinant()) < kDihedralFloor) continue;
        found = true;
        edge.faces = pair;
        for (int r = 0; r < 2; ++r) {
          const Eigen::VectorXd n = edge_conormal(mesh, pair[r], e);
          sigma[r] = edge_component(v, w, e, mesh.face_cells(pair[r])[0], n);
        }
      }
    if (!found) throw Error(ErrorCode::SingularDihedral, "boundary faces at edge " + std::to_string(e) + " coplanar");
    const Eigen::Matrix2d inv = a.inverse();
    for (int r = 0; r < 2; ++r) {
      edge.w[r] = Polynomial(1, k - 1);
      for (int c = 0; c < 2; ++c) edge.w[r] += inv(r, c) * sigma[c];
    }
  }
  return out;
}

Eigen::Vector3d edge_vector(const SimplicialMesh& mesh, const SkeletonEdge& edge, Index edge_id, double t) {
  const auto basis = edge_perp_basis(mesh, edge_id);
  return edge.w[0](t) * basis[0] + edge.w[1](t) * basis[1];
}

std::vector<SkeletonFace> face_normal_data_3d(const LagrangeFunction& v, const std::vector<SkeletonVertex>& w,
                                              const std::vector<SkeletonEdge>& edges,
                                              const SkeletonOptions& options) {
  const SimplicialMesh& mesh = v.mesh();
  if (mesh.dimension() != 3) throw Error(ErrorCode::MeshMismatch, "face_normal_data_3d needs a 3D mesh");
  const int k = v.order();
  Chooser chooser(options);
  std::vector<SkeletonFace> out(mesh.num_faces());
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    SkeletonFace& face = out[f];
    face.owner = chooser.pick({mesh.face_cells(f).begin(), mesh.face_cells(f).end()});
    const Eigen::VectorXd n = facet_normal(mesh, face.owner, f);
    const auto fe = mesh.face_edges(f);

    // The two edges meeting at a face vertex must agree there.
    double scale = 1.0, mismatch = 0.0;
    for (int i = 0; i < 3; ++i) {
      const auto& ev = mesh.edge(fe[i]);
      for (int end = 0; end < 2; ++end) {
        const double from_edge = edge_vector(mesh, edges[fe[i]], fe[i], end).dot(n);
        const double from_vertex = w[ev[end]].w.dot(n);
        scale = std::max(scale, std::abs(from_vertex));
        mismatch = std::max(mismatch, std::abs(from_edge - from_vertex));
      }
    }
    if (mismatch > 1e-10 * scale)
      throw Error(ErrorCode::InconsistentEdgeTraces, "edge traces disagree at a vertex of face " + std::to_string(f));

    const SimplexGeometry geometry = mesh.face_geometry(f);
    const PolynomialOnSimplex& owner = v.cell(face.owner);
    auto on_face = [&](const Eigen::VectorXd& xi) { return geometry.to_physical(xi); };
    const Eigen::VectorXd dn_moments = moments(2, k - 4, 2 * k - 5, [&](const Eigen::VectorXd& xi) {
      return owner.gradient(owner.geometry.to_reference(on_face(xi))).dot(n);
    });
    auto boundary_value = [&](const Eigen::VectorXd& xi) {
      constexpr double eps = 1e-12;
      const double a = xi(0), b = xi(1);
      Index e;
      double t;
      if (std::abs(b) < eps) {
        e = fe[2];  // (v0, v1)
        t = a;
      } else if (std::abs(a) < eps) {
        e = fe[1];  // (v0, v2)
        t = b;
      } else {
        e = fe[0];  // (v1, v2)
        t = b;
      }
      return edge_vector(mesh, edges[e], e, t).dot(n);
    };
    face.g = boundary_moment_face(k - 1, boundary_value, dn_moments);
    face.interior_moments = moments(2, k - 4, 2 * k - 4, [&](const Eigen::VectorXd& xi) {
      return owner.value(owner.geometry.to_reference(on_face(xi)));
    });
  }
  return out;
}

SkeletonData build_skeleton(const LagrangeFunction& v, const BoundaryClassification& classes,
                            const SkeletonOptions& options) {
  SkeletonData s;
  s.dimension = v.mesh().dimension();
  s.k = v.order();
  if (s.k < 3) throw Error(ErrorCode::UnsupportedOrder, "the skeleton construction needs k >= 3");
  s.vertices = vertex_vectors(v, classes, options);
  if (s.dimension == 2) {
    s.edges = edge_normal_polys_2d(v, s.vertices, options);
  } else {
    s.edges = edge_vector_fields_3d(v, s.vertices, classes, options);
    s.faces = face_normal_data_3d(v, s.vertices, s.edges, options);
  }
  log::debug("skeleton built: " + std::to_string(s.vertices.size()) + " vertices, " +
             std::to_string(s.edges.size()) + " edges, " + std::to_string(s.faces.size()) + " faces");
  return s;
}

Eigen::VectorXd cell_interior_moments(const LagrangeFunction& v, Index cell) {
  const PolynomialOnSimplex& vc = v.cell(cell);
  const int k = v.order();
  return moments(v.mesh().dimension(), k - 4, 2 * k - 4, [&](const Eigen::VectorXd& xi) { return vc.value(xi); });
}

CellTracePair cell_trace(const LagrangeFunction& v, const SkeletonData& skeleton, Index cell) {
  const SimplicialMesh& mesh = v.mesh();
  const int d = mesh.dimension();
  const int k = skeleton.k;
  const auto verts = mesh.cell(cell);
  CellTracePair pair;
  pair.cell = cell;
  pair.dimension = d;
  pair.k = k;
  pair.vertex_values.resize(d + 1);
  pair.vertex_gradients.resize(d, d + 1);
  for (int i = 0; i <= d; ++i) {
    pair.vertex_values(i) = v.values()(verts[i]);
    pair.vertex_gradients.col(i) = skeleton.vertices[verts[i]].w;
  }
  pair.interior_moments = cell_interior_moments(v, cell);

  if (d == 2) {
    for (Index e : mesh.cell_edges(cell)) {
      const SkeletonEdge& se = skeleton.edges[e];
      EdgeTrace et;
      et.edge = e;
      et.lo = mesh.local_vertex(cell, mesh.edge(e)[0]);
      et.hi = mesh.local_vertex(cell, mesh.edge(e)[1]);
      et.f = se.f;
      et.normal = se.owner == cell ? se.g : -se.g;
      pair.edges.push_back(std::move(et));
    }
  } else {
    for (Index f : mesh.cell_faces(cell)) {
      const SkeletonFace& sf = skeleton.faces[f];
      const auto& fv = mesh.face(f);
      FaceTrace ft;
      ft.face = f;
      for (int j = 0; j < 3; ++j) ft.cell_vertex[j] = mesh.local_vertex(cell, fv[j]);
      const auto fe = mesh.face_edges(f);
      for (int j = 0; j < 3; ++j) {
        const Index e = fe[j];
        const SkeletonEdge& se = skeleton.edges[e];
        EdgeTrace& et = ft.edges[j];
        et.edge = e;
        et.lo = static_cast<int>(std::find(fv.begin(), fv.end(), mesh.edge(e)[0]) - fv.begin());
        et.hi = static_cast<int>(std::find(fv.begin(), fv.end(), mesh.edge(e)[1]) - fv.begin());
        et.f = se.f;
        const Eigen::Vector3d n = edge_conormal(mesh, f, e);
        et.normal = interpolate_reference(1, k - 1, [&](const Eigen::VectorXd& t) {
          return edge_vector(mesh, se, e, t(0)).dot(n);
        });
      }
      ft.interior_moments = sf.interior_moments;
      ft.g = sf.owner == cell ? sf.g : -sf.g;
      pair.faces.push_back(std::move(ft));
    }
  }
  pair.compatibility = check_compatibility(mesh, pair);
  return pair;
}

}  // namespace virtenrich
