#include "virtenrich/vem.hpp"

#include "virtenrich/edge_systems.hpp"
#include "virtenrich/error.hpp"
#include "virtenrich/frames.hpp"
#include "virtenrich/log.hpp"
#include "virtenrich/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace virtenrich {

Index trace_space_dim(int k, int d) {
  if (k < 3) throw Error(ErrorCode::UnsupportedOrder, "virtual element spaces need k >= 3");
  if (d == 2) return 6 * (k - 1);
  if (d == 3) return 2 * (k - 1) * (2 * k + 1);
  throw Error(ErrorCode::IndexOutOfRange, "dimension must be 2 or 3");
}

Index vem_space_dim(int k, int d) { return trace_space_dim(k, d) + poly_dim(d, k - 4); }

Index VemFunction::num_dofs() const {
  return vertex_values.size() + vertex_gradients.size() + edge_f.size() + edge_normal.size() + face_f.size() +
         face_g.size() + cell_moments.size();
}

namespace {

void append(Eigen::VectorXd& out, Index& pos, const Eigen::Ref<const Eigen::VectorXd>& block) {
  out.segment(pos, block.size()) = block;
  pos += block.size();
}

int exactness_for(int k) { return 2 * k + 2; }

Eigen::VectorXd edge_poly_moments(const Polynomial& p, int degree) {
  return moments(1, degree, degree + std::max(p.degree(), 0), [&](const Eigen::VectorXd& t) { return p(t); });
}

Eigen::VectorXd face_poly_moments(const Polynomial& p, int degree) {
  return moments(2, degree, degree + std::max(p.degree(), 0), [&](const Eigen::VectorXd& xi) { return p(xi); });
}

template <class F>
Eigen::VectorXd on_entity(const SimplexGeometry& g, int degree, int exactness, F&& fn) {
  return moments(g.dimension(), degree, exactness, [&](const Eigen::VectorXd& xi) { return fn(g.to_physical(xi)); });
}

}  // namespace

Eigen::VectorXd VemFunction::flatten() const {
  Eigen::VectorXd out(num_dofs());
  Index pos = 0;
  for (Index v = 0; v < vertex_values.size(); ++v) {
    out(pos++) = vertex_values(v);
    append(out, pos, vertex_gradients.col(v));
  }
  for (Index e = 0; e < edge_f.cols(); ++e) {
    append(out, pos, edge_f.col(e));
    append(out, pos, edge_normal.col(e));
  }
  for (Index f = 0; f < face_f.cols(); ++f) {
    append(out, pos, face_f.col(f));
    append(out, pos, face_g.col(f));
  }
  for (Index c = 0; c < cell_moments.cols(); ++c) append(out, pos, cell_moments.col(c));
  return out;
}

Index CellDofs::size() const {
  Index n = vertex_values.size() + vertex_gradients.size() + interior.size();
  for (const auto& x : edge_f) n += x.size();
  for (const auto& x : edge_normal) n += x.size();
  for (const auto& x : face_f) n += x.size();
  for (const auto& x : face_g) n += x.size();
  return n;
}

Eigen::VectorXd CellDofs::flatten() const {
  Eigen::VectorXd out(size());
  Index pos = 0;
  append(out, pos, vertex_values);
  append(out, pos, Eigen::Map<const Eigen::VectorXd>(vertex_gradients.data(), vertex_gradients.size()));
  for (const auto& x : edge_f) append(out, pos, x);
  for (const auto& x : edge_normal) append(out, pos, x);
  for (const auto& x : face_f) append(out, pos, x);
  for (const auto& x : face_g) append(out, pos, x);
  append(out, pos, interior);
  return out;
}

CellDofs operator-(const CellDofs& a, const CellDofs& b) {
  if (a.cell != b.cell || a.k != b.k || a.dimension != b.dimension)
    throw Error(ErrorCode::MeshMismatch, "cell dofs of different cells or orders");
  CellDofs out = a;
  out.vertex_values -= b.vertex_values;
  out.vertex_gradients -= b.vertex_gradients;
  for (std::size_t i = 0; i < a.edge_f.size(); ++i) out.edge_f[i] -= b.edge_f[i];
  for (std::size_t i = 0; i < a.edge_normal.size(); ++i) out.edge_normal[i] -= b.edge_normal[i];
  for (std::size_t i = 0; i < a.face_f.size(); ++i) out.face_f[i] -= b.face_f[i];
  for (std::size_t i = 0; i < a.face_g.size(); ++i) out.face_g[i] -= b.face_g[i];
  out.interior -= b.interior;
  return out;
}

CellDofs cell_dofs(const VemFunction& xi, Index cell) {
  const SimplicialMesh& mesh = *xi.mesh;
  const int d = mesh.dimension();
  CellDofs out;
  out.cell = cell;
  out.dimension = d;
  out.k = xi.k;
  const auto verts = mesh.cell(cell);
  out.vertex_values.resize(d + 1);
  out.vertex_gradients.resize(d, d + 1);
  for (int i = 0; i <= d; ++i) {
    out.vertex_values(i) = xi.vertex_values(verts[i]);
    out.vertex_gradients.col(i) = xi.vertex_gradients.col(verts[i]);
  }
  for (Index e : mesh.cell_edges(cell)) {
    out.edge_f.push_back(xi.edge_f.col(e));
    const double sign = (d == 2 && xi.facet_owner[e] != cell) ? -1.0 : 1.0;
    out.edge_normal.push_back(sign * xi.edge_normal.col(e));
  }
  if (d == 3)
    for (Index f : mesh.cell_faces(cell)) {
      out.face_f.push_back(xi.face_f.col(f));
      const double sign = xi.facet_owner[f] == cell ? 1.0 : -1.0;
      out.face_g.push_back(sign * xi.face_g.col(f));
    }
  out.interior = xi.cell_moments.col(cell);
  return out;
}

CellDofs function_cell_dofs(const SimplicialMesh& mesh, Index cell, int k, const ScalarFn& value,
                            const GradientFn& gradient) {
  if (k < 3) throw Error(ErrorCode::UnsupportedOrder, "cell dofs need k >= 3");
  const int d = mesh.dimension();
  const int q = exactness_for(k);
  CellDofs out;
  out.cell = cell;
  out.dimension = d;
  out.k = k;
  const auto verts = mesh.cell(cell);
  out.vertex_values.resize(d + 1);
  out.vertex_gradients.resize(d, d + 1);
  for (int i = 0; i <= d; ++i) {
    out.vertex_values(i) = value(mesh.point(verts[i]));
    out.vertex_gradients.col(i) = gradient(mesh.point(verts[i]));
  }
  for (Index e : mesh.cell_edges(cell)) {
    const SimplexGeometry g = mesh.edge_geometry(e);
    out.edge_f.push_back(on_entity(g, k - 4, q, value));
    if (d == 2) {
      const Eigen::VectorXd n = facet_normal(mesh, cell, e);
      out.edge_normal.push_back(on_entity(g, k - 3, q, [&](const Eigen::VectorXd& x) { return gradient(x).dot(n); }));
    } else {
      const auto basis = edge_perp_basis(mesh, e);
      Eigen::VectorXd stacked(2 * (k - 2));
      for (int r = 0; r < 2; ++r)
        stacked.segment(r * (k - 2), k - 2) =
            on_entity(g, k - 3, q, [&](const Eigen::VectorXd& x) { return gradient(x).dot(Eigen::VectorXd(basis[r])); });
      out.edge_normal.push_back(stacked);
    }
  }
  if (d == 3)
    for (Index f : mesh.cell_faces(cell)) {
      const SimplexGeometry g = mesh.face_geometry(f);
      const Eigen::VectorXd n = facet_normal(mesh, cell, f);
      out.face_f.push_back(on_entity(g, k - 4, q, value));
      out.face_g.push_back(on_entity(g, k - 4, q, [&](const Eigen::VectorXd& x) { return gradient(x).dot(n); }));
    }
  out.interior = on_entity(mesh.cell_geometry(cell), k - 4, q, value);
  return out;
}

CellDofs lagrange_cell_dofs(const LagrangeFunction& v, Index cell) {
  const PolynomialOnSimplex& vc = v.cell(cell);
  const int k = std::max(v.order(), 3);
  return function_cell_dofs(
      v.mesh(), cell, k, [&](const Eigen::VectorXd& x) { return vc.value_at(x); },
      [&](const Eigen::VectorXd& x) { return vc.gradient(vc.geometry.to_reference(x)); });
}

VemFunction interpolate_dofs(std::shared_ptr<const SimplicialMesh> mesh_ptr, int k, const Field& field) {
  if (k < 3) throw Error(ErrorCode::UnsupportedOrder, "virtual element dofs need k >= 3");
  const SimplicialMesh& mesh = *mesh_ptr;
  const int d = mesh.dimension();
  const int q = exactness_for(k);
  VemFunction xi;
  xi.mesh = mesh_ptr;
  xi.k = k;
  const Index nv = mesh.num_vertices(), ne = mesh.num_edges(), nf = mesh.num_faces(), nc = mesh.num_cells();
  xi.vertex_values.resize(nv);
  xi.vertex_gradients.resize(d, nv);
  for (Index v = 0; v < nv; ++v) {
    xi.vertex_values(v) = field.value(mesh.point(v));
    xi.vertex_gradients.col(v) = field.gradient(mesh.point(v));
  }
  xi.edge_f.resize(k - 3, ne);
  xi.edge_normal.resize(d == 2 ? k - 2 : 2 * (k - 2), ne);
  for (Index e = 0; e < ne; ++e) {
    const SimplexGeometry g = mesh.edge_geometry(e);
    xi.edge_f.col(e) = on_entity(g, k - 4, q, field.value);
    if (d == 2) {
      const Eigen::VectorXd n = facet_normal(mesh, mesh.edge_cells(e)[0], e);
      xi.edge_normal.col(e) = on_entity(g, k - 3, q, [&](const Eigen::VectorXd& x) { return field.gradient(x).dot(n); });
    } else {
      const auto basis = edge_perp_basis(mesh, e);
      for (int r = 0; r < 2; ++r)
        xi.edge_normal.col(e).segment(r * (k - 2), k - 2) = on_entity(g, k - 3, q, [&](const Eigen::VectorXd& x) {
          return field.gradient(x).dot(Eigen::VectorXd(basis[r]));
        });
    }
  }
  if (d == 2) {
    for (Index e = 0; e < ne; ++e) xi.facet_owner.push_back(mesh.edge_cells(e)[0]);
  } else {
    const Index nm = poly_dim(2, k - 4);
    xi.face_f.resize(nm, nf);
    xi.face_g.resize(nm, nf);
    for (Index f = 0; f < nf; ++f) {
      const Index owner = mesh.face_cells(f)[0];
      xi.facet_owner.push_back(owner);
      const SimplexGeometry g = mesh.face_geometry(f);
      const Eigen::VectorXd n = facet_normal(mesh, owner, f);
      xi.face_f.col(f) = on_entity(g, k - 4, q, field.value);
      xi.face_g.col(f) = on_entity(g, k - 4, q, [&](const Eigen::VectorXd& x) { return field.gradient(x).dot(n); });
    }
  }
  xi.cell_moments.resize(poly_dim(d, k - 4), nc);
  for (Index c = 0; c < nc; ++c) xi.cell_moments.col(c) = on_entity(mesh.cell_geometry(c), k - 4, q, field.value);
  return xi;
}

VemFunction enrich_from_skeleton(const LagrangeFunction& v, const SkeletonData& skeleton) {
  const SimplicialMesh& mesh = v.mesh();
  const int d = mesh.dimension();
  const int k = skeleton.k;
  if (v.order() != k) throw Error(ErrorCode::MeshMismatch, "skeleton built for a different order");
  VemFunction xi;
  xi.mesh = v.space().mesh_ptr();
  xi.k = k;
  const Index nv = mesh.num_vertices(), ne = mesh.num_edges(), nf = mesh.num_faces(), nc = mesh.num_cells();
  xi.vertex_values = v.values().head(nv);
  xi.vertex_gradients.resize(d, nv);
  for (Index p = 0; p < nv; ++p) xi.vertex_gradients.col(p) = skeleton.vertices[p].w;
  xi.edge_f.resize(k - 3, ne);
  xi.edge_normal.resize(d == 2 ? k - 2 : 2 * (k - 2), ne);
  for (Index e = 0; e < ne; ++e) {
    const SkeletonEdge& se = skeleton.edges[e];
    xi.edge_f.col(e) = edge_poly_moments(se.f, k - 4);
    if (d == 2) {
      xi.edge_normal.col(e) = edge_poly_moments(se.g, k - 3);
      xi.facet_owner.push_back(se.owner);
    } else {
      for (int r = 0; r < 2; ++r) xi.edge_normal.col(e).segment(r * (k - 2), k - 2) = edge_poly_moments(se.w[r], k - 3);
    }
  }
  if (d == 3) {
    const Index nm = poly_dim(2, k - 4);
    xi.face_f.resize(nm, nf);
    xi.face_g.resize(nm, nf);
    for (Index f = 0; f < nf; ++f) {
      const SkeletonFace& sf = skeleton.faces[f];
      xi.face_f.col(f) = sf.interior_moments;
      xi.face_g.col(f) = face_poly_moments(sf.g, k - 4);
      xi.facet_owner.push_back(sf.owner);
    }
  }
  xi.cell_moments.resize(poly_dim(d, k - 4), nc);
  for (Index c = 0; c < nc; ++c) xi.cell_moments.col(c) = cell_interior_moments(v, c);
  return xi;
}

VemFunction enrich(const LagrangeFunction& v, const BoundaryClassification& classes, const SkeletonOptions& options) {
  if (v.order() == 2) {
    log::info("k = 2: enriching through the cubic embedding");
    const LagrangeFunction v3 = embed_quadratic_in_cubic(v);
    return enrich_from_skeleton(v3, build_skeleton(v3, classes, options));
  }
  return enrich_from_skeleton(v, build_skeleton(v, classes, options));
}

VemFunction enrich(const LagrangeFunction& v) { return enrich(v, classify_boundary(v.mesh())); }

CellTracePair trace_from_dofs(const SimplicialMesh& mesh, const CellDofs& dofs) {
  const int d = mesh.dimension();
  const int k = dofs.k;
  const Index cell = dofs.cell;
  CellTracePair pair;
  pair.cell = cell;
  pair.dimension = d;
  pair.k = k;
  pair.vertex_values = dofs.vertex_values;
  pair.vertex_gradients = dofs.vertex_gradients;
  pair.interior_moments = dofs.interior;
  const auto cell_edges = mesh.cell_edges(cell);

  auto edge_f = [&](Index e, int lo, int hi, int local_edge) {
    const Eigen::VectorXd t = edge_tangent(mesh, e);
    return hermite_moment_edge(k, mesh.edge_length(e), dofs.vertex_values(lo), dofs.vertex_values(hi),
                               dofs.vertex_gradients.col(lo).dot(t), dofs.vertex_gradients.col(hi).dot(t),
                               dofs.edge_f[local_edge]);
  };

  if (d == 2) {
    for (int j = 0; j < 3; ++j) {
      const Index e = cell_edges[j];
      EdgeTrace et;
      et.edge = e;
      et.lo = mesh.local_vertex(cell, mesh.edge(e)[0]);
      et.hi = mesh.local_vertex(cell, mesh.edge(e)[1]);
      et.f = edge_f(e, et.lo, et.hi, j);
      const Eigen::VectorXd n = facet_normal(mesh, cell, e);
      et.normal = endpoint_moment_edge(k - 1, dofs.vertex_gradients.col(et.lo).dot(n),
                                       dofs.vertex_gradients.col(et.hi).dot(n), dofs.edge_normal[j]);
      pair.edges.push_back(std::move(et));
    }
  } else {
    // w_e per local edge from the endpoint projections and the e-perp moments.
    std::vector<std::array<Polynomial, 2>> w(6);
    for (int j = 0; j < 6; ++j) {
      const Index e = cell_edges[j];
      const auto basis = edge_perp_basis(mesh, e);
      const int lo = mesh.local_vertex(cell, mesh.edge(e)[0]);
      const int hi = mesh.local_vertex(cell, mesh.edge(e)[1]);
      for (int r = 0; r < 2; ++r) {
        const Eigen::VectorXd b = basis[r];
        w[j][r] = endpoint_moment_edge(k - 1, dofs.vertex_gradients.col(lo).dot(b), dofs.vertex_gradients.col(hi).dot(b),
                                       dofs.edge_normal[j].segment(r * (k - 2), k - 2));
      }
    }
    auto local_edge = [&](Index e) {
      return static_cast<int>(std::find(cell_edges.begin(), cell_edges.end(), e) - cell_edges.begin());
    };
    const auto cell_faces = mesh.cell_faces(cell);
    for (int i = 0; i < 4; ++i) {
      const Index f = cell_faces[i];
      const auto& fv = mesh.face(f);
      const auto fe = mesh.face_edges(f);
      const Eigen::VectorXd n = facet_normal(mesh, cell, f);
      FaceTrace ft;
      ft.face = f;
      for (int j = 0; j < 3; ++j) ft.cell_vertex[j] = mesh.local_vertex(cell, fv[j]);
      std::array<Polynomial, 3> g_edge;  // w_e . n_F on each face edge
      for (int j = 0; j < 3; ++j) {
        const Index e = fe[j];
        const int le = local_edge(e);
        const auto basis = edge_perp_basis(mesh, e);
        EdgeTrace& et = ft.edges[j];
        et.edge = e;
        et.lo = static_cast<int>(std::find(fv.begin(), fv.end(), mesh.edge(e)[0]) - fv.begin());
        et.hi = static_cast<int>(std::find(fv.begin(), fv.end(), mesh.edge(e)[1]) - fv.begin());
        et.f = edge_f(e, ft.cell_vertex[et.lo], ft.cell_vertex[et.hi], le);
        const Eigen::Vector3d conormal = edge_conormal(mesh, f, e);
        et.normal = basis[0].dot(conormal) * w[le][0] + basis[1].dot(conormal) * w[le][1];
        g_edge[j] = basis[0].dot(Eigen::Vector3d(n)) * w[le][0] + basis[1].dot(Eigen::Vector3d(n)) * w[le][1];
      }
      auto boundary_value = [&](const Eigen::VectorXd& xi) {
        constexpr double eps = 1e-12;
        if (std::abs(xi(1)) < eps) return g_edge[2](xi(0));
        if (std::abs(xi(0)) < eps) return g_edge[1](xi(1));
        return g_edge[0](xi(1));
      };
      ft.g = boundary_moment_face(k - 1, boundary_value, dofs.face_g[i]);
      ft.interior_moments = dofs.face_f[i];
      pair.faces.push_back(std::move(ft));
    }
  }
  pair.compatibility = check_compatibility(mesh, pair);
  return pair;
}

namespace {

bool close(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i)
    if (std::abs(a(i) - b(i)) > tol * std::max({1.0, std::abs(a(i)), std::abs(b(i))})) return false;
  return true;
}

}  // namespace

ConformityReport check_conformity(const SimplicialMesh& mesh, const std::vector<CellDofs>& cells, double tolerance) {
  ConformityReport report;
  auto flag = [&](const std::string& message) {
    report.clean = false;
    report.violations.push_back(message);
  };
  const int d = mesh.dimension();
  for (Index f = 0; f < mesh.num_facets(); ++f) {
    const auto fc = mesh.facet_cells(f);
    if (fc.size() != 2) continue;
    const CellDofs& a = cells[fc[0]];
    const CellDofs& b = cells[fc[1]];
    const std::string where = (d == 2 ? "edge " : "face ") + std::to_string(f);
    for (Index v : mesh.facet(f)) {
      const int la = mesh.local_vertex(fc[0], v), lb = mesh.local_vertex(fc[1], v);
      if (!close(Eigen::VectorXd::Constant(1, a.vertex_values(la)), Eigen::VectorXd::Constant(1, b.vertex_values(lb)),
                 tolerance) ||
          !close(a.vertex_gradients.col(la), b.vertex_gradients.col(lb), tolerance))
        flag(where + ": vertex " + std::to_string(v) + " data differ");
    }
    if (d == 2) {
      const int ja = mesh.local_facet(fc[0], f), jb = mesh.local_facet(fc[1], f);
      if (!close(a.edge_f[ja], b.edge_f[jb], tolerance)) flag(where + ": f moments differ");
      if (!close(a.edge_normal[ja], -b.edge_normal[jb], tolerance)) flag(where + ": g moments not opposite");
      continue;
    }
    const int ia = mesh.local_facet(fc[0], f), ib = mesh.local_facet(fc[1], f);
    if (!close(a.face_f[ia], b.face_f[ib], tolerance)) flag(where + ": f moments differ");
    if (!close(a.face_g[ia], -b.face_g[ib], tolerance)) flag(where + ": g moments not opposite");
    for (Index e : mesh.face_edges(f)) {
      const auto ea = mesh.cell_edges(fc[0]), eb = mesh.cell_edges(fc[1]);
      const auto ja = std::find(ea.begin(), ea.end(), e) - ea.begin();
      const auto jb = std::find(eb.begin(), eb.end(), e) - eb.begin();
      if (!close(a.edge_f[ja], b.edge_f[jb], tolerance)) flag(where + ": edge " + std::to_string(e) + " f differs");
      if (!close(a.edge_normal[ja], b.edge_normal[jb], tolerance))
        flag(where + ": edge " + std::to_string(e) + " normal data differ");
    }
  }
  return report;
}

ConformityReport check_conformity(const VemFunction& xi, double tolerance) {
  const SimplicialMesh& mesh = *xi.mesh;
  ConformityReport report;
  for (Index f = 0; f < mesh.num_facets(); ++f) {
    const auto fc = mesh.facet_cells(f);
    if (std::find(fc.begin(), fc.end(), xi.facet_owner[f]) == fc.end()) {
      report.clean = false;
      report.violations.push_back("facet " + std::to_string(f) + ": owner is not an incident cell");
    }
  }
  std::vector<CellDofs> cells;
  cells.reserve(mesh.num_cells());
  for (Index c = 0; c < mesh.num_cells(); ++c) cells.push_back(cell_dofs(xi, c));
  ConformityReport shared = check_conformity(mesh, cells, tolerance);
  report.clean = report.clean && shared.clean;
  report.violations.insert(report.violations.end(), shared.violations.begin(), shared.violations.end());
  return report;
}

std::vector<DofEntry> dof_table(const VemFunction& xi) {
  std::vector<DofEntry> rows;
  const int d = xi.dimension();
  auto add_block = [&](const char* kind, Index id, const std::string& prefix, const Eigen::Ref<const Eigen::VectorXd>& b) {
    for (Index i = 0; i < b.size(); ++i) rows.push_back({kind, id, prefix + std::to_string(i), b(i)});
  };
  for (Index v = 0; v < xi.vertex_values.size(); ++v) {
    rows.push_back({"vertex", v, "value", xi.vertex_values(v)});
    add_block("vertex", v, "grad", xi.vertex_gradients.col(v));
  }
  for (Index e = 0; e < xi.edge_f.cols(); ++e) {
    add_block("edge", e, "f", xi.edge_f.col(e));
    if (d == 2) {
      add_block("edge", e, "g", xi.edge_normal.col(e));
    } else {
      add_block("edge", e, "perp0_", xi.edge_normal.col(e).head(xi.k - 2));
      add_block("edge", e, "perp1_", xi.edge_normal.col(e).tail(xi.k - 2));
    }
  }
  for (Index f = 0; f < xi.face_f.cols(); ++f) {
    add_block("face", f, "f", xi.face_f.col(f));
    add_block("face", f, "g", xi.face_g.col(f));
  }
  for (Index c = 0; c < xi.cell_moments.cols(); ++c) add_block("cell", c, "m", xi.cell_moments.col(c));
  return rows;
}

}  // namespace virtenrich
