#include "virtenrich/mesh.hpp"

#include "virtenrich/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace virtenrich {
namespace {

constexpr std::array<std::array<int, 2>, 3> kTriangleEdges = {{{1, 2}, {0, 2}, {0, 1}}};
constexpr std::array<std::array<int, 2>, 6> kTetEdges = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
constexpr std::array<std::array<int, 3>, 4> kTetFaces = {{{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

template <std::size_t N>
Index find_sorted(const std::vector<std::array<Index, N>>& list, std::array<Index, N> key) {
  std::sort(key.begin(), key.end());
  const auto it = std::lower_bound(list.begin(), list.end(), key);
  return (it != list.end() && *it == key) ? static_cast<Index>(it - list.begin()) : -1;
}

Adjacency invert(Index n_sources, Index n_targets, const std::vector<Index>& flat, Index stride) {
  Adjacency adj;
  adj.offsets.assign(n_targets + 1, 0);
  for (Index s = 0; s < n_sources; ++s)
    for (Index j = 0; j < stride; ++j) ++adj.offsets[flat[s * stride + j] + 1];
  std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
  adj.data.resize(adj.offsets.back());
  std::vector<Index> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (Index s = 0; s < n_sources; ++s)
    for (Index j = 0; j < stride; ++j) adj.data[cursor[flat[s * stride + j]]++] = s;
  // Sources are visited in increasing order, so each row is already sorted.
  return adj;
}

double simplex_volume_signed(const Eigen::MatrixXd& points, std::span<const Index> verts) {
  const Index d = points.rows();
  Eigen::MatrixXd jac(d, d);
  for (Index i = 0; i < d; ++i) jac.col(i) = points.col(verts[i + 1]) - points.col(verts[0]);
  return jac.determinant();
}

// Whether p lies in the closure of the segment/triangle spanned by `verts`.
bool point_in_facet(const Eigen::MatrixXd& points, const std::vector<Index>& verts, const Eigen::VectorXd& p,
                    double h) {
  const double tol = 1e-10;
  const Eigen::VectorXd a = points.col(verts[0]);
  Eigen::MatrixXd axes(points.rows(), static_cast<Index>(verts.size()) - 1);
  for (Index i = 1; i < static_cast<Index>(verts.size()); ++i) axes.col(i - 1) = points.col(verts[i]) - a;
  const Eigen::VectorXd lo = (points(Eigen::all, verts).rowwise().minCoeff().array() - tol * h).matrix();
  const Eigen::VectorXd hi = (points(Eigen::all, verts).rowwise().maxCoeff().array() + tol * h).matrix();
  if ((p.array() < lo.array()).any() || (p.array() > hi.array()).any()) return false;
  const Eigen::VectorXd xi = (axes.transpose() * axes).ldlt().solve(axes.transpose() * (p - a));
  if ((a + axes * xi - p).norm() > tol * h) return false;
  return xi.minCoeff() >= -tol && xi.sum() <= 1.0 + tol;
}

}  // namespace

std::vector<Index> SimplicialMesh::facet(Index f) const {
  if (dim_ == 2) return {edges_[f][0], edges_[f][1]};
  return {faces_[f][0], faces_[f][1], faces_[f][2]};
}

int SimplicialMesh::local_facet(Index c, Index facet) const {
  const auto facets = cell_facets(c);
  for (std::size_t i = 0; i < facets.size(); ++i)
    if (facets[i] == facet) return static_cast<int>(i);
  return -1;
}

int SimplicialMesh::local_vertex(Index c, Index v) const {
  const auto verts = cell(c);
  for (std::size_t i = 0; i < verts.size(); ++i)
    if (verts[i] == v) return static_cast<int>(i);
  return -1;
}

Index SimplicialMesh::find_edge(Index a, Index b) const { return find_sorted(edges_, {a, b}); }

Index SimplicialMesh::find_face(Index a, Index b, Index c) const { return find_sorted(faces_, {a, b, c}); }

double SimplicialMesh::max_cell_diameter() const {
  return cell_diameter_.empty() ? 0.0 : *std::max_element(cell_diameter_.begin(), cell_diameter_.end());
}

SimplexGeometry SimplicialMesh::cell_geometry(Index c) const {
  const auto verts = cell(c);
  Eigen::MatrixXd v(dim_, dim_ + 1);
  for (int i = 0; i <= dim_; ++i) v.col(i) = points_.col(verts[i]);
  return SimplexGeometry(v);
}

SimplexGeometry SimplicialMesh::edge_geometry(Index e) const {
  Eigen::MatrixXd v(dim_, 2);
  v.col(0) = points_.col(edges_[e][0]);
  v.col(1) = points_.col(edges_[e][1]);
  return SimplexGeometry(v);
}

SimplexGeometry SimplicialMesh::face_geometry(Index f) const {
  Eigen::MatrixXd v(dim_, 3);
  for (int i = 0; i < 3; ++i) v.col(i) = points_.col(faces_[f][i]);
  return SimplexGeometry(v);
}

SimplicialMesh build_mesh(const Eigen::MatrixXd& points, const CellMatrix& cells) {
  const Index d = points.rows();
  if (d != 2 && d != 3) throw Error(ErrorCode::IndexOutOfRange, "mesh dimension must be 2 or 3");
  if (cells.rows() != d + 1) throw Error(ErrorCode::IndexOutOfRange, "cells must have d+1 vertices");
  const Index nv = points.cols();
  const Index nc = cells.cols();

  SimplicialMesh mesh;
  mesh.dim_ = static_cast<int>(d);
  mesh.points_ = points;
  mesh.input_cells_ = cells;
  mesh.cell_vertices_.resize(nc * (d + 1));
  mesh.reoriented_.assign(nc, false);

  for (Index c = 0; c < nc; ++c) {
    std::vector<Index> verts(d + 1);
    for (Index i = 0; i <= d; ++i) {
      verts[i] = cells(i, c);
      if (verts[i] < 0 || verts[i] >= nv)
        throw Error(ErrorCode::IndexOutOfRange, "cell " + std::to_string(c) + " references vertex " +
                                                    std::to_string(verts[i]));
    }
    double h = 0.0;
    for (Index i = 0; i <= d; ++i)
      for (Index j = i + 1; j <= d; ++j) h = std::max(h, (points.col(verts[i]) - points.col(verts[j])).norm());
    const double det = simplex_volume_signed(points, verts);
    if (!(std::abs(det) > 1e-12 * std::pow(h, static_cast<double>(d))))
      throw Error(ErrorCode::DegenerateCell, "cell " + std::to_string(c) + " has (near) zero volume");
    if (det < 0.0) {
      std::swap(verts[d - 1], verts[d]);
      mesh.reoriented_[c] = true;
    }
    std::copy(verts.begin(), verts.end(), mesh.cell_vertices_.begin() + c * (d + 1));
  }

  // Edges and faces by sorted vertex tuples.
  for (Index c = 0; c < nc; ++c) {
    const auto verts = mesh.cell(c);
    if (d == 2) {
      for (const auto& le : kTriangleEdges) {
        std::array<Index, 2> e{verts[le[0]], verts[le[1]]};
        std::sort(e.begin(), e.end());
        mesh.edges_.push_back(e);
      }
    } else {
      for (const auto& le : kTetEdges) {
        std::array<Index, 2> e{verts[le[0]], verts[le[1]]};
        std::sort(e.begin(), e.end());
        mesh.edges_.push_back(e);
      }
      for (const auto& lf : kTetFaces) {
        std::array<Index, 3> f{verts[lf[0]], verts[lf[1]], verts[lf[2]]};
        std::sort(f.begin(), f.end());
        mesh.faces_.push_back(f);
      }
    }
  }
  std::sort(mesh.edges_.begin(), mesh.edges_.end());
  mesh.edges_.erase(std::unique(mesh.edges_.begin(), mesh.edges_.end()), mesh.edges_.end());
  std::sort(mesh.faces_.begin(), mesh.faces_.end());
  mesh.faces_.erase(std::unique(mesh.faces_.begin(), mesh.faces_.end()), mesh.faces_.end());

  for (Index c = 0; c < nc; ++c) {
    const auto verts = mesh.cell(c);
    if (d == 2) {
      for (const auto& le : kTriangleEdges) mesh.cell_edges_.push_back(mesh.find_edge(verts[le[0]], verts[le[1]]));
    } else {
      for (const auto& le : kTetEdges) mesh.cell_edges_.push_back(mesh.find_edge(verts[le[0]], verts[le[1]]));
      for (const auto& lf : kTetFaces)
        mesh.cell_faces_.push_back(mesh.find_face(verts[lf[0]], verts[lf[1]], verts[lf[2]]));
    }
  }
  for (const auto& f : mesh.faces_) {
    mesh.face_edges_.push_back(mesh.find_edge(f[1], f[2]));
    mesh.face_edges_.push_back(mesh.find_edge(f[0], f[2]));
    mesh.face_edges_.push_back(mesh.find_edge(f[0], f[1]));
  }

  const Index ne = mesh.num_edges();
  const Index nf = mesh.num_faces();
  mesh.vertex_cells_ = invert(nc, nv, mesh.cell_vertices_, d + 1);
  mesh.edge_cells_ = invert(nc, ne, mesh.cell_edges_, d == 2 ? 3 : 6);
  {
    std::vector<Index> flat;
    for (const auto& e : mesh.edges_) flat.insert(flat.end(), e.begin(), e.end());
    mesh.vertex_edges_ = invert(ne, nv, flat, 2);
  }
  if (d == 3) {
    mesh.face_cells_ = invert(nc, nf, mesh.cell_faces_, 4);
    mesh.edge_faces_ = invert(nf, ne, mesh.face_edges_, 3);
  } else {
    mesh.face_cells_ = Adjacency{};
    mesh.edge_faces_.offsets.assign(ne + 1, 0);
  }

  // Conformity: facets shared by at most two cells, no two cells on the same vertex set.
  const Index nfacets = mesh.num_facets();
  for (Index f = 0; f < nfacets; ++f)
    if (mesh.facet_cells(f).size() > 2)
      throw Error(ErrorCode::NonConforming, "facet " + std::to_string(f) + " shared by more than two cells");
  {
    std::vector<std::vector<Index>> sorted_cells(nc);
    for (Index c = 0; c < nc; ++c) {
      sorted_cells[c].assign(mesh.cell(c).begin(), mesh.cell(c).end());
      std::sort(sorted_cells[c].begin(), sorted_cells[c].end());
    }
    std::sort(sorted_cells.begin(), sorted_cells.end());
    if (std::adjacent_find(sorted_cells.begin(), sorted_cells.end()) != sorted_cells.end())
      throw Error(ErrorCode::NonConforming, "duplicate cell");
  }

  mesh.boundary_vertex_.assign(nv, false);
  mesh.boundary_edge_.assign(ne, false);
  mesh.boundary_face_.assign(nf, false);
  for (Index f = 0; f < nfacets; ++f) {
    if (mesh.facet_cells(f).size() != 1) continue;
    if (d == 2) {
      mesh.boundary_edge_[f] = true;
    } else {
      mesh.boundary_face_[f] = true;
      for (Index e : mesh.face_edges(f)) mesh.boundary_edge_[e] = true;
    }
    for (Index v : mesh.facet(f)) mesh.boundary_vertex_[v] = true;
  }

  // Hanging nodes: no vertex may lie on a boundary facet it does not span.
  for (Index f = 0; f < nfacets; ++f) {
    if (!mesh.boundary_facet(f)) continue;
    const std::vector<Index> verts = mesh.facet(f);
    const double h = mesh.facet_geometry(f).diameter();
    for (Index v = 0; v < nv; ++v) {
      if (std::find(verts.begin(), verts.end(), v) != verts.end()) continue;
      if (point_in_facet(points, verts, points.col(v), h))
        throw Error(ErrorCode::NonConforming,
                    "vertex " + std::to_string(v) + " lies on boundary facet " + std::to_string(f) + " (hanging node)");
    }
  }

  mesh.edge_length_.resize(ne);
  for (Index e = 0; e < ne; ++e)
    mesh.edge_length_[e] = (points.col(mesh.edges_[e][0]) - points.col(mesh.edges_[e][1])).norm();
  mesh.face_diameter_.resize(nf);
  for (Index f = 0; f < nf; ++f) mesh.face_diameter_[f] = mesh.face_geometry(f).diameter();
  mesh.cell_diameter_.resize(nc);
  mesh.shape_regularity_.resize(nc);
  for (Index c = 0; c < nc; ++c) {
    const SimplexGeometry g = mesh.cell_geometry(c);
    double boundary_measure = 0.0;
    for (Index f : mesh.cell_facets(c)) boundary_measure += mesh.facet_geometry(f).measure();
    const double inradius = d * g.measure() / boundary_measure;
    mesh.cell_diameter_[c] = g.diameter();
    mesh.shape_regularity_[c] = g.diameter() / inradius;
  }
  return mesh;
}

AffineMap affine_map(const SimplicialMesh& mesh, Index cell) {
  if (cell < 0 || cell >= mesh.num_cells()) throw Error(ErrorCode::IndexOutOfRange, "cell index");
  const int d = mesh.dimension();
  const auto verts = mesh.cell(cell);
  AffineMap map;
  map.offset = mesh.point(verts[0]);
  map.jacobian.resize(d, d);
  for (int i = 0; i < d; ++i) map.jacobian.col(i) = mesh.point(verts[i + 1]) - map.offset;
  map.determinant = map.jacobian.determinant();
  map.vertex_order.assign(verts.begin(), verts.end());
  map.reordered = mesh.reoriented(cell);
  if (!(map.determinant > 0.0)) throw Error(ErrorCode::DegenerateCell, "non-positive Jacobian");
  return map;
}

SimplicialMesh unit_square_mesh() {
  Eigen::MatrixXd points(2, 4);
  points << 0, 1, 0, 1,  //
      0, 0, 1, 1;
  CellMatrix cells(3, 2);
  cells << 0, 0,  //
      1, 3,       //
      3, 2;
  return build_mesh(points, cells);
}

SimplicialMesh unit_cube_mesh() {
  Eigen::MatrixXd points(3, 8);
  for (Index v = 0; v < 8; ++v) {
    points(0, v) = v & 1;
    points(1, v) = (v >> 1) & 1;
    points(2, v) = (v >> 2) & 1;
  }
  std::array<int, 3> axes{0, 1, 2};
  CellMatrix cells(4, 6);
  Index c = 0;
  do {
    Index v = 0;
    cells(0, c) = v;
    for (int i = 0; i < 3; ++i) {
      v += Index{1} << axes[i];
      cells(i + 1, c) = v;
    }
    ++c;
  } while (std::next_permutation(axes.begin(), axes.end()));
  return build_mesh(points, cells);
}

SimplicialMesh reference_simplex_mesh(int dimension) {
  Eigen::MatrixXd points = Eigen::MatrixXd::Zero(dimension, dimension + 1);
  points.rightCols(dimension).setIdentity();
  CellMatrix cells(dimension + 1, 1);
  for (int i = 0; i <= dimension; ++i) cells(i, 0) = i;
  return build_mesh(points, cells);
}

SimplicialMesh dilate(const SimplicialMesh& mesh, double scale) {
  return build_mesh(scale * mesh.points(), mesh.input_cells());
}

SimplicialMesh relabel(const SimplicialMesh& mesh, std::span<const Index> vertex_map, std::span<const Index> cell_map) {
  Eigen::MatrixXd points(mesh.dimension(), mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); ++v) points.col(vertex_map[v]) = mesh.point(v);
  const CellMatrix& input = mesh.input_cells();
  CellMatrix cells(input.rows(), input.cols());
  for (Index c = 0; c < input.cols(); ++c)
    for (Index i = 0; i < input.rows(); ++i) cells(i, cell_map[c]) = vertex_map[input(i, c)];
  return build_mesh(points, cells);
}

SimplicialMesh canonical_relabel(const SimplicialMesh& mesh) {
  const Index nv = mesh.num_vertices();
  std::vector<Index> order(nv);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Eigen::VectorXd pa = mesh.point(a), pb = mesh.point(b);
    return std::lexicographical_compare(pa.data(), pa.data() + pa.size(), pb.data(), pb.data() + pb.size());
  });
  std::vector<Index> vertex_map(nv);
  for (Index i = 0; i < nv; ++i) vertex_map[order[i]] = i;

  const Index nc = mesh.num_cells();
  std::vector<std::vector<Index>> keys(nc);
  for (Index c = 0; c < nc; ++c) {
    for (Index v : mesh.cell(c)) keys[c].push_back(vertex_map[v]);
    std::sort(keys[c].begin(), keys[c].end());
  }
  std::vector<Index> cell_order(nc);
  std::iota(cell_order.begin(), cell_order.end(), 0);
  std::sort(cell_order.begin(), cell_order.end(), [&](Index a, Index b) { return keys[a] < keys[b]; });
  std::vector<Index> cell_map(nc);
  for (Index i = 0; i < nc; ++i) cell_map[cell_order[i]] = i;

  // Cells are rewritten with sorted vertex tuples so the input order is canonical too.
  Eigen::MatrixXd points(mesh.dimension(), nv);
  for (Index v = 0; v < nv; ++v) points.col(vertex_map[v]) = mesh.point(v);
  CellMatrix cells(mesh.dimension() + 1, nc);
  for (Index c = 0; c < nc; ++c)
    for (Index i = 0; i <= mesh.dimension(); ++i) cells(i, cell_map[c]) = keys[c][i];
  return build_mesh(points, cells);
}

}  // namespace virtenrich
