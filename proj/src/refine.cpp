#include "virtenrich/mesh.hpp"

#include <array>

namespace virtenrich {

SimplicialMesh refine_uniform(const SimplicialMesh& mesh) {
  const int d = mesh.dimension();
  const Index nv = mesh.num_vertices();
  const Index ne = mesh.num_edges();
  Eigen::MatrixXd points(d, nv + ne);
  points.leftCols(nv) = mesh.points();
  for (Index e = 0; e < ne; ++e)
    points.col(nv + e) = 0.5 * (mesh.point(mesh.edge(e)[0]) + mesh.point(mesh.edge(e)[1]));

  const Index nc = mesh.num_cells();
  const int children = d == 2 ? 4 : 8;
  CellMatrix cells(d + 1, nc * children);
  Index out = 0;
  auto push = [&](std::initializer_list<Index> verts) {
    Index i = 0;
    for (Index v : verts) cells(i++, out) = v;
    ++out;
  };

  for (Index c = 0; c < nc; ++c) {
    const auto v = mesh.cell(c);
    auto mid = [&](int a, int b) { return nv + mesh.find_edge(v[a], v[b]); };
    if (d == 2) {
      const Index m01 = mid(0, 1), m02 = mid(0, 2), m12 = mid(1, 2);
      push({v[0], m01, m02});
      push({v[1], m12, m01});
      push({v[2], m02, m12});
      push({m01, m12, m02});
      continue;
    }
    const Index m01 = mid(0, 1), m02 = mid(0, 2), m03 = mid(0, 3);
    const Index m12 = mid(1, 2), m13 = mid(1, 3), m23 = mid(2, 3);
    push({v[0], m01, m02, m03});
    push({m01, v[1], m12, m13});
    push({m02, m12, v[2], m23});
    push({m03, m13, m23, v[3]});

    // Inner octahedron: split along the shortest of its three diagonals.
    const std::array<std::array<Index, 6>, 3> options = {{
        {m01, m23, m02, m03, m13, m12},
        {m02, m13, m01, m03, m23, m12},
        {m03, m12, m01, m02, m23, m13},
    }};
    int best = 0;
    double best_length = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double length = (points.col(options[i][0]) - points.col(options[i][1])).norm();
      if (i == 0 || length < best_length - 1e-14 * best_length) {
        best = i;
        best_length = length;
      }
    }
    const auto& o = options[best];
    for (int i = 0; i < 4; ++i) push({o[0], o[1], o[2 + i], o[2 + (i + 1) % 4]});
  }
  return build_mesh(points, cells);
}

SimplicialMesh refine_uniform(const SimplicialMesh& mesh, int times) {
  SimplicialMesh result = mesh;
  for (int i = 0; i < times; ++i) result = refine_uniform(result);
  return result;
}

}  // namespace virtenrich
