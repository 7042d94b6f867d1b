#include "virtenrich/frames.hpp"

#include <doctest.h>

#include <cmath>

using namespace virtenrich;

TEST_CASE("hypotenuse normal of the reference triangle") {
  const SimplicialMesh m = reference_simplex_mesh(2);
  const Index hyp = m.find_edge(1, 2);
  const Eigen::VectorXd n = facet_normal(m, 0, hyp);
  CHECK(n(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(n(1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  const FacetFrame frame = facet_frame(m, 0, hyp);
  CHECK(frame.normal.dot(frame.tangent) == doctest::Approx(0.0));
}

TEST_CASE("face opposite the origin of the reference tetrahedron") {
  const SimplicialMesh m = reference_simplex_mesh(3);
  const Eigen::VectorXd n = facet_normal(m, 0, m.find_face(1, 2, 3));
  for (int i = 0; i < 3; ++i) CHECK(n(i) == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("shared facets get opposite normals") {
  for (const SimplicialMesh& m : {refine_uniform(unit_square_mesh(), 2), refine_uniform(unit_cube_mesh())})
    for (Index f = 0; f < m.num_facets(); ++f) {
      const auto cells = m.facet_cells(f);
      if (cells.size() != 2) continue;
      CHECK(facet_normal(m, cells[0], f).dot(facet_normal(m, cells[1], f)) == doctest::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("boundary normals point out of the domain") {
  const SimplicialMesh m = refine_uniform(unit_cube_mesh());
  const Eigen::Vector3d center(0.5, 0.5, 0.5);
  for (Index f = 0; f < m.num_faces(); ++f) {
    if (!m.boundary_face(f)) continue;
    const Eigen::VectorXd n = boundary_normal(m, f);
    CHECK(n.dot(m.point(m.face(f)[0]) - center) > 0.0);
  }
}

TEST_CASE("edge perp basis is orthonormal and independent of the requester") {
  const SimplicialMesh m = refine_uniform(unit_cube_mesh());
  for (Index e = 0; e < m.num_edges(); ++e) {
    const auto b = edge_perp_basis(m, e);
    const Eigen::Vector3d t = edge_tangent(m, e);
    CHECK(b[0].norm() == doctest::Approx(1.0));
    CHECK(b[1].norm() == doctest::Approx(1.0));
    CHECK(std::abs(b[0].dot(t)) < 1e-14);
    CHECK(std::abs(b[1].dot(t)) < 1e-14);
    CHECK(std::abs(b[0].dot(b[1])) < 1e-14);
    for (Index f : m.edge_faces(e)) {
      const auto cells = m.face_cells(f);
      const FacetFrame frame = facet_frame(m, cells[0], f);
      for (std::size_t j = 0; j < frame.edges.size(); ++j)
        if (frame.edges[j] == e) {
          CHECK((frame.perp_bases[j][0] - b[0]).norm() == 0.0);
          CHECK((frame.perp_bases[j][1] - b[1]).norm() == 0.0);
        }
    }
  }
}

TEST_CASE("edge conormals lie in the face and point away from the third vertex") {
  const SimplicialMesh m = unit_cube_mesh();
  for (Index f = 0; f < m.num_faces(); ++f) {
    const auto fv = m.face(f);
    const Eigen::Vector3d n = Eigen::Vector3d(m.point(fv[1]) - m.point(fv[0])).cross(Eigen::Vector3d(m.point(fv[2]) - m.point(fv[0])));
    for (int j = 0; j < 3; ++j) {
      const Index e = m.face_edges(f)[j];
      const Eigen::Vector3d c = edge_conormal(m, f, e);
      CHECK(std::abs(c.dot(n)) < 1e-12);
      CHECK(std::abs(c.dot(edge_tangent(m, e))) < 1e-12);
      CHECK(c.dot(Eigen::Vector3d(m.point(fv[j]) - m.point(m.edge(e)[0]))) < 0.0);
    }
  }
}
