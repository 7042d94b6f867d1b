#include "test_support.hpp"
#include "virtenrich/vem.hpp"

#include <doctest.h>

#include <cmath>

using namespace virtenrich;
using testing::error_of;

namespace {

std::shared_ptr<const SimplicialMesh> shared(SimplicialMesh m) { return std::make_shared<const SimplicialMesh>(std::move(m)); }

double min_xy(const Eigen::VectorXd& x) { return std::min(x(0), x(1)); }

double bubble(const Eigen::VectorXd& x) {
  double s = std::sin(2 * x(0) + x(1));
  for (Eigen::Index i = 0; i < x.size(); ++i) s *= x(i) * (1 - x(i));
  return s;
}

}  // namespace

TEST_CASE("trace and total dimensions") {
  CHECK(trace_space_dim(3, 2) == 12);
  CHECK(trace_space_dim(4, 2) == 18);
  CHECK(trace_space_dim(5, 2) == 24);
  CHECK(trace_space_dim(3, 3) == 28);
  CHECK(trace_space_dim(4, 3) == 54);
  CHECK(trace_space_dim(5, 3) == 88);
  CHECK(vem_space_dim(3, 2) == 12);
  CHECK(vem_space_dim(4, 2) == 19);
  CHECK(vem_space_dim(5, 2) == 27);
  CHECK(vem_space_dim(4, 3) == 55);
  CHECK(vem_space_dim(5, 3) == 92);
  CHECK(error_of([] { trace_space_dim(2, 2); }) == ErrorCode::UnsupportedOrder);
}

TEST_CASE("local dof counts match the space dimension") {
  for (int d = 2; d <= 3; ++d)
    for (int k = 3; k <= 5; ++k) {
      const auto m = shared(d == 2 ? unit_square_mesh() : unit_cube_mesh());
      const VemFunction xi = interpolate_dofs(m, k, make_field("sinsin", d));
      for (Index c = 0; c < m->num_cells(); ++c) {
        const CellDofs dofs = cell_dofs(xi, c);
        CHECK(dofs.size() == vem_space_dim(k, d));
        CHECK(dofs.flatten().size() == dofs.size());
      }
    }
}

TEST_CASE("enriching a polynomial gives its own dofs") {
  for (int d = 2; d <= 3; ++d)
    for (int k = 3; k <= 4; ++k) {
      const auto m = shared(refine_uniform(d == 2 ? unit_square_mesh() : unit_cube_mesh()));
      const Field p = make_field(d == 2 ? "poly:1,2,-1,0.5,0,3,0,1,-2,0.25" : "poly:1,2,-1,0.5,0,3,0,1,-2,0.25", d);
      const VemFunction e = enrich(interpolate(build_space(m, k), p.value));
      const VemFunction exact = interpolate_dofs(m, k, p);
      CHECK((e.flatten() - exact.flatten()).lpNorm<Eigen::Infinity>() < 1e-10);
    }
}

TEST_CASE("quadratic input is embedded") {
  const auto m = shared(refine_uniform(unit_square_mesh()));
  const LagrangeFunction v2 = interpolate(build_space(m, 2), min_xy);
  const VemFunction a = enrich(v2);
  const VemFunction b = enrich(embed_quadratic_in_cubic(v2));
  CHECK(a.k == 3);
  CHECK((a.flatten() - b.flatten()).norm() == 0.0);
}

TEST_CASE("enrichment preserves H10") {
  for (int d = 2; d <= 3; ++d) {
    const auto m = shared(refine_uniform(d == 2 ? unit_square_mesh() : unit_cube_mesh()));
    const VemFunction e = enrich(interpolate(build_space(m, 4), bubble));
    for (Index p = 0; p < m->num_vertices(); ++p)
      if (m->boundary_vertex(p)) {
        CHECK(std::abs(e.vertex_values(p)) < 1e-14);
        // Only the normal component may survive on a face of the domain.
        const Eigen::VectorXd g = e.vertex_gradients.col(p);
        const Eigen::VectorXd x = m->point(p);
        for (int i = 0; i < d; ++i)
          if (x(i) > 1e-12 && x(i) < 1 - 1e-12) CHECK(std::abs(g(i)) < 1e-12);
      }
    for (Index ed = 0; ed < m->num_edges(); ++ed)
      if (m->boundary_edge(ed) && e.edge_f.rows() > 0) CHECK(e.edge_f.col(ed).norm() < 1e-12);
  }
}

TEST_CASE("enrichment is linear") {
  const auto m = shared(refine_uniform(unit_cube_mesh()));
  const auto space = build_space(m, 4);
  const LagrangeFunction a = interpolate(space, bubble);
  const LagrangeFunction b = interpolate(space, min_xy);
  const Eigen::VectorXd lhs = enrich(a + 2.5 * b).flatten();
  const Eigen::VectorXd rhs = enrich(a).flatten() + 2.5 * enrich(b).flatten();
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-10 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("conformity of shared dofs") {
  const auto m = shared(refine_uniform(unit_square_mesh()));
  const VemFunction e = enrich(interpolate(build_space(m, 4), min_xy));
  CHECK(check_conformity(e).clean);
  std::vector<CellDofs> cells;
  for (Index c = 0; c < m->num_cells(); ++c) cells.push_back(cell_dofs(e, c));
  CHECK(check_conformity(*m, cells).clean);

  // Facet normal data seen from both sides must have opposite signs.
  Index interior = -1;
  for (Index ed = 0; ed < m->num_edges() && interior < 0; ++ed)
    if (!m->boundary_edge(ed) && e.edge_normal.col(ed).norm() > 1e-8) interior = ed;
  REQUIRE(interior >= 0);
  const Index c = m->edge_cells(interior)[1];
  const int local = m->local_facet(c, interior);
  cells[c].edge_normal[local] = -cells[c].edge_normal[local];
  const ConformityReport flipped = check_conformity(*m, cells);
  CHECK_FALSE(flipped.clean);
  CHECK_FALSE(flipped.violations.empty());

  const auto single = shared(reference_simplex_mesh(2));
  CHECK(check_conformity(enrich(interpolate(build_space(single, 3), min_xy))).clean);
}

TEST_CASE("dof L2 norm") {
  const auto m = shared(unit_square_mesh());
  const VemFunction zero = interpolate_dofs(m, 4, make_field("zero", 2));
  CHECK(dof_l2_norm(*m, cell_dofs(zero, 0)) == 0.0);
  // Constants scale with the square root of the cell measure.
  const Field one = make_field("poly:1", 2);
  const auto big = shared(dilate(unit_square_mesh(), 3.0));
  const double small_norm = dof_l2_norm(*m, cell_dofs(interpolate_dofs(m, 4, one), 0));
  const double big_norm = dof_l2_norm(*big, cell_dofs(interpolate_dofs(big, 4, one), 0));
  CHECK(small_norm > 0.0);
  CHECK(big_norm / small_norm == doctest::Approx(3.0));
}

TEST_CASE("dof discrepancy of E_h v against v") {
  const auto m = shared(refine_uniform(unit_square_mesh()));
  const auto space = build_space(m, 3);
  const LagrangeFunction smooth = interpolate(space, make_field("poly:0,1,0,2,1,-1", 2).value);
  const VemFunction es = enrich(smooth);
  const LagrangeFunction kinked = interpolate(space, min_xy);
  const VemFunction ek = enrich(kinked);
  double kink = 0.0;
  for (Index c = 0; c < m->num_cells(); ++c) {
    CHECK(error_dof_norms(smooth, es, c).l2 < 1e-12);
    const ErrorDofNorms n = error_dof_norms(kinked, ek, c);
    CHECK(n.h2 >= n.l2);
    kink = std::max(kink, n.l2);
  }
  CHECK(kink > 1e-6);
}

TEST_CASE("dof table lists every stored dof") {
  const auto m = shared(unit_cube_mesh());
  const VemFunction e = interpolate_dofs(m, 5, make_field("sinsin", 3));
  const auto table = dof_table(e);
  CHECK(static_cast<Index>(table.size()) == e.num_dofs());
  const Eigen::VectorXd flat = e.flatten();
  for (std::size_t i = 0; i < table.size(); ++i) CHECK(table[i].value == flat(static_cast<Eigen::Index>(i)));
}
