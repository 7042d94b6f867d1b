#include "test_support.hpp"
#include "virtenrich/energy_projection.hpp"
#include "virtenrich/skeleton.hpp"

#include <doctest.h>

#include <cmath>

using namespace virtenrich;
using testing::error_of;

namespace {

std::shared_ptr<const SimplicialMesh> shared(SimplicialMesh m) { return std::make_shared<const SimplicialMesh>(std::move(m)); }

double max_gap(const SimplicialMesh& m, Index c, const PolynomialOnSimplex& p, const Field& f) {
  const Eigen::MatrixXd& probes = reference_lattice(m.dimension(), 5);
  const SimplexGeometry g = m.cell_geometry(c);
  double gap = 0.0;
  for (Eigen::Index i = 0; i < probes.cols(); ++i)
    gap = std::max(gap, std::abs(p.value(probes.col(i)) - f.value(g.to_physical(probes.col(i)))));
  return gap;
}

}  // namespace

TEST_CASE("P_k is reproduced") {
  for (int d = 2; d <= 3; ++d)
    for (int k = 3; k <= 5; ++k) {
      const auto m = shared(d == 2 ? refine_uniform(unit_square_mesh()) : unit_cube_mesh());
      Eigen::VectorXd coeffs = Eigen::VectorXd::LinSpaced(poly_dim(d, k), -1.0, 2.0);
      const Field p = polynomial_field(Polynomial(d, k, coeffs));
      const VemFunction xi = interpolate_dofs(m, k, p);
      for (Index c = 0; c < m->num_cells(); ++c) CHECK(max_gap(*m, c, energy_projection(xi, c), p) <= 1e-9);
    }
}

TEST_CASE("affine functions are reproduced on a stretched cell") {
  Eigen::MatrixXd pts(2, 3);
  pts << 0, 5, 0.2, 0, 0.1, 0.3;
  CellMatrix cells(3, 1);
  cells << 0, 1, 2;
  const auto m = shared(build_mesh(pts, cells));
  const Field p = make_field("poly:1,-2,3", 2);
  CHECK(max_gap(*m, 0, energy_projection(interpolate_dofs(m, 3, p), 0), p) <= 1e-10);
}

TEST_CASE("recovered boundary gradient of a polynomial") {
  for (int d = 2; d <= 3; ++d) {
    const auto m = shared(d == 2 ? unit_square_mesh() : unit_cube_mesh());
    const Field p = make_field("poly:0,1,2,-1,0.5,3,1,0,0,2", d);
    const VemFunction xi = interpolate_dofs(m, 4, p);
    const CellTracePair pair = trace_from_dofs(*m, cell_dofs(xi, 0));
    for (int lf = 0; lf <= d; ++lf) {
      const auto grad = boundary_gradient(*m, pair, lf);
      const SimplexGeometry g = m->facet_geometry(m->cell_facets(0)[lf]);
      const Eigen::MatrixXd& probes = reference_lattice(d - 1, 3);
      for (Eigen::Index i = 0; i < probes.cols(); ++i) {
        const Eigen::VectorXd expected = p.gradient(g.to_physical(probes.col(i)));
        for (int a = 0; a < d; ++a) CHECK(grad[a](probes.col(i)) == doctest::Approx(expected(a)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("zero pair projects to zero") {
  const auto m = shared(reference_simplex_mesh(3));
  const VemFunction xi = interpolate_dofs(m, 4, make_field("zero", 3));
  CHECK(energy_projection(xi, 0).poly.coefficients().norm() == 0.0);
}

TEST_CASE("incompatible pairs are rejected") {
  const auto m = shared(unit_square_mesh());
  const VemFunction xi = interpolate_dofs(m, 3, make_field("sinsin", 2));
  CellTracePair pair = trace_from_dofs(*m, cell_dofs(xi, 0));
  CHECK_NOTHROW(boundary_gradient(*m, pair, 0));
  pair.edges[1].normal += Polynomial(1, 0, Eigen::VectorXd::Constant(1, 0.1));
  CHECK(error_of([&] { boundary_gradient(*m, pair, 0); }) == ErrorCode::IncompatiblePair);
}

TEST_CASE("projection of E_h v converges for a smooth function") {
  const Field f = make_field("sinsin", 2);
  double prev = 0.0;
  for (int level = 2; level <= 3; ++level) {
    const auto m = shared(refine_uniform(unit_square_mesh(), level));
    const VemFunction e = enrich(interpolate(build_space(m, 3), f.value));
    double gap = 0.0;
    for (Index c = 0; c < m->num_cells(); ++c) gap = std::max(gap, max_gap(*m, c, energy_projection(e, c), f));
    if (level == 3) CHECK(prev / gap > 8.0);
    prev = gap;
  }
}
