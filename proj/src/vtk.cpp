#include "virtenrich/vtk.hpp"

#include "virtenrich/energy_projection.hpp"
#include "virtenrich/report.hpp"

#include <ostream>

namespace virtenrich {

void write_vtk(std::ostream& out, const VemFunction& xi, int subdivisions) {
  const SimplicialMesh& mesh = *xi.mesh;
  const int d = mesh.dimension();
  const SimplicialMesh sub = refine_uniform(reference_simplex_mesh(d), subdivisions);
  const Index np = sub.num_vertices();
  const Index nc = sub.num_cells();
  const Index cells = mesh.num_cells();

  std::vector<PolynomialOnSimplex> proxies;
  for (Index c = 0; c < cells; ++c) proxies.push_back(energy_projection(xi, c));

  out << "# vtk DataFile Version 3.0\nenergy projection, k = " << xi.k << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << cells * np << " double\n";
  for (Index c = 0; c < cells; ++c)
    for (Index p = 0; p < np; ++p) {
      const Eigen::VectorXd x = proxies[c].geometry.to_physical(sub.point(p));
      out << format_double(x(0)) << ' ' << format_double(x(1)) << ' ' << (d == 3 ? format_double(x(2)) : "0")
          << '\n';
    }
  out << "CELLS " << cells * nc << ' ' << cells * nc * (d + 2) << '\n';
  for (Index c = 0; c < cells; ++c)
    for (Index s = 0; s < nc; ++s) {
      out << d + 1;
      for (Index v : sub.cell(s)) out << ' ' << c * np + v;
      out << '\n';
    }
  out << "CELL_TYPES " << cells * nc << '\n';
  for (Index i = 0; i < cells * nc; ++i) out << (d == 2 ? 5 : 10) << '\n';
  out << "POINT_DATA " << cells * np << "\nSCALARS proxy double 1\nLOOKUP_TABLE default\n";
  for (Index c = 0; c < cells; ++c)
    for (Index p = 0; p < np; ++p) out << format_double(proxies[c].value(sub.point(p))) << '\n';
  out << "CELL_DATA " << cells * nc << "\nSCALARS cell int 1\nLOOKUP_TABLE default\n";
  for (Index c = 0; c < cells; ++c)
    for (Index s = 0; s < nc; ++s) out << c << '\n';
}

}  // namespace virtenrich
