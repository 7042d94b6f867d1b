#include "virtenrich/error.hpp"
#include "virtenrich/mesh.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace virtenrich {

SimplicialMesh read_mesh(std::istream& in) {
  int dim = 0;
  std::vector<double> coords;
  std::vector<Index> cell_ids;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "dim") {
      if (dim != 0) fail("repeated dim header");
      if (!(ls >> dim) || (dim != 2 && dim != 3)) fail("dim must be 2 or 3");
    } else if (tag == "v") {
      if (dim == 0) fail("vertex before dim header");
      for (int i = 0; i < dim; ++i) {
        double x;
        if (!(ls >> x)) fail("expected " + std::to_string(dim) + " coordinates");
        coords.push_back(x);
      }
    } else if (tag == "c") {
      if (dim == 0) fail("cell before dim header");
      for (int i = 0; i <= dim; ++i) {
        long long idx;
        if (!(ls >> idx)) fail("expected " + std::to_string(dim + 1) + " vertex indices");
        cell_ids.push_back(static_cast<Index>(idx));
      }
    } else {
      fail("unknown record '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
  }
  if (dim == 0) throw Error(ErrorCode::ParseError, "missing dim header");
  const Index nv = static_cast<Index>(coords.size()) / dim;
  const Index nc = static_cast<Index>(cell_ids.size()) / (dim + 1);
  const Eigen::MatrixXd points = Eigen::Map<const Eigen::MatrixXd>(coords.data(), dim, nv);
  const CellMatrix cells = Eigen::Map<const CellMatrix>(cell_ids.data(), dim + 1, nc);
  return build_mesh(points, cells);
}

SimplicialMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open mesh file " + path);
  return read_mesh(in);
}

void write_mesh(std::ostream& out, const SimplicialMesh& mesh) {
  const int d = mesh.dimension();
  out << "dim " << d << '\n' << std::setprecision(17);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    out << 'v';
    for (int i = 0; i < d; ++i) out << ' ' << mesh.points()(i, v);
    out << '\n';
  }
  const CellMatrix& cells = mesh.input_cells();
  for (Index c = 0; c < cells.cols(); ++c) {
    out << 'c';
    for (Index i = 0; i < cells.rows(); ++i) out << ' ' << cells(i, c);
    out << '\n';
  }
}

std::string mesh_to_string(const SimplicialMesh& mesh) {
  std::ostringstream out;
  write_mesh(out, mesh);
  return out.str();
}

}  // namespace virtenrich
