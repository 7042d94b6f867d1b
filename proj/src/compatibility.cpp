#include "virtenrich/error.hpp"
#include "virtenrich/frames.hpp"
#include "virtenrich/quadrature.hpp"
#include "virtenrich/trace.hpp"

#include <algorithm>

namespace virtenrich {
namespace {

double param_of(const EdgeTrace& et, int local) { return local == et.lo ? 0.0 : 1.0; }

double slope(const SimplicialMesh& mesh, const EdgeTrace& et, double t) {
  return et.f.derivative(0)(t) / mesh.edge_length(et.edge);
}

Eigen::VectorXd face_point(const EdgeTrace& et, double t) {
  static const Eigen::Vector2d corners[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  return (1.0 - t) * corners[et.lo] + t * corners[et.hi];
}

CompatibilityReport check_2d(const SimplicialMesh& mesh, const CellTracePair& pair) {
  CompatibilityReport report;
  report.residual.assign(3, 0.0);
  std::vector<Eigen::VectorXd> normal(3);
  for (int j = 0; j < 3; ++j) normal[j] = facet_normal(mesh, pair.cell, pair.edges[j].edge);
  for (int i = 0; i < 3; ++i) {
    double values[2];
    Eigen::VectorXd fields[2];
    int slot = 0;
    for (int j = 0; j < 3; ++j) {
      if (j == i) continue;
      const EdgeTrace& et = pair.edges[j];
      const double t = param_of(et, i);
      values[slot] = et.f(t);
      fields[slot] = slope(mesh, et, t) * edge_tangent(mesh, et.edge) + et.normal(t) * normal[j];
      ++slot;
    }
    const double scale = std::max({1.0, fields[0].lpNorm<Eigen::Infinity>(), fields[1].lpNorm<Eigen::Infinity>()});
    const double diff = std::max(std::abs(values[0] - values[1]), (fields[0] - fields[1]).lpNorm<Eigen::Infinity>());
    report.residual[i] = diff / scale;
  }
  report.max_residual = *std::max_element(report.residual.begin(), report.residual.end());
  return report;
}

CompatibilityReport check_3d(const SimplicialMesh& mesh, const CellTracePair& pair) {
  CompatibilityReport report;
  report.residual.assign(6, 0.0);
  const auto cell_edges = mesh.cell_edges(pair.cell);
  std::vector<Eigen::VectorXd> face_normal(4);
  for (int i = 0; i < 4; ++i) face_normal[i] = facet_normal(mesh, pair.cell, pair.faces[i].face);

  auto local_edge = [&](Index e) {
    return static_cast<int>(std::find(cell_edges.begin(), cell_edges.end(), e) - cell_edges.begin());
  };
  // In-plane part (df/ds) t + q n_{e,F} of the recovered gradient.
  auto in_plane = [&](const FaceTrace& ft, const EdgeTrace& et, double t) {
    return Eigen::Vector3d(slope(mesh, et, t) * edge_tangent(mesh, et.edge) +
                           et.normal(t) * Eigen::VectorXd(edge_conormal(mesh, ft.face, et.edge)));
  };

  // Each face's own boundary pair must be compatible at the face vertices.
  for (const FaceTrace& ft : pair.faces) {
    for (int corner = 0; corner < 3; ++corner) {
      Eigen::Vector3d fields[2];
      double values[2];
      int slot = 0;
      int touched[2];
      for (int j = 0; j < 3; ++j) {
        if (j == corner) continue;
        const EdgeTrace& et = ft.edges[j];
        const double t = param_of(et, corner);
        values[slot] = et.f(t);
        fields[slot] = in_plane(ft, et, t);
        touched[slot] = local_edge(et.edge);
        ++slot;
      }
      const double scale = std::max({1.0, fields[0].lpNorm<Eigen::Infinity>(), fields[1].lpNorm<Eigen::Infinity>()});
      const double diff = std::max(std::abs(values[0] - values[1]), (fields[0] - fields[1]).lpNorm<Eigen::Infinity>());
      for (int s : touched) report.residual[s] = std::max(report.residual[s], diff / scale);
    }
  }

  // Across each cell edge the two faces must recover the same gradient.
  Eigen::VectorXd nodes, weights;
  gauss_legendre(pair.k + 1, nodes, weights);
  std::vector<double> params{0.0, 1.0};
  params.insert(params.end(), nodes.data(), nodes.data() + nodes.size());
  for (int le = 0; le < 6; ++le) {
    const Index e = cell_edges[le];
    const FaceTrace* faces[2];
    const EdgeTrace* traces[2];
    int found = 0;
    for (int i = 0; i < 4 && found < 2; ++i)
      for (const EdgeTrace& et : pair.faces[i].edges)
        if (et.edge == e) {
          faces[found] = &pair.faces[i];
          traces[found] = &et;
          ++found;
        }
    if (found != 2) throw Error(ErrorCode::IncompatiblePair, "cell edge not shared by two faces");
    for (double t : params) {
      Eigen::Vector3d fields[2];
      for (int s = 0; s < 2; ++s) {
        const int fi = static_cast<int>(faces[s] - pair.faces.data());
        fields[s] = in_plane(*faces[s], *traces[s], t) +
                    faces[s]->g(face_point(*traces[s], t)) * Eigen::Vector3d(face_normal[fi]);
      }
      const double scale = std::max({1.0, fields[0].lpNorm<Eigen::Infinity>(), fields[1].lpNorm<Eigen::Infinity>()});
      const double diff = std::max(std::abs(traces[0]->f(t) - traces[1]->f(t)),
                                   (fields[0] - fields[1]).lpNorm<Eigen::Infinity>());
      report.residual[le] = std::max(report.residual[le], diff / scale);
    }
  }
  report.max_residual = *std::max_element(report.residual.begin(), report.residual.end());
  return report;
}

}  // namespace

CompatibilityReport check_compatibility(const SimplicialMesh& mesh, const CellTracePair& pair) {
  return pair.dimension == 2 ? check_2d(mesh, pair) : check_3d(mesh, pair);
}

}  // namespace virtenrich
