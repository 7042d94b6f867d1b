#ifndef VIRTENRICH_ENERGY_PROJECTION_HPP
#define VIRTENRICH_ENERGY_PROJECTION_HPP

#include "virtenrich/simplex.hpp"
#include "virtenrich/trace.hpp"
#include "virtenrich/vem.hpp"

#include <vector>

namespace virtenrich {

/// p in P_k(T) with (D^2 p, D^2 q)_T = a(xi, q) for all q in P_k(T), where
///   a(xi, q) = int_dT (D^2 q n) . G - int_dT f d(Lap q)/dn + int_T Q_{k-4} xi Lap^2 q
/// and G is the gradient recovered from the trace pair. The affine part is fixed
/// by the sums of vertex values and vertex gradients. In 3D the face values f
/// are replaced by the energy projection of the face function. The result is
/// written in the cell's reference coordinates.
PolynomialOnSimplex energy_projection(const SimplicialMesh& mesh, const CellTracePair& pair);
PolynomialOnSimplex energy_projection(const VemFunction& xi, Index cell);

/// Energy projection of the face function f_F of local face i (3D), in face
/// reference coordinates.
Polynomial face_projection(const SimplicialMesh& mesh, const CellTracePair& pair, int local_face);

/// Recovered gradient on one local facet, as d polynomials in the facet's
/// reference coordinates. Throws IncompatiblePair when the pair fails the
/// compatibility check.
std::vector<Polynomial> boundary_gradient(const SimplicialMesh& mesh, const CellTracePair& pair, int local_facet,
                                          double tolerance = 1e-8);

}  // namespace virtenrich

#endif  // VIRTENRICH_ENERGY_PROJECTION_HPP
