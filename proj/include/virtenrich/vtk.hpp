#ifndef VIRTENRICH_VTK_HPP
#define VIRTENRICH_VTK_HPP

#include "virtenrich/vem.hpp"

#include <iosfwd>

namespace virtenrich {

/// Legacy ASCII unstructured grid of the per-cell energy projections. Each cell
/// is split by `subdivisions` uniform refinements of the reference simplex and
/// the proxy is sampled at the sub-vertices (duplicated per cell, so the field
/// may be discontinuous).
void write_vtk(std::ostream& out, const VemFunction& xi, int subdivisions = 2);

}  // namespace virtenrich

#endif  // VIRTENRICH_VTK_HPP
