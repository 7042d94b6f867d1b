#ifndef VIRTENRICH_EDGE_SYSTEMS_HPP
#define VIRTENRICH_EDGE_SYSTEMS_HPP

#include "virtenrich/polynomial.hpp"

#include <Eigen/Dense>

#include <functional>

namespace virtenrich {

// Small unisolvent interpolation problems on edges and faces. Edge polynomials
// use the parameter t in [0, 1] running from the lower to the higher vertex id;
// moments are the normalized moments int_0^1 p t^i dt.

/// p in P_k with p(0), p(1), tangential derivatives dp/ds (s = t * length) at
/// both ends and moments up to order k - 4.
Polynomial hermite_moment_edge(int k, double length, double value0, double value1, double slope0, double slope1,
                               const Eigen::Ref<const Eigen::VectorXd>& moments);

/// p in P_m with p(0), p(1) and moments up to order m - 2.
Polynomial endpoint_moment_edge(int m, double value0, double value1, const Eigen::Ref<const Eigen::VectorXd>& moments);

/// p in P_m on the reference triangle with prescribed values at the boundary
/// points of the degree-m lattice and normalized moments up to order m - 3.
Polynomial boundary_moment_face(int m, const std::function<double(const Eigen::VectorXd&)>& boundary_value,
                                const Eigen::Ref<const Eigen::VectorXd>& moments);

}  // namespace virtenrich

#endif  // VIRTENRICH_EDGE_SYSTEMS_HPP
