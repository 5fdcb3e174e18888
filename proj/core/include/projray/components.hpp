#pragma once

#include <vector>

#include "projray/linalg.hpp"

namespace projray {

// Rays are "coupled" when their representatives are non-orthogonal.  The
// transitive closure of coupling cuts a family of rays into blocks that no
// sequence of overlaps connects; each block spans a subspace orthogonal to
// the others whenever the family itself is cleanly block-structured.

struct RayGraph {
  std::vector<Ray> rays;
  std::vector<std::vector<int>> adjacency;  // sorted neighbor lists
  double tol_orth = 0.0;
};

struct Component {
  std::vector<int> indices;  // ascending positions into the input family
  Matrix basis;              // orthonormal columns spanning the members
};

struct ComponentDecomposition {
  std::vector<Component> components;  // ordered by smallest member index
  // Smallest |<x, y>| over coupled pairs: the weakest link actually holding
  // some component together (1 when no pair is coupled).
  double min_coupling = 1.0;
  // Largest |<x, y>| across different components; how close the split came
  // to the tolerance (0 when there is a single component).
  double cross_residual = 0.0;
};

// Edge x ~ y iff |<x, y>| > tol_orth on canonical representatives.
RayGraph build_ray_graph(const std::vector<Ray>& rays, double tol_orth = 1e-10);

ComponentDecomposition indecomposable_components(const std::vector<Ray>& rays,
                                                 double tol_orth = 1e-10);

// Exactly one component.
bool is_indecomposable(const std::vector<Ray>& rays, double tol_orth = 1e-10);

// The representatives span all of dimension n.
bool is_total(const std::vector<Ray>& rays, Eigen::Index n,
              double rel_threshold = 1e-10);

}  // namespace projray
