#pragma once

#include <vector>

#include "projray/linalg.hpp"

namespace projray {

// All three metrics and the geodesic toolkit live on the projective space of
// a finite dimensional complex Hilbert space.  Rays are the points; tangent
// vectors at [x] are ambient vectors orthogonal to the representative.

struct TangentVector {
  Ray base;
  Vector dir;  // inner(dir, base.rep()) == 0 up to tolerance
};

// Validates orthogonality of dir against base (|inner| <= tol * ||dir||).
TangentVector make_tangent(const Ray& base, const Vector& dir,
                           double tol = 1e-10);

// sqrt(2 (1 - |<x, y>|)): the chordal metric between canonical unit
// representatives.
double chordal_distance(const Ray& x, const Ray& y);

// arccos |<x, y>|, values in [0, pi/2].
double riemannian_distance(const Ray& x, const Ray& y);

// Trace norm of the projector difference, equal to 2 sqrt(1 - |<x, y>|^2).
double projector_distance(const Ray& x, const Ray& y);

// |<v, x>| evaluated on a representative; phase invariance is what makes
// this well defined on rays and ball points.
double h_value(const Vector& v, const Ray& x);
double h_value(const Vector& v, const BallPoint& x);

// <a v, v> for hermitian a, i.e. the expectation of a in state v.
double ell_value(const Vector& v, const Matrix& a);

// Point reflection of [y] through [center]: the geodesic symmetry
// y |-> -y + 2 <y, c> c for a unit representative c.
Ray reflect(const Ray& center, const Ray& y);

// Geodesic midpoint of two non-orthogonal rays.  Rejects pairs with
// |<x, y>| <= tol_orth: antipodal-distance rays have no unique midpoint.
Ray midpoint(const Ray& x, const Ray& y, double tol_orth = 1e-10);

struct ExpResult {
  Ray point;
  // Tangent norms above pi/2 overshoot the injectivity radius; the map is
  // still evaluated but the result no longer inverts through log_map.
  bool beyond_injectivity_radius;
};

// Geodesic through base with initial velocity dir, evaluated at time 1:
// cos(|dir|) x + sin(|dir|) dir/|dir|.
ExpResult exp_map(const TangentVector& t);

// Inverse of exp_map for non-orthogonal x, y; the returned tangent has norm
// equal to the riemannian distance.
TangentVector log_map(const Ray& x, const Ray& y, double tol_orth = 1e-10);

// Dyadic densification: starts from [x, y] and inserts geodesic midpoints
// `depth` times, returning 2^depth + 1 rays with equal consecutive gaps.
std::vector<Ray> dyadic_chain(const Ray& x, const Ray& y, int depth,
                              double tol_orth = 1e-10);

// Phase-normalizes a unitary g against the base vector v0, returning
// (|<g v0, v0>| / <g v0, v0>) g, the unique phase multiple with a positive
// real overlap.  Rejects g that move v0 into the orthogonal hyperplane.
Matrix phase_normalized_section(const Matrix& g, const Vector& v0);

}  // namespace projray
