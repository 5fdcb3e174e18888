#include "projray/projective.hpp"

#include <algorithm>
#include <cmath>

namespace projray {

namespace {

double clamped_overlap(const Ray& x, const Ray& y) {
  return std::min(1.0, std::abs(inner(x.rep(), y.rep())));
}

}  // namespace

TangentVector make_tangent(const Ray& base, const Vector& dir, double tol) {
  if (dir.size() != base.dim()) {
    throw PreconditionError("dimension_mismatch",
                            "tangent direction does not match base dimension");
  }
  const double overlap = std::abs(inner(dir, base.rep()));
  if (overlap > tol * std::max(1.0, dir.norm())) {
    throw PreconditionError("not_tangent",
                            "direction is not orthogonal to the base ray",
                            {{"overlap", overlap}});
  }
  return {base, dir};
}

double chordal_distance(const Ray& x, const Ray& y) {
  return std::sqrt(2.0 * (1.0 - clamped_overlap(x, y)));
}

double riemannian_distance(const Ray& x, const Ray& y) {
  // Same value as acos of the overlap, but evaluated through atan2 of the
  // orthogonal rejection: acos alone loses half the digits for nearly equal
  // rays, reading ~1e-8 where the true angle is ~1e-16.
  const Complex c = inner(y.rep(), x.rep());
  const Vector rejection = y.rep() - c * x.rep();
  return std::atan2(rejection.norm(), std::abs(c));
}

double projector_distance(const Ray& x, const Ray& y) {
  const double c = clamped_overlap(x, y);
  return 2.0 * std::sqrt(1.0 - c * c);
}

double h_value(const Vector& v, const Ray& x) {
  return std::abs(inner(v, x.rep()));
}

double h_value(const Vector& v, const BallPoint& x) {
  return std::abs(inner(v, x.rep()));
}

double ell_value(const Vector& v, const Matrix& a) {
  if (a.rows() != a.cols() || a.cols() != v.size()) {
    throw PreconditionError("dimension_mismatch",
                            "operator and vector dimensions do not match");
  }
  const double residual = (a - a.adjoint()).norm();
  if (residual > 1e-12 * std::max(1.0, a.norm())) {
    throw PreconditionError("not_hermitian",
                            "expectation values need a hermitian operator",
                            {{"hermiticity_residual", residual}});
  }
  return inner(a * v, v).real();
}

Ray reflect(const Ray& center, const Ray& y) {
  if (center.dim() != y.dim()) {
    throw PreconditionError("dimension_mismatch",
                            "rays live in different dimensions");
  }
  const Vector& c = center.rep();
  return Ray(Vector(-y.rep() + 2.0 * inner(y.rep(), c) * c));
}

Ray midpoint(const Ray& x, const Ray& y, double tol_orth) {
  if (x.dim() != y.dim()) {
    throw PreconditionError("dimension_mismatch",
                            "rays live in different dimensions");
  }
  const Complex c = inner(y.rep(), x.rep());
  const double overlap = std::abs(c);
  if (overlap <= tol_orth) {
    throw PreconditionError("orthogonal_midpoint",
                            "midpoint undefined for orthogonal rays",
                            {{"overlap", overlap}});
  }
  // Move to the affine chart where x is the origin: rescale y so its
  // component along x is exactly 1, then v is the chart coordinate.
  const Vector v = Vector(y.rep() / c - x.rep());
  const double s = v.squaredNorm();
  if (s < 1e-24) return x;
  // Chart midpoint w = (sqrt(1 + |v|^2) - 1) / |v|^2 * v, written in the
  // cancellation-free form v / (sqrt(1 + |v|^2) + 1).
  const Vector w = v / (std::sqrt(1.0 + s) + 1.0);
  return Ray(Vector(x.rep() + w));
}

ExpResult exp_map(const TangentVector& t) {
  const double theta = t.dir.norm();
  if (theta < 1e-300) return {t.base, false};
  const Vector unit_dir = t.dir / theta;
  Vector rep = std::cos(theta) * t.base.rep() + std::sin(theta) * unit_dir;
  return {Ray(rep), theta > M_PI_2};
}

TangentVector log_map(const Ray& x, const Ray& y, double tol_orth) {
  if (x.dim() != y.dim()) {
    throw PreconditionError("dimension_mismatch",
                            "rays live in different dimensions");
  }
  const Complex c = inner(y.rep(), x.rep());
  const double rho = std::abs(c);
  if (rho <= tol_orth) {
    throw PreconditionError("orthogonal_midpoint",
                            "log map undefined for orthogonal rays",
                            {{"overlap", rho}});
  }
  // Align phases so the overlap is real positive, split off the component
  // along x, and stretch the orthogonal rest to arc length.
  const Vector aligned = (std::min(rho, 1.0) / c) * y.rep();
  const Vector perp = aligned - rho * x.rep();
  const double perp_norm = perp.norm();
  const double theta = std::acos(std::min(rho, 1.0));
  if (perp_norm < 1e-15) {
    return {x, Vector::Zero(x.dim())};
  }
  return {x, Vector(theta / perp_norm * perp)};
}

std::vector<Ray> dyadic_chain(const Ray& x, const Ray& y, int depth,
                              double tol_orth) {
  if (depth < 0) {
    throw PreconditionError("invalid_depth", "depth must be non-negative",
                            {{"depth", static_cast<double>(depth)}});
  }
  if (depth > 24) {
    throw PreconditionError("invalid_depth",
                            "depth beyond 24 would produce over 16M rays",
                            {{"depth", static_cast<double>(depth)}});
  }
  const double overlap = std::abs(inner(x.rep(), y.rep()));
  if (overlap <= tol_orth) {
    throw PreconditionError("orthogonal_midpoint",
                            "chain undefined for orthogonal rays",
                            {{"overlap", overlap}});
  }

  std::vector<Ray> chain{x, y};
  for (int level = 0; level < depth; ++level) {
    std::vector<Ray> refined;
    refined.reserve(2 * chain.size() - 1);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      refined.push_back(chain[i]);
      refined.push_back(midpoint(chain[i], chain[i + 1], tol_orth));
    }
    refined.push_back(chain.back());
    chain = std::move(refined);
  }
  return chain;
}

Matrix phase_normalized_section(const Matrix& g, const Vector& v0) {
  if (g.rows() != g.cols() || g.cols() != v0.size()) {
    throw PreconditionError("dimension_mismatch",
                            "operator and base vector dimensions differ");
  }
  const double v0_sq = v0.squaredNorm();
  if (v0_sq <= 1e-24) {
    throw PreconditionError("zero_vector", "base vector must be nonzero",
                            {{"norm", std::sqrt(v0_sq)}});
  }
  if (!is_unitary(g)) {
    const Matrix gram = g.adjoint() * g;
    throw PreconditionError(
        "not_unitary", "section is only defined for unitaries",
        {{"unitarity_residual",
          (gram - Matrix::Identity(g.rows(), g.cols())).norm()}});
  }
  const Complex c = inner(g * v0, v0);
  if (std::abs(c) <= 1e-12 * v0_sq) {
    throw PreconditionError(
        "outside_section_domain",
        "operator moves the base vector into its orthogonal hyperplane",
        {{"overlap", std::abs(c)}});
  }
  return (std::abs(c) / c) * g;
}

}  // namespace projray
