#include "projray/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace projray {

namespace {

void require_same_size(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) {
    throw PreconditionError(
        "dimension_mismatch", "vectors have different dimensions",
        {{"lhs_dim", static_cast<double>(x.size())},
         {"rhs_dim", static_cast<double>(y.size())}});
  }
}

void require_square(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw PreconditionError(
        "dimension_mismatch", "matrix must be square and non-empty",
        {{"rows", static_cast<double>(a.rows())},
         {"cols", static_cast<double>(a.cols())}});
  }
}

// Rotate the first entry of modulus above 1e-12 to the positive real axis.
void canonicalize_phase(Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-12) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(mag, 0.0);  // keep the pivot exactly real
      return;
    }
  }
}

}  // namespace

Complex inner(const Vector& x, const Vector& y) {
  require_same_size(x, y);
  return y.dot(x);  // Eigen conjugates y here, so this is first-linear
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw PreconditionError("dimension_mismatch",
                            "matrices have different shapes");
  }
  return (b.adjoint() * a).trace();
}

Matrix rank_one(const Vector& v, const Vector& w) {
  require_same_size(v, w);
  return v * w.adjoint();
}

Matrix projector(const Vector& v) { return rank_one(v, v); }

Matrix projector(const Ray& x) { return rank_one(x.rep(), x.rep()); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double trace_norm(const Matrix& a) {
  require_square(a);
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

double operator_norm(const Matrix& a) {
  require_square(a);
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  const double residual = (a - a.adjoint()).norm();
  return residual <= tol * std::max(1.0, a.norm());
}

bool is_unitary(const Matrix& a, double tol) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  const Matrix gram = a.adjoint() * a;
  return (gram - Matrix::Identity(a.rows(), a.cols())).norm() <= tol;
}

Ray::Ray(const Vector& v) {
  if (v.size() == 0) {
    throw PreconditionError("dimension_mismatch",
                            "ray needs dimension at least 1");
  }
  const double nrm = v.norm();
  if (nrm <= 1e-12) {
    throw PreconditionError("zero_vector",
                            "cannot form a ray from the zero vector",
                            {{"norm", nrm}});
  }
  rep_ = v / nrm;
  canonicalize_phase(rep_);
}

bool Ray::approx_equal(const Ray& a, const Ray& b, double tol) {
  if (a.dim() != b.dim()) return false;
  return (a.rep() - b.rep()).lpNorm<Eigen::Infinity>() <= tol;
}

BallPoint::BallPoint(const Vector& v) {
  if (v.size() == 0) {
    throw PreconditionError("dimension_mismatch",
                            "ball point needs dimension at least 1");
  }
  const double nrm = v.norm();
  if (nrm > 1.0 + 1e-12) {
    throw PreconditionError("norm_too_large",
                            "ball point must have norm at most 1",
                            {{"norm", nrm}});
  }
  rep_ = v;
  if (nrm > 1.0) rep_ /= nrm;  // snap roundoff back onto the sphere
  if (nrm > 1e-12) canonicalize_phase(rep_);
}

Ray BallPoint::ray() const { return Ray(rep_); }

EigenSystem hermitian_eigen(const Matrix& a, double tol) {
  require_square(a);
  const double residual = (a - a.adjoint()).norm();
  if (residual > tol * std::max(1.0, a.norm())) {
    throw PreconditionError("not_hermitian", "matrix is not hermitian",
                            {{"hermiticity_residual", residual}});
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()));
  if (solver.info() != Eigen::Success) {
    throw PreconditionError("eigensolver_failed",
                            "eigendecomposition did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix unitary_exp(const Matrix& h, double t) {
  return HamiltonianFlow(h).at(t);
}

HamiltonianFlow::HamiltonianFlow(const Matrix& h, double tol)
    : sys_(hermitian_eigen(h, tol)) {}

Matrix HamiltonianFlow::at(double t) const {
  const Eigen::Index n = sys_.eigenvalues.size();
  Vector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases(k) = std::polar(1.0, t * sys_.eigenvalues(k));
  }
  return sys_.eigenvectors * phases.asDiagonal() * sys_.eigenvectors.adjoint();
}

std::vector<HullTerm> unitary_hull_decompose(const Matrix& c) {
  require_square(c);
  const Eigen::Index n = c.rows();
  const double nrm = operator_norm(c);
  if (nrm > 1.0 + 1e-12) {
    throw PreconditionError("norm_too_large",
                            "operator norm exceeds 1, cannot decompose",
                            {{"operator_norm", nrm}});
  }
  if (c.norm() == 0.0) return {};

  // Polar decomposition c = V P from the SVD c = U S W^*.
  Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix v_polar = svd.matrixU() * svd.matrixV().adjoint();
  Vector lifted(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = std::min(svd.singularValues()(k), 1.0);
    lifted(k) = Complex(s, std::sqrt(std::max(0.0, 1.0 - s * s)));
  }
  // P = W S W^*; lift each singular value s to the unit circle as
  // s + i sqrt(1 - s^2), so P is the average of the lift and its adjoint.
  const Matrix w_unitary =
      svd.matrixV() * lifted.asDiagonal() * svd.matrixV().adjoint();

  std::vector<HullTerm> terms;
  terms.push_back({Complex(0.5, 0.0), v_polar * w_unitary});
  terms.push_back({Complex(0.5, 0.0), v_polar * w_unitary.adjoint()});
  return terms;
}

}  // namespace projray
