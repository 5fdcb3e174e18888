#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "projray/errors.hpp"

namespace projray {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Hermitian inner product, linear in the FIRST argument and conjugate-linear
// in the second: inner(x, y) = sum_i x_i * conj(y_i).  Every formula in this
// library assumes this convention; do not mix with Eigen's dot(), which
// conjugates the object it is called on.
Complex inner(const Vector& x, const Vector& y);

// Hilbert-Schmidt inner product tr(a b^*), linear in the first argument.
Complex hs_inner(const Matrix& a, const Matrix& b);

// Operator x |-> inner(x, w) * v, as a matrix (equals v w^*).
Matrix rank_one(const Vector& v, const Vector& w);

// rank_one(v, v).  Orthogonal projector only when v is a unit vector; frames
// deliberately keep non-unit vectors unnormalized, so no scaling happens here.
Matrix projector(const Vector& v);

Matrix commutator(const Matrix& a, const Matrix& b);

double trace_norm(const Matrix& a);
double operator_norm(const Matrix& a);

bool is_hermitian(const Matrix& a, double tol = 1e-12);
bool is_unitary(const Matrix& a, double tol = 1e-10);

// A point of projective space, stored as its canonical representative:
// unit norm, and the first entry of modulus above 1e-12 rotated to be real
// and positive.  Two vectors differing by a phase therefore canonicalize to
// representatives that agree entrywise to about 1e-12.
class Ray {
 public:
  explicit Ray(const Vector& v);

  const Vector& rep() const noexcept { return rep_; }
  Eigen::Index dim() const noexcept { return rep_.size(); }

  static bool approx_equal(const Ray& a, const Ray& b, double tol = 1e-12);

 private:
  Vector rep_;
};

Matrix projector(const Ray& x);

// A point of the closed unit ball modulo phase.  Unlike Ray this admits the
// zero vector and interior points; the h-value machinery in separation code
// evaluates on these.  Norms within 1e-12 above 1 are snapped back onto the
// sphere, anything larger is rejected.
class BallPoint {
 public:
  explicit BallPoint(const Vector& v);

  const Vector& rep() const noexcept { return rep_; }
  Eigen::Index dim() const noexcept { return rep_.size(); }
  double norm() const { return rep_.norm(); }
  bool is_zero(double tol = 1e-12) const { return rep_.norm() <= tol; }

  // The ray through this point; rejects points at (numerical) zero.
  Ray ray() const;

 private:
  Vector rep_;
};

struct EigenSystem {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // orthonormal columns, aligned with eigenvalues
};

// Spectral decomposition of a hermitian matrix.  Rejects matrices whose
// hermiticity residual ||a - a^*|| exceeds tol * max(1, ||a||).
EigenSystem hermitian_eigen(const Matrix& a, double tol = 1e-12);

// exp(i t h) for hermitian h.
Matrix unitary_exp(const Matrix& h, double t);

// One eigendecomposition, many exp(i t h) evaluations.
class HamiltonianFlow {
 public:
  explicit HamiltonianFlow(const Matrix& h, double tol = 1e-12);

  Matrix at(double t) const;
  const EigenSystem& system() const noexcept { return sys_; }
  double min_eigenvalue() const { return sys_.eigenvalues(0); }

 private:
  EigenSystem sys_;
};

struct HullTerm {
  Complex coefficient;
  Matrix unitary;
};

// Writes a contraction (||c|| <= 1) as a combination sum_k coeff_k U_k of
// unitaries with sum_k |coeff_k| <= 1.  Uses the polar decomposition
// c = V P and splits P = (W + W^*)/2 with W = P + i sqrt(1 - P^2), giving
// exactly two terms (V W and V W^*, coefficient 1/2 each); the zero matrix
// yields an empty list.
std::vector<HullTerm> unitary_hull_decompose(const Matrix& c);

}  // namespace projray
