#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "projray/linalg.hpp"
#include "projray/rng.hpp"

using namespace projray;

namespace {

bool close(const Complex& a, const Complex& b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

bool close(const Matrix& a, const Matrix& b, double tol = 1e-12) {
  return (a - b).norm() <= tol;
}

Vector vec2(Complex a, Complex b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("inner product is linear in the first argument") {
  const Vector x = vec2(1.0, Complex(0.0, 1.0));
  const Vector w = vec2(1.0, 1.0);
  CHECK(close(inner(x, w), Complex(1.0, 1.0)));

  // conjugation lands on the second argument
  const Vector e1 = vec2(1.0, 0.0);
  const Vector iw = vec2(Complex(0.0, 1.0), 0.0);
  CHECK(close(inner(e1, iw), Complex(0.0, -1.0)));
  CHECK(close(inner(iw, e1), Complex(0.0, 1.0)));

  // scaling the first argument scales the value, no conjugation
  const Complex lambda(2.0, -3.0);
  CHECK(close(inner(Vector(lambda * x), w), lambda * inner(x, w)));
  CHECK(close(inner(x, Vector(lambda * w)), std::conj(lambda) * inner(x, w)));

  CHECK_THROWS_AS(inner(x, Vector(Vector::Ones(3))), PreconditionError);
}

TEST_CASE("rank_one implements x -> inner(x, w) v") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector v = rng.gaussian_vector(4);
    const Vector w = rng.gaussian_vector(4);
    const Vector x = rng.gaussian_vector(4);
    const Vector applied = rank_one(v, w) * x;
    const Vector expected = inner(x, w) * v;
    CHECK((applied - expected).norm() <= 1e-12 * expected.norm());
  }
}

TEST_CASE("hs_inner matches the entrywise sum convention") {
  Rng rng(12);
  const Matrix a = rng.gaussian_matrix(3, 3);
  const Matrix b = rng.gaussian_matrix(3, 3);
  Complex direct = 0.0;
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      direct += a(i, j) * std::conj(b(i, j));
    }
  }
  CHECK(close(hs_inner(a, b), direct, 1e-12));
}

TEST_CASE("ray canonicalization kills phases") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector v = rng.gaussian_vector(5);
    const Ray base(v);
    const double theta = 2.0 * M_PI * rng.uniform();
    const Ray rotated(Vector(std::polar(1.0, theta) * v));
    CHECK(Ray::approx_equal(base, rotated, 1e-12));
    CHECK(base.rep().norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("ray pivot entry is real positive") {
  const Ray r(vec2(Complex(0.0, -2.0), Complex(1.0, 1.0)));
  CHECK(r.rep()(0).imag() == 0.0);
  CHECK(r.rep()(0).real() > 0.0);

  // leading numerically-zero entries are skipped when picking the pivot
  Vector v(3);
  v << Complex(1e-15, 1e-15), Complex(0.0, 0.5), 0.5;
  const Ray s(v);
  CHECK(s.rep()(1).imag() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.rep()(1).real() > 0.0);
}

TEST_CASE("ray rejects degenerate input") {
  CHECK_THROWS_AS(Ray(Vector(Vector::Zero(3))), PreconditionError);
  try {
    Ray(Vector(Vector::Zero(3)));
  } catch (const PreconditionError& e) {
    CHECK(e.code() == "zero_vector");
  }
  const Vector empty;
  CHECK_THROWS_AS(Ray{empty}, PreconditionError);
}

TEST_CASE("ball point accepts the ball, rejects outside") {
  CHECK_NOTHROW(BallPoint(vec2(0.5, 0.0)));
  CHECK_NOTHROW(BallPoint(Vector(Vector::Zero(2))));
  CHECK(BallPoint(Vector(Vector::Zero(2))).is_zero());

  // a norm within 1e-12 above 1 snaps back to the sphere
  const Vector almost = (1.0 + 5e-13) * vec2(1.0, 0.0);
  CHECK(BallPoint(almost).norm() <= 1.0);

  try {
    BallPoint(vec2(1.5, 0.0));
    CHECK(false);
  } catch (const PreconditionError& e) {
    CHECK(e.code() == "norm_too_large");
    REQUIRE(!e.context().empty());
    CHECK(e.context()[0].second == doctest::Approx(1.5));
  }
  CHECK_THROWS_AS(BallPoint(Vector(Vector::Zero(2))).ray(),
                  PreconditionError);
}

TEST_CASE("trace norm sums singular values") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  CHECK(trace_norm(d) == doctest::Approx(7.0).epsilon(1e-12));

  Matrix a(2, 2);
  a << 0.0, Complex(1.0, -1.0), Complex(1.0, 1.0), -2.0;
  // eigenvalues -1 -/+ sqrt(3), so the sum of |.| is 2 sqrt(3)
  CHECK(trace_norm(a) ==
        doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("hermitian eigendecomposition is ascending and faithful") {
  Matrix a(2, 2);
  a << 0.0, Complex(1.0, -1.0), Complex(1.0, 1.0), -2.0;
  const EigenSystem sys = hermitian_eigen(a);
  CHECK(sys.eigenvalues(0) ==
        doctest::Approx(-1.0 - std::sqrt(3.0)).epsilon(1e-12));
  CHECK(sys.eigenvalues(1) ==
        doctest::Approx(-1.0 + std::sqrt(3.0)).epsilon(1e-12));

  const Matrix rebuilt = sys.eigenvectors *
                         sys.eigenvalues.cast<Complex>().asDiagonal() *
                         sys.eigenvectors.adjoint();
  CHECK(close(rebuilt, a, 1e-12));
  CHECK(close(Matrix(sys.eigenvectors.adjoint() * sys.eigenvectors),
              Matrix(Matrix::Identity(2, 2)), 1e-12));
}

TEST_CASE("hermitian eigendecomposition rejects non-hermitian input") {
  Matrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  try {
    hermitian_eigen(a);
    CHECK(false);
  } catch (const PreconditionError& e) {
    CHECK(e.code() == "not_hermitian");
    REQUIRE(!e.context().empty());
    CHECK(e.context()[0].first == "hermiticity_residual");
    CHECK(e.context()[0].second > 0.0);
  }
}

TEST_CASE("unitary_exp produces the one-parameter group") {
  Rng rng(7);
  const Matrix h = rng.hermitian_matrix(4);
  const Matrix us = unitary_exp(h, 0.3);
  const Matrix ut = unitary_exp(h, 1.1);
  const Matrix ust = unitary_exp(h, 1.4);
  CHECK(is_unitary(us));
  CHECK(close(Matrix(us * ut), ust, 1e-10));
  CHECK(close(unitary_exp(h, 0.0), Matrix(Matrix::Identity(4, 4)), 1e-13));

  // flow caches the decomposition and agrees with the one-shot call
  const HamiltonianFlow flow(h);
  CHECK(close(flow.at(0.3), us, 1e-13));
  CHECK(flow.min_eigenvalue() ==
        doctest::Approx(hermitian_eigen(h).eigenvalues(0)));
}

TEST_CASE("unitary hull of a positive scalar matrix") {
  const Matrix c = 0.4 * Matrix::Identity(2, 2);
  const auto terms = unitary_hull_decompose(c);
  REQUIRE(terms.size() == 2);
  CHECK(close(terms[0].coefficient, Complex(0.5, 0.0)));
  CHECK(close(terms[1].coefficient, Complex(0.5, 0.0)));

  const Complex lifted(0.4, std::sqrt(0.84));
  CHECK(close(terms[0].unitary, Matrix(lifted * Matrix::Identity(2, 2)),
              1e-12));
  CHECK(close(terms[1].unitary,
              Matrix(std::conj(lifted) * Matrix::Identity(2, 2)), 1e-12));
}

TEST_CASE("unitary hull reconstructs random contractions") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.below(5));
    Matrix g = rng.gaussian_matrix(n, n);
    const double shrink = operator_norm(g) * (1.0 + rng.uniform());
    g /= shrink;

    const auto terms = unitary_hull_decompose(g);
    REQUIRE(terms.size() == 2);
    Matrix sum = Matrix::Zero(n, n);
    double coeff_mass = 0.0;
    for (const HullTerm& term : terms) {
      CHECK(is_unitary(term.unitary, 1e-10));
      sum += term.coefficient * term.unitary;
      coeff_mass += std::abs(term.coefficient);
    }
    CHECK((sum - g).norm() <= 1e-10);
    CHECK(coeff_mass <= 1.0 + 1e-12);
  }
}

TEST_CASE("unitary hull edge cases") {
  CHECK(unitary_hull_decompose(Matrix::Zero(3, 3)).empty());

  // a unitary decomposes as itself twice
  Rng rng(5);
  const Matrix u = rng.unitary(3);
  const auto terms = unitary_hull_decompose(u);
  REQUIRE(terms.size() == 2);
  CHECK(close(Matrix(terms[0].coefficient * terms[0].unitary +
                     terms[1].coefficient * terms[1].unitary),
              u, 1e-10));

  try {
    unitary_hull_decompose(2.0 * Matrix::Identity(2, 2));
    CHECK(false);
  } catch (const PreconditionError& e) {
    CHECK(e.code() == "norm_too_large");
    REQUIRE(!e.context().empty());
    CHECK(e.context()[0].second == doctest::Approx(2.0));
  }
}

TEST_CASE("hermiticity and unitarity predicates") {
  Rng rng(9);
  CHECK(is_hermitian(rng.hermitian_matrix(3)));
  CHECK(is_unitary(rng.unitary(4)));
  CHECK_FALSE(is_hermitian(rng.unitary(4) * 2.0));
  Matrix offsq(2, 3);
  offsq.setZero();
  CHECK_FALSE(is_hermitian(offsq));

  const Matrix a = rng.gaussian_matrix(3, 3);
  const Matrix b = rng.gaussian_matrix(3, 3);
  CHECK(close(commutator(a, b), Matrix(a * b - b * a)));
}

TEST_CASE("deterministic rng streams") {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng parent(7);
  Rng c1 = parent.fork(1);
  Rng c2 = parent.fork(2);
  CHECK(c1.next_u64() != c2.next_u64());

  // normals are reproducible and roughly standard
  Rng d(55);
  double sum = 0.0;
  double sumsq = 0.0;
  const int samples = 20000;
  for (int i = 0; i < samples; ++i) {
    const double x = d.normal();
    sum += x;
    sumsq += x * x;
  }
  CHECK(std::abs(sum / samples) < 0.05);
  CHECK(std::abs(sumsq / samples - 1.0) < 0.05);
}
