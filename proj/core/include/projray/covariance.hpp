#pragma once

#include <cstdint>
#include <vector>

#include "projray/linalg.hpp"
#include "projray/rng.hpp"

namespace projray {

// Finite dimensional operator-algebra toolkit: unital *-subalgebras of the
// n x n complex matrices, their commutants, the orthogonal conditional
// expectation, and the splitting of a flow generator into an inner part and
// a part commuting with the algebra.

class MatrixAlgebra {
 public:
  // Orthonormalizes the span and validates the *-algebra axioms: contains
  // the identity, closed under adjoints, closed under products.
  static MatrixAlgebra from_span(const std::vector<Matrix>& spanning);

  static MatrixAlgebra full(Eigen::Index n);
  static MatrixAlgebra scalars(Eigen::Index n);

  Eigen::Index ambient_dim() const noexcept { return n_; }
  int dim() const noexcept { return static_cast<int>(basis_.size()); }

  // Hilbert-Schmidt orthonormal basis.
  const std::vector<Matrix>& basis() const noexcept { return basis_; }

  // Orthogonal projection onto the span.
  Matrix project(const Matrix& x) const;

  // Residual distance ||x - project(x)|| relative to max(1, ||x||).
  double membership_residual(const Matrix& x) const;
  bool contains(const Matrix& x, double tol = 1e-8) const;

  // Trusted constructor used by the generation and commutant routines,
  // which produce orthonormal *-closed bases on their own.
  static MatrixAlgebra from_orthonormal_basis(std::vector<Matrix> basis,
                                              Eigen::Index n);

 private:
  MatrixAlgebra(std::vector<Matrix> basis, Eigen::Index n)
      : basis_(std::move(basis)), n_(n) {}

  std::vector<Matrix> basis_;
  Eigen::Index n_;
};

// Smallest unital *-algebra containing the generators: adjoin the identity
// and all adjoints, then close under products until the dimension stops
// growing.
MatrixAlgebra generate_star_algebra(const std::vector<Matrix>& generators,
                                    Eigen::Index n);

// { x : [x, b] = 0 for every basis element b }.
MatrixAlgebra commutant(const MatrixAlgebra& algebra);

// Commutant of an arbitrary set: adjoins adjoints first, so the result is a
// *-algebra even when the set is not *-closed.
MatrixAlgebra commutant_of_set(const std::vector<Matrix>& ops,
                               Eigen::Index n);

MatrixAlgebra double_commutant(const MatrixAlgebra& algebra);

// Commutant of the generated algebra is the scalars.
bool is_irreducible(const std::vector<Matrix>& generators, Eigen::Index n);

// Orthogonal projection onto the algebra; for a unital *-algebra this is the
// trace-preserving conditional expectation and an algebra-bimodule map.
Matrix conditional_expectation(const Matrix& x, const MatrixAlgebra& algebra);

struct SplitResult {
  Matrix inner_part;      // hermitian, in the algebra, min eigenvalue 0
  Matrix commutant_part;  // hermitian, commutes with the algebra
  double mu0;             // gauge shift that zeroed the inner part's bottom
};

// Splits a hermitian flow generator h as  h = inner_part + commutant_part
// with inner_part in the algebra (gauged to min eigenvalue 0) and
// commutant_part in the commutant.  Requires the flow of h to leave the
// algebra invariant: [h, b] must lie in the algebra for every basis element.
SplitResult borchers_arveson_split(const Matrix& h,
                                   const MatrixAlgebra& algebra);

struct EnergyShift {
  double mu0;      // - (min eigenvalue of h)
  Matrix shifted;  // h + mu0 * identity, positive with 0 in the spectrum
};

EnergyShift minimal_energy_shift(const Matrix& h);

struct AlphaSample {
  double t;
  std::vector<Matrix> images;  // claimed conjugates of the generators
};

struct CovariantPair {
  std::vector<Matrix> generators;
  Matrix hamiltonian;
  // Optional externally supplied flow samples; when empty the verifier
  // computes the conjugation itself at default times.
  std::vector<AlphaSample> alpha_table;
};

struct CovarianceReport {
  double max_conjugation_residual = 0.0;  // claimed vs computed images
  double max_membership_residual = 0.0;   // images vs generated algebra
  bool covariant = false;
  double min_energy = 0.0;
  bool positive_energy = false;
};

CovarianceReport verify_covariant_pair(const CovariantPair& pair,
                                       const std::vector<double>& times = {
                                           0.1, 0.3, 0.7, 1.1, 2.3});

struct DescentReport {
  int joint_commutant_dim = 0;       // commutant of generators and h together
  int algebra_commutant_dim = 0;     // commutant of the generators alone
  bool joint_irreducible = false;
  bool restricted_irreducible = false;
  // joint irreducibility must push down to the generators alone whenever the
  // generator of the flow is positive; this records that implication.
  bool implication_holds = false;
};

// Requires positive energy (min eigenvalue >= -1e-10).
DescentReport irreducibility_descent_check(const CovariantPair& pair);

struct RigidityReport {
  double hypothesis_residual = 0.0;  // || [x, [x, y]] ||
  double commutator_norm = 0.0;      // || [x, y] ||
  double certified_bound = 0.0;      // sqrt(hypothesis_residual * ||y||)
  double trace_certificate = 0.0;    // | tr([x, y]^2) |
  bool commutes = false;             // commutator_norm within tolerance
};

// For skew-hermitian x the double commutator controls the single one:
// ||[x, y]||^2 <= ||[x, [x, y]]|| * ||y||.  In particular [x,[x,y]] = 0
// forces [x, y] = 0, so first-order flow expansions that are exact stay
// exact forever.
RigidityReport spectral_rigidity_check(const Matrix& x, const Matrix& y,
                                       double tol = 1e-9);

// Deterministic test instances: a block algebra (direct sum of full matrix
// algebras with multiplicities) conjugated by a random unitary, plus a flow
// generator built as a positive element of the algebra plus a positive
// element of the commutant.
struct BlockSpec {
  int dim;           // matrix block size d
  int multiplicity;  // how many copies act
};

struct CovariantInstance {
  explicit CovariantInstance(MatrixAlgebra a) : algebra(std::move(a)) {}

  std::vector<BlockSpec> blocks;
  Matrix frame;  // conjugating unitary
  MatrixAlgebra algebra;
  std::vector<Matrix> generators;  // full basis of the algebra
  Matrix hamiltonian;
  Matrix inner_part;      // the algebra summand used to build hamiltonian
  Matrix commutant_part;  // the commutant summand
  int expected_algebra_dim = 0;    // sum of d_k^2
  int expected_commutant_dim = 0;  // sum of m_k^2
  int expected_center_dim = 0;     // number of blocks
};

CovariantInstance random_covariant_instance(Rng& rng,
                                            const std::vector<BlockSpec>& blocks);

// Skew-hermitian x plus a y that commutes with it exactly (both functions of
// one unitary diagonalization); the raw material for rigidity tests.
std::pair<Matrix, Matrix> random_commuting_pair(Rng& rng, Eigen::Index n);

}  // namespace projray
