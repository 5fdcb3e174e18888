#include "projray/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace projray {

namespace {

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index n) {
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

void require_square_dim(const Matrix& m, Eigen::Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw PreconditionError("dimension_mismatch", what,
                            {{"expected", static_cast<double>(n)},
                             {"rows", static_cast<double>(m.rows())},
                             {"cols", static_cast<double>(m.cols())}});
  }
}

void require_hermitian(const Matrix& h) {
  const double residual = (h - h.adjoint()).norm();
  if (residual > 1e-9 * std::max(1.0, h.norm())) {
    throw PreconditionError("not_hermitian",
                            "flow generator must be hermitian",
                            {{"hermiticity_residual", residual}});
  }
}

// Columns of `stacked` spanning the same space, orthonormalized; rank cut at
// rel * sigma_max.
std::vector<Matrix> orthonormal_matrices(const std::vector<Matrix>& elems,
                                         Eigen::Index n, double rel = 1e-10) {
  if (elems.empty()) return {};
  Matrix stacked(n * n, static_cast<Eigen::Index>(elems.size()));
  for (std::size_t k = 0; k < elems.size(); ++k) {
    stacked.col(static_cast<Eigen::Index>(k)) = vec(elems[k]);
  }
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const RealVector sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return {};
  std::vector<Matrix> basis;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > rel * sv(0)) basis.push_back(unvec(svd.matrixU().col(k), n));
  }
  return basis;
}

MatrixAlgebra kernel_algebra(const std::vector<Matrix>& ops, Eigen::Index n) {
  if (ops.empty()) return MatrixAlgebra::full(n);
  const Matrix eye = Matrix::Identity(n, n);
  Matrix stacked(static_cast<Eigen::Index>(ops.size()) * n * n, n * n);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    // [x, m] = 0 reads (I (x) m - m^T (x) I) vec(x) = 0 in column-major vec.
    stacked.middleRows(static_cast<Eigen::Index>(k) * n * n, n * n) =
        Eigen::kroneckerProduct(eye, ops[k]) -
        Eigen::kroneckerProduct(ops[k].transpose(), eye);
  }
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? 1e-9 * sv(0) : 0.0;
  std::vector<Matrix> basis;
  for (Eigen::Index k = 0; k < n * n; ++k) {
    const double sigma = k < sv.size() ? sv(k) : 0.0;
    if (sigma <= cutoff) basis.push_back(unvec(svd.matrixV().col(k), n));
  }
  return MatrixAlgebra::from_orthonormal_basis(std::move(basis), n);
}

}  // namespace

MatrixAlgebra MatrixAlgebra::from_orthonormal_basis(std::vector<Matrix> basis,
                                                    Eigen::Index n) {
  return MatrixAlgebra(std::move(basis), n);
}

MatrixAlgebra MatrixAlgebra::from_span(const std::vector<Matrix>& spanning) {
  if (spanning.empty()) {
    throw PreconditionError("empty_span",
                            "an algebra needs at least one spanning element");
  }
  const Eigen::Index n = spanning.front().rows();
  for (const Matrix& m : spanning) {
    require_square_dim(m, n, "spanning elements must be square, same size");
  }
  MatrixAlgebra result(orthonormal_matrices(spanning, n), n);

  const double idr = result.membership_residual(Matrix::Identity(n, n));
  if (idr > 1e-8) {
    throw PreconditionError("not_unital",
                            "span does not contain the identity",
                            {{"membership_residual", idr}});
  }
  for (const Matrix& b : result.basis_) {
    const double ar = result.membership_residual(b.adjoint());
    if (ar > 1e-8) {
      throw PreconditionError("not_star_closed",
                              "span is not closed under adjoints",
                              {{"membership_residual", ar}});
    }
  }
  for (const Matrix& bi : result.basis_) {
    for (const Matrix& bj : result.basis_) {
      const double pr = result.membership_residual(bi * bj);
      if (pr > 1e-8) {
        throw PreconditionError("not_product_closed",
                                "span is not closed under products",
                                {{"membership_residual", pr}});
      }
    }
  }
  return result;
}

MatrixAlgebra MatrixAlgebra::full(Eigen::Index n) {
  std::vector<Matrix> basis;
  basis.reserve(n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Matrix unit = Matrix::Zero(n, n);
      unit(i, j) = 1.0;
      basis.push_back(std::move(unit));
    }
  }
  return MatrixAlgebra(std::move(basis), n);
}

MatrixAlgebra MatrixAlgebra::scalars(Eigen::Index n) {
  std::vector<Matrix> basis;
  basis.push_back(Matrix::Identity(n, n) / std::sqrt(static_cast<double>(n)));
  return MatrixAlgebra(std::move(basis), n);
}

Matrix MatrixAlgebra::project(const Matrix& x) const {
  require_square_dim(x, n_, "projection argument has the wrong shape");
  Matrix out = Matrix::Zero(n_, n_);
  for (const Matrix& b : basis_) out += hs_inner(x, b) * b;
  return out;
}

double MatrixAlgebra::membership_residual(const Matrix& x) const {
  return (x - project(x)).norm() / std::max(1.0, x.norm());
}

bool MatrixAlgebra::contains(const Matrix& x, double tol) const {
  return membership_residual(x) <= tol;
}

MatrixAlgebra generate_star_algebra(const std::vector<Matrix>& generators,
                                    Eigen::Index n) {
  if (n < 1) {
    throw PreconditionError("dimension_mismatch",
                            "ambient dimension must be at least 1");
  }
  std::vector<Matrix> pool;
  pool.push_back(Matrix::Identity(n, n));
  for (const Matrix& g : generators) {
    require_square_dim(g, n, "generators must be square, same size");
    pool.push_back(g);
    pool.push_back(g.adjoint());
  }

  std::vector<Matrix> basis = orthonormal_matrices(pool, n);
  while (static_cast<Eigen::Index>(basis.size()) < n * n) {
    MatrixAlgebra current =
        MatrixAlgebra::from_orthonormal_basis(basis, n);
    std::vector<Matrix> fresh;
    for (const Matrix& bi : basis) {
      for (const Matrix& bj : basis) {
        Matrix p = bi * bj;
        if (current.membership_residual(p) > 1e-10) {
          fresh.push_back(std::move(p));
        }
      }
    }
    if (fresh.empty()) break;
    std::vector<Matrix> enlarged = basis;
    enlarged.insert(enlarged.end(), fresh.begin(), fresh.end());
    basis = orthonormal_matrices(enlarged, n);
  }
  return MatrixAlgebra::from_orthonormal_basis(std::move(basis), n);
}

MatrixAlgebra commutant(const MatrixAlgebra& algebra) {
  return kernel_algebra(algebra.basis(), algebra.ambient_dim());
}

MatrixAlgebra commutant_of_set(const std::vector<Matrix>& ops,
                               Eigen::Index n) {
  std::vector<Matrix> closed;
  closed.reserve(2 * ops.size());
  for (const Matrix& m : ops) {
    require_square_dim(m, n, "operators must be square, same size");
    closed.push_back(m);
    closed.push_back(m.adjoint());
  }
  return kernel_algebra(closed, n);
}

MatrixAlgebra double_commutant(const MatrixAlgebra& algebra) {
  return commutant(commutant(algebra));
}

bool is_irreducible(const std::vector<Matrix>& generators, Eigen::Index n) {
  return commutant_of_set(generators, n).dim() == 1;
}

Matrix conditional_expectation(const Matrix& x, const MatrixAlgebra& algebra) {
  return algebra.project(x);
}

SplitResult borchers_arveson_split(const Matrix& h,
                                   const MatrixAlgebra& algebra) {
  const Eigen::Index n = algebra.ambient_dim();
  require_square_dim(h, n, "flow generator has the wrong shape");
  require_hermitian(h);

  for (const Matrix& b : algebra.basis()) {
    const Matrix c = commutator(h, b);
    const double residual = algebra.membership_residual(c);
    if (residual > 1e-8) {
      throw PreconditionError("not_invariant",
                              "algebra is not invariant under the flow",
                              {{"invariance_residual", residual}});
    }
  }

  const Matrix expectation = algebra.project(h);
  const Matrix a0 = 0.5 * (expectation + expectation.adjoint());
  const EigenSystem eig = hermitian_eigen(a0, 1e-8);
  const double mu0 = eig.eigenvalues(0);
  SplitResult out;
  out.inner_part = a0 - mu0 * Matrix::Identity(n, n);
  out.commutant_part = h - out.inner_part;
  out.mu0 = mu0;
  return out;
}

EnergyShift minimal_energy_shift(const Matrix& h) {
  const EigenSystem eig = hermitian_eigen(h, 1e-9);
  EnergyShift shift;
  shift.mu0 = -eig.eigenvalues(0);
  shift.shifted =
      h + shift.mu0 * Matrix::Identity(h.rows(), h.cols());
  return shift;
}

CovarianceReport verify_covariant_pair(const CovariantPair& pair,
                                       const std::vector<double>& times) {
  if (pair.generators.empty()) {
    throw PreconditionError("empty_family", "need at least one generator");
  }
  const Eigen::Index n = pair.hamiltonian.rows();
  require_square_dim(pair.hamiltonian, n, "flow generator must be square");
  require_hermitian(pair.hamiltonian);
  for (const Matrix& g : pair.generators) {
    require_square_dim(g, n, "generators must match the flow dimension");
  }

  const MatrixAlgebra algebra = generate_star_algebra(pair.generators, n);
  const HamiltonianFlow flow(pair.hamiltonian, 1e-9);

  std::vector<AlphaSample> samples = pair.alpha_table;
  if (samples.empty()) {
    for (double t : times) samples.push_back({t, {}});
  }

  CovarianceReport report;
  for (const AlphaSample& sample : samples) {
    if (!sample.images.empty() &&
        sample.images.size() != pair.generators.size()) {
      throw PreconditionError(
          "dimension_mismatch",
          "flow sample does not list one image per generator",
          {{"expected", static_cast<double>(pair.generators.size())},
           {"found", static_cast<double>(sample.images.size())}});
    }
    const Matrix u = flow.at(sample.t);
    for (std::size_t g = 0; g < pair.generators.size(); ++g) {
      const Matrix conj = u * pair.generators[g] * u.adjoint();
      if (!sample.images.empty()) {
        require_square_dim(sample.images[g], n,
                           "flow image has the wrong shape");
        const double drift = (conj - sample.images[g]).norm() /
                             std::max(1.0, conj.norm());
        report.max_conjugation_residual =
            std::max(report.max_conjugation_residual, drift);
      }
      report.max_membership_residual =
          std::max(report.max_membership_residual,
                   algebra.membership_residual(conj));
    }
  }
  report.min_energy = flow.min_eigenvalue();
  report.positive_energy = report.min_energy >= -1e-10;
  report.covariant = report.max_membership_residual <= 1e-8 &&
                     report.max_conjugation_residual <= 1e-8;
  return report;
}

DescentReport irreducibility_descent_check(const CovariantPair& pair) {
  const Eigen::Index n = pair.hamiltonian.rows();
  require_square_dim(pair.hamiltonian, n, "flow generator must be square");
  require_hermitian(pair.hamiltonian);
  const double min_energy = hermitian_eigen(pair.hamiltonian, 1e-9)
                                .eigenvalues(0);
  if (min_energy < -1e-10) {
    throw PreconditionError("not_positive_energy",
                            "flow generator has negative spectrum",
                            {{"min_eigenvalue", min_energy}});
  }

  std::vector<Matrix> joint = pair.generators;
  joint.push_back(pair.hamiltonian);

  DescentReport report;
  report.joint_commutant_dim = commutant_of_set(joint, n).dim();
  report.algebra_commutant_dim =
      commutant_of_set(pair.generators, n).dim();
  report.joint_irreducible = report.joint_commutant_dim == 1;
  report.restricted_irreducible = report.algebra_commutant_dim == 1;
  report.implication_holds =
      !report.joint_irreducible || report.restricted_irreducible;
  return report;
}

RigidityReport spectral_rigidity_check(const Matrix& x, const Matrix& y,
                                       double tol) {
  const Eigen::Index n = x.rows();
  require_square_dim(x, n, "first argument must be square");
  require_square_dim(y, n, "arguments must have matching shapes");
  const double skew_residual = (x + x.adjoint()).norm();
  if (skew_residual > tol * std::max(1.0, x.norm())) {
    throw PreconditionError("not_skew_hermitian",
                            "rigidity needs a skew-hermitian flow direction",
                            {{"skew_residual", skew_residual}});
  }

  const Matrix c = commutator(x, y);
  const Matrix dc = commutator(x, c);
  RigidityReport report;
  report.hypothesis_residual = dc.norm();
  report.commutator_norm = c.norm();
  report.certified_bound =
      std::sqrt(report.hypothesis_residual * y.norm());
  report.trace_certificate = std::abs(hs_inner(dc, y));
  report.commutes =
      report.commutator_norm <= 1e-8 * std::max(1.0, x.norm() * y.norm());
  return report;
}

CovariantInstance random_covariant_instance(
    Rng& rng, const std::vector<BlockSpec>& blocks) {
  if (blocks.empty()) {
    throw PreconditionError("empty_family", "need at least one block");
  }
  Eigen::Index n = 0;
  for (const BlockSpec& b : blocks) {
    if (b.dim < 1 || b.multiplicity < 1) {
      throw PreconditionError("invalid_block",
                              "block sizes and multiplicities are positive",
                              {{"dim", static_cast<double>(b.dim)},
                               {"multiplicity",
                                static_cast<double>(b.multiplicity)}});
    }
    n += static_cast<Eigen::Index>(b.dim) * b.multiplicity;
  }
  if (n > 64) {
    throw PreconditionError("dimension_too_large",
                            "instances beyond dimension 64 are not supported",
                            {{"dim", static_cast<double>(n)}});
  }

  // Block k occupies a d*m strip; within it the position of matrix row i,
  // copy r is offset + i*m + r.  The algebra acts as d x d matrix units
  // spread over copies, its commutant as m x m units inside each cell.
  std::vector<Matrix> algebra_units;
  std::vector<Matrix> commutant_units;
  Eigen::Index offset = 0;
  for (const BlockSpec& b : blocks) {
    const int d = b.dim;
    const int m = b.multiplicity;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        Matrix unit = Matrix::Zero(n, n);
        for (int r = 0; r < m; ++r) {
          unit(offset + i * m + r, offset + j * m + r) =
              1.0 / std::sqrt(static_cast<double>(m));
        }
        algebra_units.push_back(std::move(unit));
      }
    }
    for (int r = 0; r < m; ++r) {
      for (int s = 0; s < m; ++s) {
        Matrix unit = Matrix::Zero(n, n);
        for (int i = 0; i < d; ++i) {
          unit(offset + i * m + r, offset + i * m + s) =
              1.0 / std::sqrt(static_cast<double>(d));
        }
        commutant_units.push_back(std::move(unit));
      }
    }
    offset += static_cast<Eigen::Index>(d) * m;
  }

  const Matrix frame = rng.unitary(n);
  for (Matrix& u : algebra_units) u = frame * u * frame.adjoint();
  for (Matrix& u : commutant_units) u = frame * u * frame.adjoint();

  CovariantInstance inst(
      MatrixAlgebra::from_orthonormal_basis(algebra_units, n));
  inst.blocks = blocks;
  inst.frame = frame;

  auto random_positive = [&rng, n](const std::vector<Matrix>& units) {
    Matrix z = Matrix::Zero(n, n);
    for (const Matrix& u : units) z += rng.normal_complex() * u;
    const Matrix herm = 0.5 * (z + z.adjoint());
    const double bottom = hermitian_eigen(herm, 1e-9).eigenvalues(0);
    return Matrix(herm - bottom * Matrix::Identity(n, n));
  };
  inst.inner_part = random_positive(algebra_units);
  inst.commutant_part = random_positive(commutant_units);
  inst.hamiltonian = inst.inner_part + inst.commutant_part;
  inst.generators = algebra_units;
  for (const BlockSpec& b : blocks) {
    inst.expected_algebra_dim += b.dim * b.dim;
    inst.expected_commutant_dim += b.multiplicity * b.multiplicity;
    inst.expected_center_dim += 1;
  }
  return inst;
}

std::pair<Matrix, Matrix> random_commuting_pair(Rng& rng, Eigen::Index n) {
  if (n < 1) {
    throw PreconditionError("dimension_mismatch",
                            "need dimension at least 1");
  }
  const Matrix u = rng.unitary(n);
  Vector spectrum_x(n);
  Vector spectrum_y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    spectrum_x(k) = Complex(0.0, rng.normal());  // purely imaginary: skew
    spectrum_y(k) = rng.normal_complex();
  }
  Matrix x = u * spectrum_x.asDiagonal() * u.adjoint();
  Matrix y = u * spectrum_y.asDiagonal() * u.adjoint();
  // Symmetrize the skew part so the residual is at rounding level.
  x = 0.5 * (x - x.adjoint());
  return {std::move(x), std::move(y)};
}

}  // namespace projray
