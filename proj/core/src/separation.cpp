#include "projray/separation.hpp"

#include <algorithm>
#include <cmath>

#include "projray/projective.hpp"
#include "projray/rng.hpp"

namespace projray {

namespace {

constexpr double kEigenZero = 1e-8;   // relative spectral floor
constexpr double kWitnessBar = 1e-9;  // max tolerated h disagreement

RealMatrix frame_coords_matrix(const Frame& frame) {
  const Eigen::Index n = frame.dim();
  RealMatrix rows(static_cast<Eigen::Index>(frame.size()), n * n);
  for (std::size_t j = 0; j < frame.size(); ++j) {
    rows.row(static_cast<Eigen::Index>(j)) =
        hermitian_coords(projector(frame.vectors()[j])).transpose();
  }
  return rows;
}

int rank_from_singular_values(const RealVector& sv, double rel_threshold) {
  if (sv.size() == 0) return 0;
  const double cutoff = rel_threshold * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

double certificate_residual_of(const Frame& frame, const Matrix& cert) {
  double worst = 0.0;
  for (const Vector& v : frame.vectors()) {
    worst = std::max(worst, std::abs(hs_inner(cert, projector(v))));
  }
  return worst;
}

struct WitnessAttempt {
  BallPoint w1;
  BallPoint w2;
  Matrix certificate;
};

// Checks an attempted pair against the frame; accepts only if every
// h-value agrees to kWitnessBar.
bool accept_witness(const Frame& frame, const WitnessAttempt& attempt,
                    SeparationReport& report) {
  const double gap = max_h_gap(frame, attempt.w1, attempt.w2);
  if (gap > kWitnessBar) return false;
  report.status = SeparationStatus::WitnessFound;
  report.witness =
      UnresolvedPair{attempt.w1, attempt.w2, attempt.certificate, gap};
  report.certificate = attempt.certificate;
  report.certificate_residual =
      certificate_residual_of(frame, attempt.certificate);
  report.certificate_without_rank_one_witness = false;
  return true;
}

// One-sided witness for a semi-definite null element: its support is
// orthogonal to every frame vector, so any support vector has the same
// h-values as the origin.
bool try_semidefinite(const Frame& frame, const EigenSystem& eig,
                      bool positive, SeparationReport& report) {
  const Eigen::Index n = eig.eigenvalues.size();
  const Eigen::Index idx = positive ? n - 1 : 0;
  const double weight = std::abs(eig.eigenvalues(idx));
  if (weight < 1e-14) return false;
  const Vector top = eig.eigenvectors.col(idx);
  const Vector w2 = std::sqrt(std::min(weight, 1.0)) * top;
  const WitnessAttempt attempt{BallPoint(Vector::Zero(n)), BallPoint(w2),
                               projector(w2)};
  return accept_witness(frame, attempt, report);
}

// Two-sided witness splitting an indefinite element across its extreme
// eigenvectors; valid directly when the rest of the spectrum vanishes.
bool try_two_sided(const Frame& frame, const Vector& u_min, double mu_min,
                   const Vector& u_max, double mu_max,
                   SeparationReport& report) {
  const Vector w1 = std::sqrt(std::min(-mu_min, 1.0)) * u_min;
  const Vector w2 = std::sqrt(std::min(mu_max, 1.0)) * u_max;
  const WitnessAttempt attempt{BallPoint(w1), BallPoint(w2),
                               Matrix(projector(w2) - projector(w1))};
  return accept_witness(frame, attempt, report);
}

// When an indefinite null element carries extra spectrum, look for a second
// null element supported entirely on the span of the two extreme
// eigenvectors; a 2x2 indefinite solution there splits exactly.
bool try_subspace_resolve(const Frame& frame, const Vector& u_min,
                          const Vector& u_max, SeparationReport& report) {
  const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  std::vector<Matrix> basis;
  basis.push_back(projector(u_min));
  basis.push_back(projector(u_max));
  basis.push_back(inv_sqrt2 *
                  (rank_one(u_min, u_max) + rank_one(u_max, u_min)));
  basis.push_back(Complex(0.0, 1.0) * inv_sqrt2 *
                  (rank_one(u_min, u_max) - rank_one(u_max, u_min)));

  RealMatrix t(static_cast<Eigen::Index>(frame.size()), 4);
  for (std::size_t j = 0; j < frame.size(); ++j) {
    const Matrix pj = projector(frame.vectors()[j]);
    for (int a = 0; a < 4; ++a) {
      t(static_cast<Eigen::Index>(j), a) = hs_inner(basis[a], pj).real();
    }
  }
  Eigen::JacobiSVD<RealMatrix> svd(t, Eigen::ComputeFullV);
  const int rank = rank_from_singular_values(svd.singularValues(), 1e-9);

  for (int k = rank; k < 4; ++k) {
    const RealVector y = svd.matrixV().col(k);
    // 2x2 hermitian in the (u_min, u_max) frame; indefinite iff det < 0.
    const double det =
        y(0) * y(1) - 0.5 * (y(2) * y(2) + y(3) * y(3));
    if (det >= -1e-12) continue;

    Matrix small(2, 2);
    small(0, 0) = y(0);
    small(1, 1) = y(1);
    small(0, 1) = Complex(y(2), -y(3)) * inv_sqrt2;
    small(1, 0) = std::conj(small(0, 1));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(small);
    const double mu_min = solver.eigenvalues()(0);
    const double mu_max = solver.eigenvalues()(1);
    const double scale = std::max(-mu_min, mu_max);
    if (mu_min >= 0.0 || mu_max <= 0.0 || scale < 1e-14) continue;

    const Vector e_min = solver.eigenvectors()(0, 0) * u_min +
                         solver.eigenvectors()(1, 0) * u_max;
    const Vector e_max = solver.eigenvectors()(0, 1) * u_min +
                         solver.eigenvectors()(1, 1) * u_max;
    if (try_two_sided(frame, e_min, mu_min / scale, e_max, mu_max / scale,
                      report)) {
      return true;
    }
  }
  return false;
}

}  // namespace

Frame::Frame(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
  if (vectors_.empty()) {
    throw PreconditionError("empty_frame",
                            "frame needs at least one vector");
  }
  dim_ = vectors_[0].size();
  if (dim_ == 0) {
    throw PreconditionError("dimension_mismatch",
                            "frame vectors need dimension at least 1");
  }
  for (const Vector& v : vectors_) {
    if (v.size() != dim_) {
      throw PreconditionError(
          "dimension_mismatch", "frame vectors have inconsistent dimensions",
          {{"expected", static_cast<double>(dim_)},
           {"found", static_cast<double>(v.size())}});
    }
  }
}

RealVector hermitian_coords(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw PreconditionError("dimension_mismatch",
                            "coordinates need a square matrix");
  }
  const Eigen::Index n = a.rows();
  RealVector c(n * n);
  for (Eigen::Index i = 0; i < n; ++i) c(i) = a(i, i).real();
  Eigen::Index k = n;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      c(k++) = std::numbers::sqrt2 * a(i, j).real();
      c(k++) = std::numbers::sqrt2 * a(i, j).imag();
    }
  }
  return c;
}

Matrix hermitian_from_coords(const RealVector& coords, Eigen::Index n) {
  if (coords.size() != n * n) {
    throw PreconditionError(
        "dimension_mismatch", "coordinate vector has the wrong length",
        {{"expected", static_cast<double>(n * n)},
         {"found", static_cast<double>(coords.size())}});
  }
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = coords(i);
  Eigen::Index k = n;
  const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double re = coords(k++) * inv_sqrt2;
      const double im = coords(k++) * inv_sqrt2;
      a(i, j) = Complex(re, im);
      a(j, i) = Complex(re, -im);
    }
  }
  return a;
}

int projector_span_rank(const Frame& frame, double rel_threshold) {
  Eigen::JacobiSVD<RealMatrix> svd(frame_coords_matrix(frame));
  return rank_from_singular_values(svd.singularValues(), rel_threshold);
}

std::vector<Matrix> projector_span_null_basis(const Frame& frame,
                                              double rel_threshold) {
  const Eigen::Index n = frame.dim();
  Eigen::JacobiSVD<RealMatrix> svd(frame_coords_matrix(frame),
                                   Eigen::ComputeFullV);
  const int rank = rank_from_singular_values(svd.singularValues(),
                                             rel_threshold);
  std::vector<Matrix> basis;
  for (Eigen::Index k = rank; k < n * n; ++k) {
    basis.push_back(hermitian_from_coords(svd.matrixV().col(k), n));
  }
  return basis;
}

double max_h_gap(const Frame& frame, const BallPoint& w1,
                 const BallPoint& w2) {
  if (w1.dim() != frame.dim() || w2.dim() != frame.dim()) {
    throw PreconditionError("dimension_mismatch",
                            "ball points do not match the frame dimension");
  }
  double worst = 0.0;
  for (const Vector& v : frame.vectors()) {
    worst = std::max(worst, std::abs(h_value(v, w1) - h_value(v, w2)));
  }
  return worst;
}

SeparationReport find_unresolved_pair(const Frame& frame, std::uint64_t seed) {
  const Eigen::Index n = frame.dim();
  SeparationReport report;
  report.full_rank = static_cast<int>(n * n);
  report.projector_rank = projector_span_rank(frame);
  report.separates = report.projector_rank == report.full_rank;
  if (report.separates) {
    report.status = SeparationStatus::Separates;
    return report;
  }

  const std::vector<Matrix> null_basis = projector_span_null_basis(frame);
  report.certificate = null_basis.front();
  report.certificate_residual =
      certificate_residual_of(frame, null_basis.front());
  report.certificate_without_rank_one_witness = true;

  std::vector<Matrix> candidates = null_basis;
  if (null_basis.size() > 1) {
    Rng rng(seed);
    for (int trial = 0; trial < 64; ++trial) {
      Matrix mix = Matrix::Zero(n, n);
      for (const Matrix& b : null_basis) mix += rng.normal() * b;
      const double nrm = mix.norm();
      if (nrm > 1e-12) candidates.push_back(mix / nrm);
    }
  }

  bool saw_indefinite = false;
  for (const Matrix& cand : candidates) {
    const EigenSystem eig = hermitian_eigen(cand, 1e-9);
    const double lo = eig.eigenvalues(0);
    const double hi = eig.eigenvalues(n - 1);
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (scale < 1e-14) continue;

    if (lo >= -kEigenZero * scale) {
      if (try_semidefinite(frame, eig, true, report)) return report;
      continue;
    }
    if (hi <= kEigenZero * scale) {
      if (try_semidefinite(frame, eig, false, report)) return report;
      continue;
    }

    saw_indefinite = true;
    const Vector u_min = eig.eigenvectors.col(0);
    const Vector u_max = eig.eigenvectors.col(n - 1);
    double middle = 0.0;
    for (Eigen::Index k = 1; k + 1 < n; ++k) {
      middle = std::max(middle, std::abs(eig.eigenvalues(k)));
    }
    if (middle <= kEigenZero * scale) {
      if (try_two_sided(frame, u_min, lo / scale, u_max, hi / scale, report)) {
        return report;
      }
    }
    if (try_subspace_resolve(frame, u_min, u_max, report)) return report;
  }

  report.status = saw_indefinite ? SeparationStatus::CertificateOnly
                                 : SeparationStatus::NoIndefiniteElement;
  return report;
}

SeparationReport separates_ball(const Frame& frame, std::uint64_t seed) {
  return find_unresolved_pair(frame, seed);
}

Eigen::Vector3d bloch_vector(const Vector& v) {
  if (v.size() != 2) {
    throw PreconditionError("dimension_mismatch",
                            "bloch coordinates need a vector in C^2",
                            {{"dim", static_cast<double>(v.size())}});
  }
  const double nrm = v.norm();
  if (std::abs(nrm - 1.0) > 1e-10) {
    throw PreconditionError("not_unit", "bloch coordinates need a unit vector",
                            {{"norm", nrm}});
  }
  const Complex cross = std::conj(v(0)) * v(1);
  return {2.0 * cross.real(), 2.0 * cross.imag(),
          std::norm(v(0)) - std::norm(v(1))};
}

bool great_circle_test(const Vector& v1, const Vector& v2, const Vector& v3,
                       double det_tol) {
  Eigen::Matrix3d m;
  m.row(0) = bloch_vector(v1).transpose();
  m.row(1) = bloch_vector(v2).transpose();
  m.row(2) = bloch_vector(v3).transpose();
  return std::abs(m.determinant()) < det_tol;
}

}  // namespace projray
