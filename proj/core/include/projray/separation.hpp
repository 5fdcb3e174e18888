#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "projray/linalg.hpp"

namespace projray {

// A finite family of (not necessarily unit, not necessarily distinct)
// vectors in one fixed dimension.  The frame question: do the magnitudes
// x |-> |<v_j, x>| of the frame members jointly separate points of the unit
// ball modulo phase?
class Frame {
 public:
  explicit Frame(std::vector<Vector> vectors);

  const std::vector<Vector>& vectors() const noexcept { return vectors_; }
  Eigen::Index dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }

 private:
  std::vector<Vector> vectors_;
  Eigen::Index dim_;
};

// Real coordinates of a hermitian matrix in an orthonormal basis of the
// n^2-dimensional real space of hermitian matrices: diagonal entries, then
// sqrt(2) Re / sqrt(2) Im of each strictly-upper entry.  Orthonormality makes
// tr(a b) the plain euclidean dot product of coordinate vectors.
RealVector hermitian_coords(const Matrix& a);
Matrix hermitian_from_coords(const RealVector& coords, Eigen::Index n);

// Rank of span{ rank_one(v_j, v_j) } inside the hermitian matrices,
// using singular values above rel_threshold * sigma_max.
int projector_span_rank(const Frame& frame, double rel_threshold = 1e-9);

// Hermitian basis (unit Frobenius norm) of the orthogonal complement of the
// projector span: exactly the directions a that every frame member misses,
// tr(a rank_one(v_j, v_j)) = 0.
std::vector<Matrix> projector_span_null_basis(const Frame& frame,
                                              double rel_threshold = 1e-9);

enum class SeparationStatus {
  Separates,            // projector span is everything; no unresolved pair
  WitnessFound,         // explicit ball points with equal h-values delivered
  CertificateOnly,      // rank deficit certified, no rank-one witness passed
  NoIndefiniteElement,  // every null element examined was semi-definite and
                        // unusable; kept for interface completeness
};

struct UnresolvedPair {
  BallPoint w1;
  BallPoint w2;
  Matrix certificate;  // rank_one(w2) - rank_one(w1), lies in the null space
  double max_h_gap;    // sup over frame members of | h(w1) - h(w2) |
};

struct SeparationReport {
  int projector_rank = 0;
  int full_rank = 0;  // dim^2
  bool separates = false;
  SeparationStatus status = SeparationStatus::Separates;
  std::optional<UnresolvedPair> witness;
  // Nonzero hermitian a with tr(a rank_one(v_j, v_j)) = 0 for all j; present
  // whenever the rank is deficient.
  std::optional<Matrix> certificate;
  double certificate_residual = 0.0;  // max_j |tr(certificate P_j)|
  bool certificate_without_rank_one_witness = false;
};

// Full analysis: rank, then (on deficiency) a search for two ball points the
// frame cannot tell apart.  Deterministic for a fixed seed.
SeparationReport separates_ball(const Frame& frame, std::uint64_t seed = 0);

// The witness search alone.
SeparationReport find_unresolved_pair(const Frame& frame,
                                      std::uint64_t seed = 0);

// Largest h-value disagreement |h_v(w1) - h_v(w2)| over the frame.
double max_h_gap(const Frame& frame, const BallPoint& w1, const BallPoint& w2);

// (2 Re conj(v1) v2, 2 Im conj(v1) v2, |v1|^2 - |v2|^2) for a unit vector in
// C^2; lands on the unit 2-sphere and depends only on the ray.
Eigen::Vector3d bloch_vector(const Vector& v);

// True when the three Bloch images lie on one great circle, i.e. the 3x3
// determinant of their coordinates vanishes below det_tol.
bool great_circle_test(const Vector& v1, const Vector& v2, const Vector& v3,
                       double det_tol = 1e-9);

}  // namespace projray
