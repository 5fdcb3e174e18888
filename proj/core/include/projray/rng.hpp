#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace projray {

// Deterministic random source.  splitmix64 underneath, Box-Muller on top, so
// the stream is identical across platforms and standard library versions
// (std::normal_distribution is not reproducible between implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();

  // Uniform integer in [0, bound).  bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal.
  double normal();

  // Complex standard normal, E|z|^2 = 1.
  std::complex<double> normal_complex();

  Eigen::VectorXcd gaussian_vector(Eigen::Index n);
  Eigen::VectorXcd unit_vector(Eigen::Index n);
  Eigen::MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols);
  Eigen::MatrixXcd hermitian_matrix(Eigen::Index n);

  // Haar-distributed unitary (QR of a Gaussian matrix with the phase of the
  // R diagonal absorbed into Q).
  Eigen::MatrixXcd unitary(Eigen::Index n);

  // Independent child stream; distinct `stream` values give distinct states
  // regardless of how much the parent has been consumed.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t state_;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace projray
