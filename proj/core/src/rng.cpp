#include "projray/rng.hpp"

#include <cmath>
#include <numbers>

namespace projray {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  // 53 high bits -> dyadic rational in [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Debiased modulo: retry the (rare) tail that would skew small residues.
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t v = next_u64();
  while (v >= limit) v = next_u64();
  return v % bound;
}

double Rng::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(angle);
  have_cached_normal_ = true;
  return r * std::cos(angle);
}

std::complex<double> Rng::normal_complex() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Eigen::VectorXcd Rng::gaussian_vector(Eigen::Index n) {
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal_complex();
  return v;
}

Eigen::VectorXcd Rng::unit_vector(Eigen::Index n) {
  Eigen::VectorXcd v = gaussian_vector(n);
  double norm = v.norm();
  while (norm < 1e-12) {
    v = gaussian_vector(n);
    norm = v.norm();
  }
  return v / norm;
}

Eigen::MatrixXcd Rng::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal_complex();
  return m;
}

Eigen::MatrixXcd Rng::hermitian_matrix(Eigen::Index n) {
  const Eigen::MatrixXcd g = gaussian_matrix(n, n);
  return 0.5 * (g + g.adjoint());
}

Eigen::MatrixXcd Rng::unitary(Eigen::Index n) {
  const Eigen::MatrixXcd g = gaussian_matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    const double a = std::abs(d);
    if (a > 1e-300) q.col(j) *= d / a;
  }
  return q;
}

Rng Rng::fork(std::uint64_t stream) const {
  std::uint64_t s = state_ ^ (0xa5a5a5a55a5a5a5aULL + stream);
  // Scramble so consecutive stream ids land far apart.
  splitmix64(s);
  return Rng(splitmix64(s));
}

}  // namespace projray
