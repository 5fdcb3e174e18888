#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

#include "projray/linalg.hpp"

namespace projray {

using Rational = boost::multiprecision::cpp_rational;

// Exact element a + b sqrt(2) of the quadratic extension of the rationals.
// The group these form under addition carries the characters this module
// probes: b is uniquely determined by the value, so picking off the sqrt(2)
// coefficient is additive yet wildly discontinuous in the real topology.
struct QuadElement {
  Rational a;  // rational part
  Rational b;  // coefficient of sqrt(2)

  bool is_zero() const { return a == 0 && b == 0; }

  // Nearest double, computed through 50-digit floats so that the huge
  // cancellations in convergent-based terms survive.
  double value() const;

  friend QuadElement operator+(const QuadElement& x, const QuadElement& y) {
    return {x.a + y.a, x.b + y.b};
  }
  friend QuadElement operator-(const QuadElement& x, const QuadElement& y) {
    return {x.a - y.a, x.b - y.b};
  }
  friend QuadElement operator*(const QuadElement& x, const QuadElement& y) {
    return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend bool operator==(const QuadElement& x, const QuadElement& y) {
    return x.a == y.a && x.b == y.b;
  }
};

inline QuadElement quad_from_rational(const Rational& r) { return {r, 0}; }

// e^(2 pi i turns) with the reduction mod 1 done in exact arithmetic;
// quarter turns come out exactly on the axes.
Complex unit_phase(const Rational& turns);

// e^(2 pi i (a + b sqrt 2)), both summands reduced mod 1 before any
// floating-point evaluation.
Complex quad_phase(const QuadElement& turns);

// Continued-fraction convergents p/q of sqrt(2), starting 1/1, 3/2, 7/5, ...
// Consecutive convergents tighten |sqrt(2) - p/q| below 1/q^2.
std::vector<Rational> sqrt2_convergents(int count);

struct NullSequence {
  std::string label;
  std::vector<QuadElement> terms;
};

// Terms scale * (sqrt(2) - p_m/q_m): they collapse to zero at rate 1/q_m^2
// while every term keeps the constant sqrt(2)-coefficient `scale`, which is
// exactly what a character in the sqrt(2) coordinate never stops seeing.
NullSequence adversarial_null_sequence(int length,
                                       const Rational& scale = Rational(1, 2));

// Terms 1/m!: rational, so the sqrt(2) coordinate is identically zero and
// the sequence is invisible to the characters above.
NullSequence tame_null_sequence(int length);

enum class BlockMode {
  Continuous,  // one-parameter phase e^(2 pi i rate t)
  Twisted,     // character e^(2 pi i rate b(t)) in the sqrt(2) coordinate
};

struct Block {
  int dim = 1;
  BlockMode mode = BlockMode::Continuous;
  Rational rate;
};

// A diagonal unitary one-parameter family on parameters from the quadratic
// extension: each block multiplies its coordinates by its mode's phase.
// Twisted blocks make the family a homomorphism that is discontinuous at 0.
class BlockRepresentation {
 public:
  explicit BlockRepresentation(std::vector<Block> blocks);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  Eigen::Index total_dim() const noexcept { return dim_; }

  QuadElement phase_turns(int block_index, const QuadElement& t) const;
  Complex phase(int block_index, const QuadElement& t) const;

  Vector apply(const QuadElement& t, const Vector& v) const;
  Matrix matrix(const QuadElement& t) const;

  // The discontinuous part of the block's phase: the twisted rate, or 0 for
  // continuous blocks (and for twisted blocks with rate 0, which are secretly
  // continuous).
  Rational character_key(int block_index) const;

  // First coordinate index of each block.
  const std::vector<Eigen::Index>& offsets() const noexcept {
    return offsets_;
  }

 private:
  std::vector<Block> blocks_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index dim_ = 0;
};

enum class ProbeVerdict { ContinuousAtZero, DiscontinuityWitness };

struct ProbeResult {
  std::string sequence_label;
  std::vector<double> gaps;  // riemannian distance orbit vs base, per term
  double sup_tail_gap = 0.0;  // sup over the trailing half of the sequence
  ProbeVerdict verdict = ProbeVerdict::ContinuousAtZero;
};

// Evaluates the orbit map t |-> [pi(t) state] along each null sequence and
// flags a witness when the trailing gaps stay above tol.
std::vector<ProbeResult> orbit_continuity_probe(
    const BlockRepresentation& rep, const Ray& state,
    const std::vector<NullSequence>& sequences, double tol = 1e-3);

// Rays along which the orbit map is continuous at 0 decompose by character:
// one component per distinct twisted rate, spanned by the coordinates of the
// blocks sharing it.
struct ContinuousComponent {
  Rational character;
  std::vector<int> blocks;
  std::vector<int> coordinates;
};

std::vector<ContinuousComponent> continuous_ray_components(
    const BlockRepresentation& rep);

// Index of the component carrying all of the ray's mass (within leak_tol),
// or nothing for rays straddling different characters.
std::optional<int> component_of_ray(const BlockRepresentation& rep,
                                    const Ray& state, double leak_tol = 1e-9);

// Scale that turns a character difference into a half-turn phase, the
// loudest possible witness: scale * gap = 1/2.
Rational tuned_adversarial_scale(const Rational& character_gap);

struct CrossValidationReport {
  int components_checked = 0;
  int pairs_checked = 0;
  double max_pure_gap = 0.0;     // worst in-component probe gap (small = good)
  double min_witness_gap = 0.0;  // weakest straddling witness (big = good)
  bool agrees = false;
};

// Structural components versus probe behavior: rays inside one component
// must probe continuous, rays straddling two components must be caught by
// the tuned adversarial sequence.
CrossValidationReport cross_validate_components(const BlockRepresentation& rep,
                                                int sequence_length = 24,
                                                double tol = 1e-3);

}  // namespace projray
