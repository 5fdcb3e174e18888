#include "projray/continuity.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "projray/projective.hpp"

namespace projray {

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_50;
using BigInt = boost::multiprecision::cpp_int;

Rational reduce_mod_one(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt fl = num / den;
  if (num < 0 && fl * den != num) fl -= 1;
  return r - Rational(fl);
}

double fractional_big(const BigFloat& x) {
  const BigFloat fl = boost::multiprecision::floor(x);
  return static_cast<double>(x - fl);
}

}  // namespace

double QuadElement::value() const {
  const BigFloat root2 = boost::multiprecision::sqrt(BigFloat(2));
  return static_cast<double>(BigFloat(a) + BigFloat(b) * root2);
}

Complex unit_phase(const Rational& turns) {
  const Rational frac = reduce_mod_one(turns);
  if (frac == 0) return {1.0, 0.0};
  if (frac == Rational(1, 2)) return {-1.0, 0.0};
  if (frac == Rational(1, 4)) return {0.0, 1.0};
  if (frac == Rational(3, 4)) return {0.0, -1.0};
  const double x = static_cast<double>(BigFloat(frac));
  return std::polar(1.0, 2.0 * std::numbers::pi * x);
}

Complex quad_phase(const QuadElement& turns) {
  if (turns.b == 0) return unit_phase(turns.a);
  const BigFloat root2 = boost::multiprecision::sqrt(BigFloat(2));
  const BigFloat total =
      BigFloat(reduce_mod_one(turns.a)) + BigFloat(turns.b) * root2;
  return std::polar(1.0, 2.0 * std::numbers::pi * fractional_big(total));
}

std::vector<Rational> sqrt2_convergents(int count) {
  if (count < 1) {
    throw PreconditionError("invalid_length",
                            "need at least one convergent",
                            {{"count", static_cast<double>(count)}});
  }
  std::vector<Rational> out;
  out.reserve(count);
  BigInt p = 1;
  BigInt q = 1;
  for (int m = 0; m < count; ++m) {
    out.emplace_back(p, q);
    const BigInt next_p = p + 2 * q;
    const BigInt next_q = p + q;
    p = next_p;
    q = next_q;
  }
  return out;
}

NullSequence adversarial_null_sequence(int length, const Rational& scale) {
  if (length < 1 || length > 512) {
    throw PreconditionError("invalid_length",
                            "sequence length must be between 1 and 512",
                            {{"length", static_cast<double>(length)}});
  }
  if (scale == 0) {
    throw PreconditionError("invalid_scale",
                            "adversarial scale must be nonzero");
  }
  NullSequence seq;
  seq.label = "adversarial(scale=" + scale.str() + ")";
  for (const Rational& pq : sqrt2_convergents(length)) {
    seq.terms.push_back(QuadElement{-scale * pq, scale});
  }
  return seq;
}

NullSequence tame_null_sequence(int length) {
  if (length < 1 || length > 512) {
    throw PreconditionError("invalid_length",
                            "sequence length must be between 1 and 512",
                            {{"length", static_cast<double>(length)}});
  }
  NullSequence seq;
  seq.label = "factorial";
  Rational term = 1;
  for (int m = 1; m <= length; ++m) {
    term /= m;
    seq.terms.push_back(quad_from_rational(term));
  }
  return seq;
}

BlockRepresentation::BlockRepresentation(std::vector<Block> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty()) {
    throw PreconditionError("empty_family", "need at least one block");
  }
  for (const Block& b : blocks_) {
    if (b.dim < 1) {
      throw PreconditionError("invalid_block",
                              "block dimension must be positive",
                              {{"dim", static_cast<double>(b.dim)}});
    }
    offsets_.push_back(dim_);
    dim_ += b.dim;
  }
}

QuadElement BlockRepresentation::phase_turns(int block_index,
                                             const QuadElement& t) const {
  const Block& b = blocks_.at(block_index);
  if (b.mode == BlockMode::Continuous) {
    return {b.rate * t.a, b.rate * t.b};
  }
  return {b.rate * t.b, 0};
}

Complex BlockRepresentation::phase(int block_index,
                                   const QuadElement& t) const {
  return quad_phase(phase_turns(block_index, t));
}

Vector BlockRepresentation::apply(const QuadElement& t,
                                  const Vector& v) const {
  if (v.size() != dim_) {
    throw PreconditionError("dimension_mismatch",
                            "vector does not match the representation",
                            {{"expected", static_cast<double>(dim_)},
                             {"found", static_cast<double>(v.size())}});
  }
  Vector out(dim_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Complex ph = phase(static_cast<int>(k), t);
    for (int i = 0; i < blocks_[k].dim; ++i) {
      out(offsets_[k] + i) = ph * v(offsets_[k] + i);
    }
  }
  return out;
}

Matrix BlockRepresentation::matrix(const QuadElement& t) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Complex ph = phase(static_cast<int>(k), t);
    for (int i = 0; i < blocks_[k].dim; ++i) {
      out(offsets_[k] + i, offsets_[k] + i) = ph;
    }
  }
  return out;
}

Rational BlockRepresentation::character_key(int block_index) const {
  const Block& b = blocks_.at(block_index);
  return b.mode == BlockMode::Twisted ? b.rate : Rational(0);
}

std::vector<ProbeResult> orbit_continuity_probe(
    const BlockRepresentation& rep, const Ray& state,
    const std::vector<NullSequence>& sequences, double tol) {
  if (state.dim() != rep.total_dim()) {
    throw PreconditionError("dimension_mismatch",
                            "state does not match the representation",
                            {{"expected",
                              static_cast<double>(rep.total_dim())},
                             {"found", static_cast<double>(state.dim())}});
  }
  if (tol <= 0.0) {
    throw PreconditionError("invalid_tolerance",
                            "probe tolerance must be positive",
                            {{"tol", tol}});
  }

  std::vector<ProbeResult> results;
  for (const NullSequence& seq : sequences) {
    if (seq.terms.empty()) {
      throw PreconditionError("invalid_length",
                              "null sequence has no terms");
    }
    ProbeResult res;
    res.sequence_label = seq.label;
    for (const QuadElement& t : seq.terms) {
      const Ray moved(rep.apply(t, state.rep()));
      res.gaps.push_back(riemannian_distance(moved, state));
    }
    const std::size_t tail_start = seq.terms.size() / 2;
    for (std::size_t m = tail_start; m < res.gaps.size(); ++m) {
      res.sup_tail_gap = std::max(res.sup_tail_gap, res.gaps[m]);
    }
    res.verdict = res.sup_tail_gap > tol ? ProbeVerdict::DiscontinuityWitness
                                         : ProbeVerdict::ContinuousAtZero;
    results.push_back(std::move(res));
  }
  return results;
}

std::vector<ContinuousComponent> continuous_ray_components(
    const BlockRepresentation& rep) {
  std::vector<ContinuousComponent> components;
  for (std::size_t k = 0; k < rep.blocks().size(); ++k) {
    const Rational key = rep.character_key(static_cast<int>(k));
    ContinuousComponent* home = nullptr;
    for (ContinuousComponent& c : components) {
      if (c.character == key) {
        home = &c;
        break;
      }
    }
    if (home == nullptr) {
      components.push_back(ContinuousComponent{key, {}, {}});
      home = &components.back();
    }
    home->blocks.push_back(static_cast<int>(k));
    for (int i = 0; i < rep.blocks()[k].dim; ++i) {
      home->coordinates.push_back(
          static_cast<int>(rep.offsets()[k]) + i);
    }
  }
  return components;
}

std::optional<int> component_of_ray(const BlockRepresentation& rep,
                                    const Ray& state, double leak_tol) {
  if (state.dim() != rep.total_dim()) {
    throw PreconditionError("dimension_mismatch",
                            "state does not match the representation");
  }
  const std::vector<ContinuousComponent> components =
      continuous_ray_components(rep);
  for (std::size_t c = 0; c < components.size(); ++c) {
    double mass = 0.0;
    for (int coord : components[c].coordinates) {
      mass += std::norm(state.rep()(coord));
    }
    if (mass >= 1.0 - leak_tol) return static_cast<int>(c);
  }
  return std::nullopt;
}

Rational tuned_adversarial_scale(const Rational& character_gap) {
  if (character_gap == 0) {
    throw PreconditionError("invalid_scale",
                            "character gap must be nonzero to tune a scale");
  }
  return Rational(1, 2) / boost::multiprecision::abs(character_gap);
}

CrossValidationReport cross_validate_components(const BlockRepresentation& rep,
                                                int sequence_length,
                                                double tol) {
  if (sequence_length < 2 || sequence_length > 512) {
    throw PreconditionError("invalid_length",
                            "sequence length must be between 2 and 512",
                            {{"length",
                              static_cast<double>(sequence_length)}});
  }
  const std::vector<ContinuousComponent> components =
      continuous_ray_components(rep);
  const Eigen::Index n = rep.total_dim();

  CrossValidationReport report;
  report.components_checked = static_cast<int>(components.size());
  report.min_witness_gap =
      components.size() > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  bool all_good = true;

  // Rays supported inside a single component must probe continuous along
  // the default adversarial sequence and the tame one.
  for (const ContinuousComponent& comp : components) {
    Vector v = Vector::Zero(n);
    const double amp = 1.0 / std::sqrt(static_cast<double>(
                                 comp.coordinates.size()));
    for (int coord : comp.coordinates) v(coord) = amp;
    const std::vector<ProbeResult> probes = orbit_continuity_probe(
        rep, Ray(v),
        {adversarial_null_sequence(sequence_length),
         tame_null_sequence(sequence_length)},
        tol);
    for (const ProbeResult& p : probes) {
      report.max_pure_gap = std::max(report.max_pure_gap, p.sup_tail_gap);
      if (p.verdict != ProbeVerdict::ContinuousAtZero) all_good = false;
    }
  }

  // Rays straddling two components must be caught by the sequence tuned to
  // their character gap.
  for (std::size_t c1 = 0; c1 < components.size(); ++c1) {
    for (std::size_t c2 = c1 + 1; c2 < components.size(); ++c2) {
      ++report.pairs_checked;
      Vector v = Vector::Zero(n);
      v(components[c1].coordinates.front()) = std::numbers::sqrt2 / 2.0;
      v(components[c2].coordinates.front()) = std::numbers::sqrt2 / 2.0;
      const Rational gap =
          components[c1].character - components[c2].character;
      const std::vector<ProbeResult> probes = orbit_continuity_probe(
          rep, Ray(v),
          {adversarial_null_sequence(sequence_length,
                                     tuned_adversarial_scale(gap))},
          tol);
      report.min_witness_gap =
          std::min(report.min_witness_gap, probes.front().sup_tail_gap);
      if (probes.front().verdict != ProbeVerdict::DiscontinuityWitness) {
        all_good = false;
      }
    }
  }
  report.agrees = all_good;
  return report;
}

}  // namespace projray
