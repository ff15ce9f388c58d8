#pragma once

#include "hgmom/model.hpp"
#include "hgmom/rational.hpp"
#include "hgmom/rng.hpp"

#include <string>
#include <vector>

namespace hgmom {

/// The i.i.d. hyperedge weight law: exposes exact moments for the
/// recurrence/oracle paths and sampling for Monte Carlo.
///
/// Flag grammar (used by the CLI and by parse()):
///   const:c          point mass at c
///   sign             +1 or -1 with probability 1/2 each
///   twopoint:a,b,pi  a with probability pi, b with probability 1-pi
///   gauss:sigma      centered normal with standard deviation sigma
///   moments:x1,x2,.. raw exact moments only; sampling unsupported
class WeightDistribution {
 public:
  enum class Kind { Constant, Sign, TwoPoint, Gaussian, MomentsOnly };

  static WeightDistribution constant(Rat c);
  static WeightDistribution sign();
  static WeightDistribution two_point(Rat a, Rat b, Rat prob_a);
  static WeightDistribution gaussian(Rat sigma);
  static WeightDistribution from_moments(std::vector<Rat> moments);
  static WeightDistribution parse(const std::string& text);

  Kind kind() const { return kind_; }
  bool can_sample() const { return kind_ != Kind::MomentsOnly; }

  Rat exact_moment(int k) const;
  WeightMomentSeq exact_moments(int k_max) const;

  double sample(Rng& rng) const;

  // A constant C with X_{2m} <= (C m)^{2m} for every m >= 1.
  double growth_constant() const;

  std::string describe() const;

 private:
  WeightDistribution() = default;
  Kind kind_ = Kind::Constant;
  std::vector<Rat> params_;       // variant-specific
  std::vector<double> samples_;   // cached doubles for the sampler
};

}  // namespace hgmom
