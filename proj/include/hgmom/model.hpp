#pragma once

#include "hgmom/rational.hpp"

#include <vector>

namespace hgmom {

/// Ensemble parameters: each q-subset of the N vertices carries a hyperedge
/// with probability p / N^(q-1), independently of all others.
struct ModelParams {
  Rat p = 1;  // sparsity; must be positive
  int q = 3;  // vertices per hyperedge; must be >= 2

  void validate() const;
};

/// Exact moments X_1..X_n of the i.i.d. hyperedge weight law (X_0 == 1 is
/// implicit).  Construction enforces the necessary moment-sequence
/// conditions: even moments are nonnegative and X_2 >= X_1^2.
class WeightMomentSeq {
 public:
  explicit WeightMomentSeq(std::vector<Rat> moments);

  int order() const { return static_cast<int>(moments_.size()); }

  // X_k for k >= 0; throws std::out_of_range past the stored order.
  Rat value(int k) const;

  // True when X_{2m} <= (bound * m)^{2m} holds for all 2m <= order.
  bool satisfies_growth_bound(const Rat& bound) const;

 private:
  std::vector<Rat> moments_;
};

}  // namespace hgmom
