#include "hgmom/model.hpp"

#include <stdexcept>

namespace hgmom {

void ModelParams::validate() const {
  if (p <= 0) throw std::invalid_argument("sparsity p must be positive");
  if (q < 2) throw std::invalid_argument("hyperedge size q must be at least 2");
}

WeightMomentSeq::WeightMomentSeq(std::vector<Rat> moments)
    : moments_(std::move(moments)) {
  for (std::size_t i = 1; i < moments_.size(); i += 2) {
    if (moments_[i] < 0)
      throw std::invalid_argument("even weight moment X_" +
                                  std::to_string(i + 1) + " is negative");
  }
  if (moments_.size() >= 2 && moments_[1] < moments_[0] * moments_[0])
    throw std::invalid_argument("weight moments violate X_2 >= X_1^2");
}

Rat WeightMomentSeq::value(int k) const {
  if (k == 0) return 1;
  if (k < 0 || k > order())
    throw std::out_of_range("weight moment X_" + std::to_string(k) +
                            " not available (order " +
                            std::to_string(order()) + ")");
  return moments_[static_cast<std::size_t>(k) - 1];
}

bool WeightMomentSeq::satisfies_growth_bound(const Rat& bound) const {
  for (int m = 1; 2 * m <= order(); ++m) {
    if (value(2 * m) > rat_pow(bound * m, 2 * m)) return false;
  }
  return true;
}

}  // namespace hgmom
