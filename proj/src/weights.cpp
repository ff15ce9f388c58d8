#include "hgmom/weights.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hgmom {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

Int double_factorial_odd(int k) {
  // (k-1)!! for even k: 1 * 3 * ... * (k-1)
  Int result = 1;
  for (int i = 1; i < k; i += 2) result *= i;
  return result;
}

}  // namespace

WeightDistribution WeightDistribution::constant(Rat c) {
  WeightDistribution d;
  d.kind_ = Kind::Constant;
  d.samples_ = {to_double(c)};
  d.params_ = {std::move(c)};
  return d;
}

WeightDistribution WeightDistribution::sign() {
  WeightDistribution d;
  d.kind_ = Kind::Sign;
  return d;
}

WeightDistribution WeightDistribution::two_point(Rat a, Rat b, Rat prob_a) {
  if (prob_a < 0 || prob_a > 1)
    throw std::invalid_argument("two-point probability must lie in [0, 1]");
  WeightDistribution d;
  d.kind_ = Kind::TwoPoint;
  d.samples_ = {to_double(a), to_double(b), to_double(prob_a)};
  d.params_ = {std::move(a), std::move(b), std::move(prob_a)};
  return d;
}

WeightDistribution WeightDistribution::gaussian(Rat sigma) {
  if (sigma < 0) throw std::invalid_argument("gaussian sigma must be nonnegative");
  WeightDistribution d;
  d.kind_ = Kind::Gaussian;
  d.samples_ = {to_double(sigma)};
  d.params_ = {std::move(sigma)};
  return d;
}

WeightDistribution WeightDistribution::from_moments(std::vector<Rat> moments) {
  WeightDistribution d;
  d.kind_ = Kind::MomentsOnly;
  d.params_ = std::move(moments);
  return d;
}

WeightDistribution WeightDistribution::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (name == "sign") {
    if (!args.empty())
      throw std::invalid_argument("sign distribution takes no arguments");
    return sign();
  }
  if (name == "const") return constant(parse_rational(args));
  if (name == "gauss") return gaussian(parse_rational(args));
  if (name == "twopoint") {
    const auto parts = split(args, ',');
    if (parts.size() != 3)
      throw std::invalid_argument("twopoint expects a,b,pi");
    return two_point(parse_rational(parts[0]), parse_rational(parts[1]),
                     parse_rational(parts[2]));
  }
  if (name == "moments") {
    const auto parts = split(args, ',');
    if (parts.empty()) throw std::invalid_argument("moments list is empty");
    std::vector<Rat> xs;
    xs.reserve(parts.size());
    for (const auto& p : parts) xs.push_back(parse_rational(p));
    return from_moments(std::move(xs));
  }
  throw std::invalid_argument("unknown weight distribution: " + text);
}

Rat WeightDistribution::exact_moment(int k) const {
  if (k < 0) throw std::invalid_argument("negative moment order");
  if (k == 0) return 1;
  switch (kind_) {
    case Kind::Constant:
      return rat_pow(params_[0], k);
    case Kind::Sign:
      return k % 2 == 0 ? 1 : 0;
    case Kind::TwoPoint: {
      const Rat& pi = params_[2];
      return pi * rat_pow(params_[0], k) + (1 - pi) * rat_pow(params_[1], k);
    }
    case Kind::Gaussian:
      if (k % 2 == 1) return 0;
      return rat_pow(params_[0], k) * Rat(double_factorial_odd(k));
    case Kind::MomentsOnly:
      if (k > static_cast<int>(params_.size()))
        throw std::out_of_range("moment order beyond supplied list");
      return params_[static_cast<std::size_t>(k) - 1];
  }
  throw std::logic_error("unreachable");
}

WeightMomentSeq WeightDistribution::exact_moments(int k_max) const {
  std::vector<Rat> xs;
  xs.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) xs.push_back(exact_moment(k));
  return WeightMomentSeq(std::move(xs));
}

double WeightDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::Constant:
      return samples_[0];
    case Kind::Sign:
      return rng.next_unit() < 0.5 ? 1.0 : -1.0;
    case Kind::TwoPoint:
      return rng.next_unit() < samples_[2] ? samples_[0] : samples_[1];
    case Kind::Gaussian:
      return samples_[0] * rng.next_normal();
    case Kind::MomentsOnly:
      throw std::logic_error("moments-only distribution cannot be sampled");
  }
  throw std::logic_error("unreachable");
}

double WeightDistribution::growth_constant() const {
  switch (kind_) {
    case Kind::Constant:
      return std::max(1.0, std::abs(to_double(params_[0])));
    case Kind::Sign:
      return 1.0;
    case Kind::TwoPoint:
      return std::max({1.0, std::abs(to_double(params_[0])),
                       std::abs(to_double(params_[1]))});
    case Kind::Gaussian:
      // X_{2m} = sigma^{2m} (2m-1)!! <= (sigma sqrt(2) m)^{2m}
      return std::max(1.0, to_double(params_[0]) * std::sqrt(2.0));
    case Kind::MomentsOnly:
      throw std::logic_error("moments-only distribution declares no growth bound");
  }
  throw std::logic_error("unreachable");
}

std::string WeightDistribution::describe() const {
  switch (kind_) {
    case Kind::Constant:
      return "const:" + to_fraction_string(params_[0]);
    case Kind::Sign:
      return "sign";
    case Kind::TwoPoint:
      return "twopoint:" + to_fraction_string(params_[0]) + "," +
             to_fraction_string(params_[1]) + "," + to_fraction_string(params_[2]);
    case Kind::Gaussian:
      return "gauss:" + to_fraction_string(params_[0]);
    case Kind::MomentsOnly: {
      std::string out = "moments:";
      for (std::size_t i = 0; i < params_.size(); ++i) {
        if (i) out += ',';
        out += to_fraction_string(params_[i]);
      }
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace hgmom
