#include "hgmom/moment_core.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace hgmom {
namespace {

// All integer vectors of the given length with entries >= min_entry summing
// to total, in lexicographic order.
void for_each_composition(int total, int length, int min_entry,
                          const std::function<void(const std::vector<int>&)>& fn) {
  if (length == 0) {
    if (total == 0) {
      static const std::vector<int> kEmpty;
      fn(kEmpty);
    }
    return;
  }
  std::vector<int> parts(static_cast<std::size_t>(length), 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == length - 1) {
      if (remaining >= min_entry) {
        parts[static_cast<std::size_t>(pos)] = remaining;
        fn(parts);
      }
      return;
    }
    const int reserve = min_entry * (length - pos - 1);
    for (int v = min_entry; v <= remaining - reserve; ++v) {
      parts[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, remaining - v);
    }
  };
  rec(0, total);
}

}  // namespace

long long WithinEdgeWalkTable::count(int vertex_count, int end_vertex,
                                     const std::vector<int>& departures) {
  if (vertex_count < 1)
    throw std::invalid_argument("vertex_count must be at least 1");
  if (static_cast<int>(departures.size()) != vertex_count)
    throw std::invalid_argument("departure vector length does not match vertex count");
  if (end_vertex < 1 || end_vertex > vertex_count)
    throw std::invalid_argument("end vertex out of range");
  for (int d : departures)
    if (d < 0) throw std::invalid_argument("negative departure count");

  if (vertex_count == 1) return departures[0] == 0 ? 1 : 0;

  const auto key = std::make_tuple(vertex_count, end_vertex, departures);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  long long total = 0;
  std::vector<int> reduced = departures;
  for (int a = 1; a <= vertex_count; ++a) {
    if (a == end_vertex || departures[a - 1] == 0) continue;
    --reduced[a - 1];
    total += count(vertex_count, a, reduced);
    ++reduced[a - 1];
  }
  if (end_vertex == vertex_count && departures[vertex_count - 1] == 0) {
    std::vector<int> dropped(departures.begin(), departures.end() - 1);
    for (int a = 1; a <= vertex_count - 1; ++a) {
      if (dropped[a - 1] == 0) continue;
      --dropped[a - 1];
      total += count(vertex_count - 1, a, dropped);
      ++dropped[a - 1];
    }
  }
  memo_.emplace(key, total);
  return total;
}

MomentEngine::MomentEngine(ModelParams params, WeightMomentSeq weights)
    : params_(std::move(params)), weights_(std::move(weights)) {
  params_.validate();
}

Rat MomentEngine::rooted_weight(int length, int root_departures) {
  if (length < 0 || root_departures < 0)
    throw std::invalid_argument("negative walk length or departure count");
  if (root_departures == 0) return length == 0 ? 1 : 0;
  if (length > weights_.order())
    throw std::out_of_range("weight moments too short for requested length");

  const auto key = std::make_pair(length, root_departures);
  if (auto it = rooted_memo_.find(key); it != rooted_memo_.end())
    return it->second;

  Rat total = 0;
  for (int core_size = 1; core_size <= params_.q; ++core_size) {
    const Rat slot_factor = inv_factorial(params_.q - core_size);
    for (int core_steps = core_size; core_steps <= length; ++core_steps) {
      for_each_composition(core_steps, core_size, 1, [&](const std::vector<int>& f) {
        if (f[0] > root_departures) return;
        const long long core = edge_walks_.count(core_size, 1, f);
        if (core == 0) return;
        const Int root_codes = binomial(root_departures - 1, f[0] - 1);
        if (root_codes == 0) return;
        const Rat base = params_.p * weights_.value(core_steps) * slot_factor *
                         Rat(core) * Rat(root_codes);
        const int subtree_steps = length - core_steps;
        const int root_subwalk = root_departures - f[0];
        for_each_composition(subtree_steps, core_size, 0, [&](const std::vector<int>& u) {
          if (root_subwalk > u[0]) return;
          Rat term = rooted_weight(u[0], root_subwalk);
          if (term == 0) return;
          for (int i = 1; i < core_size && term != 0; ++i) {
            Rat inner = 0;
            for (int v = 0; v <= u[static_cast<std::size_t>(i)]; ++v) {
              const Int codes = binomial(f[static_cast<std::size_t>(i)] + v - 1,
                                         f[static_cast<std::size_t>(i)] - 1);
              if (codes == 0) continue;
              const Rat sub = rooted_weight(u[static_cast<std::size_t>(i)], v);
              if (sub == 0) continue;
              inner += Rat(codes) * sub;
            }
            term *= inner;
          }
          if (term != 0) total += base * term;
        });
      });
    }
  }
  rooted_memo_.emplace(key, total);
  return total;
}

Rat MomentEngine::rooted_weight_collapsed(int length, int root_departures) {
  if (length < 0 || root_departures < 0)
    throw std::invalid_argument("negative walk length or departure count");
  if (root_departures == 0) return length == 0 ? 1 : 0;
  if (length > weights_.order())
    throw std::out_of_range("weight moments too short for requested length");

  const auto key = std::make_pair(length, root_departures);
  if (auto it = collapsed_memo_.find(key); it != collapsed_memo_.end())
    return it->second;

  Rat total = 0;
  for (int core_steps = 1; core_steps <= length; ++core_steps) {
    const Rat weight = weights_.value(core_steps);
    if (weight == 0) continue;
    for (int core_size = 1; core_size <= params_.q; ++core_size) {
      const Rat slot_factor = inv_factorial(params_.q - core_size);
      for_each_composition(core_steps, core_size, 0, [&](const std::vector<int>& f) {
        if (f[0] > root_departures) return;
        const long long core = edge_walks_.count(core_size, 1, f);
        if (core == 0) return;
        const Int root_codes = binomial(root_departures - 1, f[0] - 1);
        if (root_codes == 0) return;
        const Rat base =
            params_.p * weight * slot_factor * Rat(core) * Rat(root_codes);
        for_each_composition(length - core_steps, core_size, 0,
                             [&](const std::vector<int>& u) {
          Rat term = rooted_weight_collapsed(u[0], root_departures - f[0]);
          if (term == 0) return;
          for (int i = 1; i < core_size && term != 0; ++i) {
            Rat inner = 0;
            for (int v = 0; v <= u[static_cast<std::size_t>(i)] / 2; ++v) {
              const Int codes = binomial(f[static_cast<std::size_t>(i)] + v - 1,
                                         f[static_cast<std::size_t>(i)] - 1);
              if (codes == 0) continue;
              inner += Rat(codes) *
                       rooted_weight_collapsed(u[static_cast<std::size_t>(i)], v);
            }
            term *= inner;
          }
          if (term != 0) total += base * term;
        });
      });
    }
  }
  collapsed_memo_.emplace(key, total);
  return total;
}

std::vector<Rat> MomentEngine::moments(int k_max) {
  if (k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
  std::vector<Rat> result;
  result.reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    Rat mk = 0;
    for (int r = 0; r <= k / 2; ++r) mk += rooted_weight(k, r);
    result.push_back(std::move(mk));
  }
  return result;
}

std::vector<std::pair<int, double>> carleman_root_sequence(
    const std::vector<Rat>& moments) {
  std::vector<std::pair<int, double>> roots;
  for (int k = 1; 2 * k < static_cast<int>(moments.size()); ++k) {
    const Rat& m = moments[static_cast<std::size_t>(2 * k)];
    if (m < 0)
      throw std::domain_error("negative even moment m_" + std::to_string(2 * k));
    roots.emplace_back(k, std::pow(to_double(m), 1.0 / (2.0 * k)));
  }
  return roots;
}

}  // namespace hgmom
