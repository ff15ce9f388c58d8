#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hgmom/moment_core.hpp"
#include "hgmom/walk_oracle.hpp"
#include "hgmom/weights.hpp"

#include <functional>
#include <map>
#include <set>
#include <vector>

using namespace hgmom;

namespace {

long long count_classes(int k, int q, bool essential_only) {
  long long n = 0;
  enumerate_walk_classes(k, q, essential_only, [&](const WalkClass&) { ++n; });
  return n;
}

// Independent test oracle: E Tr(A^k) / N evaluated literally, by summing
// over every closed vertex tuple and every per-step hyperedge assignment.
// Only usable for tiny N, which is exactly its job.
Rat direct_mean_trace_power(int N, int k, int q, const Rat& p,
                            const WeightMomentSeq& X) {
  if (k == 0) return 1;
  std::vector<std::vector<int>> subsets;
  std::vector<int> comb(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) comb[static_cast<std::size_t>(i)] = i;
  while (true) {
    subsets.push_back(comb);
    int i = q - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == N - q + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < q; ++j)
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  const auto contains_pair = [](const std::vector<int>& s, int a, int b) {
    bool fa = false, fb = false;
    for (int v : s) {
      fa = fa || v == a;
      fb = fb || v == b;
    }
    return fa && fb;
  };
  const Rat theta = p / Rat(rat_pow(Rat(N), q - 1));
  Rat total = 0;
  std::vector<int> verts(static_cast<std::size_t>(k) + 1);
  std::vector<int> edge_of(static_cast<std::size_t>(k));
  std::function<void(int)> edges_rec = [&](int step) {
    if (step == k) {
      std::map<int, int> mult;
      for (int s = 0; s < k; ++s) ++mult[edge_of[static_cast<std::size_t>(s)]];
      Rat term = 1;
      for (const auto& [e, n] : mult) term *= X.value(n) * theta;
      total += term;
      return;
    }
    for (int e = 0; e < static_cast<int>(subsets.size()); ++e) {
      if (!contains_pair(subsets[static_cast<std::size_t>(e)],
                         verts[static_cast<std::size_t>(step)],
                         verts[static_cast<std::size_t>(step) + 1]))
        continue;
      edge_of[static_cast<std::size_t>(step)] = e;
      edges_rec(step + 1);
    }
  };
  std::function<void(int)> verts_rec = [&](int pos) {
    if (pos == k) {
      if (verts[static_cast<std::size_t>(k - 1)] == verts[0]) return;
      verts[static_cast<std::size_t>(k)] = verts[0];
      edges_rec(0);
      return;
    }
    for (int v = 0; v < N; ++v) {
      if (pos > 0 && v == verts[static_cast<std::size_t>(pos - 1)]) continue;
      verts[static_cast<std::size_t>(pos)] = v;
      verts_rec(pos + 1);
    }
  };
  verts_rec(0);
  return total / N;
}

}  // namespace

TEST_CASE("class counts on small lengths") {
  for (int q : {2, 3, 4, 5}) {
    CHECK(count_classes(0, q, true) == 1);
    CHECK(count_classes(1, q, true) == 0);
    CHECK(count_classes(2, q, true) == 1);
  }
  CHECK(count_classes(3, 2, true) == 0);
  CHECK(count_classes(3, 3, true) == 1);
  // the six length-4 shapes exist once the in-edge 4-cycle fits
  CHECK(count_classes(4, 2, true) == 3);
  CHECK(count_classes(4, 3, true) == 5);
  CHECK(count_classes(4, 4, true) == 6);
  CHECK(count_classes(4, 5, true) == 6);
}

TEST_CASE("odd-length essential classes vanish at q=2") {
  for (int k = 1; k <= 9; k += 2) CHECK(count_classes(k, 2, true) == 0);
}

TEST_CASE("enumeration is duplicate-free and satisfies the slot budget") {
  for (int q : {2, 3}) {
    for (int k : {4, 5}) {
      for (bool essential_only : {true, false}) {
        std::set<std::string> keys;
        long long n = 0;
        enumerate_walk_classes(k, q, essential_only, [&](const WalkClass& w) {
          ++n;
          keys.insert(w.canonical_key());
          CHECK(w.length() == k);
          int traversal_total = 0;
          for (const auto& e : w.edges) {
            traversal_total += e.traversals;
            int shared = 0;
            for (const auto& [ids, size] : w.overlap)
              if (std::binary_search(ids.begin(), ids.end(),
                                     static_cast<int>(&e - w.edges.data())))
                shared += size;
            CHECK(static_cast<int>(e.visited.size()) + shared == q);
            CHECK(e.anonymous == shared);
            CHECK(e.traversals >= 1);
          }
          CHECK(traversal_total == k);
          if (essential_only) {
            CHECK(is_essential(w));
            for (const auto& [ids, size] : w.overlap) CHECK(ids.size() == 1);
          }
        });
        CHECK(static_cast<long long>(keys.size()) == n);
      }
    }
  }
}

TEST_CASE("essential classes are exactly the hypertree-skeleton classes") {
  for (int q : {2, 3}) {
    for (int k : {3, 4, 5}) {
      long long essential_in_full = 0;
      enumerate_walk_classes(k, q, false, [&](const WalkClass& w) {
        if (is_essential(w)) ++essential_in_full;
      });
      CHECK(essential_in_full == count_classes(k, q, true));
    }
  }
}

TEST_CASE("single pair-traversal class is essential") {
  WalkClass w;
  bool seen = false;
  enumerate_walk_classes(2, 3, true, [&](const WalkClass& cls) {
    seen = true;
    w = cls;
  });
  REQUIRE(seen);
  CHECK(is_essential(w));
  CHECK(w.visited_count == 2);
  CHECK(w.edge_count() == 1);
  CHECK(w.root_departures() == 1);
  CHECK(w.total_vertices() == 3);  // one anonymous slot at q=3
}

TEST_CASE("two-edge chain of length 4 is essential") {
  const std::vector<WalkStep> steps = {
      {1, 0, 2}, {2, 1, 3}, {3, 1, 2}, {2, 0, 1}};
  for (int q : {2, 3, 5}) {
    std::map<std::vector<int>, int> overlap;
    if (q > 2) {
      overlap[{0}] = q - 2;
      overlap[{1}] = q - 2;
    }
    const auto w = make_walk_class(q, steps, {{1, 2}, {2, 3}}, overlap);
    CHECK(is_essential(w));
    CHECK(w.root_departures() == 1);
  }
}

TEST_CASE("long mixed walk with shared anonymous vertices is not essential") {
  // 21 steps, q=3, ten visited vertices, three unvisited vertices shared
  // across edge groups {e2,e3,e6}, {e4,e5} and {e7}.
  const std::vector<WalkStep> steps = {
      {1, 0, 2},  {2, 1, 3},  {3, 1, 4},  {4, 2, 5},  {5, 2, 4},
      {4, 0, 1},  {1, 3, 6},  {6, 4, 7},  {7, 4, 6},  {6, 3, 1},
      {1, 0, 4},  {4, 1, 2},  {2, 1, 3},  {3, 5, 8},  {8, 6, 9},
      {9, 6, 8},  {8, 5, 3},  {3, 1, 2},  {2, 0, 1},  {1, 7, 10},
      {10, 7, 1}};
  const std::vector<std::vector<int>> edge_vertices = {
      {1, 2, 4}, {2, 3, 4}, {4, 5}, {1, 6}, {6, 7}, {3, 8}, {8, 9}, {1, 10}};
  const std::map<std::vector<int>, int> overlap = {
      {{2, 3, 6}, 1}, {{4, 5}, 1}, {{7}, 1}};
  const auto w = make_walk_class(3, steps, edge_vertices, overlap);
  CHECK(w.visited_count == 10);
  CHECK(w.total_vertices() == 13);
  CHECK(w.edge_count() == 8);
  CHECK_FALSE(is_essential(w));
}

TEST_CASE("class builder rejects malformed walks") {
  CHECK_THROWS_AS(
      make_walk_class(3, {{1, 0, 2}, {2, 0, 1}}, {{1, 2}}, {{{0}, 2}}),
      std::invalid_argument);  // wrong slot budget (needs exactly q vertices)
  CHECK_THROWS_AS(make_walk_class(3, {{1, 0, 2}}, {{1, 2, 3}}, {}),
                  std::invalid_argument);  // not closed
  CHECK_THROWS_AS(
      make_walk_class(3, {{1, 0, 3}, {3, 0, 1}}, {{1, 3}, {}}, {}),
      std::invalid_argument);  // label 3 before 2
  CHECK_THROWS_AS(
      make_walk_class(3, {{1, 0, 2}, {2, 2, 1}}, {{1, 2}, {1, 2}}, {}),
      std::invalid_argument);  // edge id 2 before 1
  CHECK_THROWS_AS(
      make_walk_class(3, {{1, 0, 2}, {2, 1, 1}}, {{1, 2}, {1}}, {{{1}, 2}}),
      std::invalid_argument);  // step endpoint missing from its edge
}

TEST_CASE("oracle moments match closed forms") {
  auto dist = WeightDistribution::two_point(2, -1, Rat(1, 2));
  for (int q : {2, 3, 4}) {
    ModelParams params{Rat(7, 5), q};
    const auto X = dist.exact_moments(4);
    CHECK(oracle_moment(2, params, X) ==
          params.p * X.value(2) * inv_factorial(q - 2));
  }
  CHECK(oracle_moment(3, ModelParams{Rat(2), 2},
                      WeightDistribution::constant(1).exact_moments(3)) == 0);
  CHECK(oracle_moment(4, ModelParams{Rat(1), 2},
                      WeightDistribution::constant(1).exact_moments(4)) == 3);
}

TEST_CASE("oracle equals the recurrence for several weight laws") {
  const std::vector<std::pair<Rat, WeightDistribution>> cases = {
      {Rat(1), WeightDistribution::constant(1)},
      {Rat(2), WeightDistribution::sign()},
      {Rat(7, 5), WeightDistribution::two_point(2, -1, Rat(1, 2))},
      {Rat(1, 3), WeightDistribution::constant(-1)},
  };
  for (int q : {2, 3}) {
    for (const auto& [p, dist] : cases) {
      ModelParams params{p, q};
      const auto X = dist.exact_moments(6);
      MomentEngine engine(params, X);
      const auto m = engine.moments(6);
      for (int k = 0; k <= 6; ++k)
        CHECK(oracle_moment(k, params, X) == m[static_cast<std::size_t>(k)]);
    }
  }
}

TEST_CASE("rooted weight table matches the recurrence and its spot values") {
  auto dist = WeightDistribution::two_point(2, -1, Rat(1, 2));
  ModelParams params{Rat(7, 5), 3};
  const auto X = dist.exact_moments(6);
  MomentEngine engine(params, X);
  auto table = oracle_rooted_weights(6, params, X);
  for (int l = 0; l <= 6; ++l)
    for (int r = 0; r <= l; ++r) {
      const auto it = table.find({l, r});
      const Rat value = it == table.end() ? Rat(0) : it->second;
      CHECK(value == engine.rooted_weight(l, r));
    }

  // spot values, hand-expanded
  const Rat pair = params.p * X.value(2) * inv_factorial(1);
  CHECK(table[{2, 1}] == pair);
  CHECK(table.find({2, 0}) == table.end());
  CHECK(table[{4, 2}] == params.p * X.value(4) * (inv_factorial(1) + inv_factorial(0)) +
                             pair * pair);
}

TEST_CASE("finite-size moments equal the direct trace expectation") {
  auto dist = WeightDistribution::two_point(2, -1, Rat(1, 3));
  ModelParams params2{Rat(3, 2), 2};
  ModelParams params3{Rat(3, 2), 3};
  const auto X = dist.exact_moments(5);
  for (int N : {4, 5}) {
    for (int k = 0; k <= 4; ++k) {
      CHECK(finite_size_moment(N, k, params2, X) ==
            direct_mean_trace_power(N, k, 2, params2.p, X));
      CHECK(finite_size_moment(N, k, params3, X) ==
            direct_mean_trace_power(N, k, 3, params3.p, X));
    }
  }
  CHECK(finite_size_moment(4, 5, params2, X) ==
        direct_mean_trace_power(4, 5, 2, params2.p, X));
}

TEST_CASE("finite-size moments: trivial and closed-form cases") {
  auto X = WeightDistribution::two_point(2, -1, Rat(1, 3)).exact_moments(4);
  ModelParams params{Rat(3, 2), 2};
  for (int N : {20, 40, 80}) {
    CHECK(finite_size_moment(N, 1, params, X) == 0);
    CHECK(finite_size_moment(N, 2, params, X) ==
          params.p * X.value(2) * Rat(N - 1, N));
  }
}

TEST_CASE("finite-size deviation from the limit shrinks like 1/N") {
  auto X = WeightDistribution::constant(1).exact_moments(4);
  ModelParams params{Rat(2), 3};
  for (int k = 2; k <= 4; ++k) {
    const Rat limit = oracle_moment(k, params, X);
    Rat previous = 0;
    for (int N : {20, 40, 80}) {
      const Rat scaled = (finite_size_moment(N, k, params, X) - limit) * N;
      if (previous != 0) {
        const Rat ratio = scaled / previous;
        CHECK(ratio > Rat(3, 10));
        CHECK(ratio < Rat(3));
      }
      previous = scaled;
    }
  }
}

TEST_CASE("finite-size enumeration respects its cap") {
  auto X = WeightDistribution::constant(1).exact_moments(8);
  CHECK_THROWS_AS(finite_size_moment(10, 7, ModelParams{Rat(1), 2}, X, 6),
                  std::length_error);
  CHECK_THROWS_AS(finite_size_moment(2, 2, ModelParams{Rat(1), 3}, X),
                  std::invalid_argument);  // N < q
}

TEST_CASE("limiting class weights match the per-edge product") {
  auto dist = WeightDistribution::two_point(2, -1, Rat(1, 2));
  ModelParams params{Rat(7, 5), 4};
  const auto X = dist.exact_moments(4);
  enumerate_walk_classes(4, 4, true, [&](const WalkClass& w) {
    Rat expect = 1;
    for (const auto& e : w.edges)
      expect *= params.p * X.value(e.traversals) *
                inv_factorial(4 - static_cast<int>(e.visited.size()));
    CHECK(limiting_class_weight(w, params, X) == expect);
  });
  // non-essential classes contribute nothing in the limit
  enumerate_walk_classes(4, 2, false, [&](const WalkClass& w) {
    if (!is_essential(w)) {
      ModelParams p2{Rat(7, 5), 2};
      CHECK(limiting_class_weight(w, p2, X) == 0);
    }
  });
}
